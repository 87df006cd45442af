#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ergo {

// Exact nonnegative rational, always stored in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double as_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
};

} // namespace ergo
