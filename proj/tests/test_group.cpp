#include <doctest.h>

#include <array>
#include <random>
#include <unordered_set>

#include "ergo/group.hpp"

using namespace ergo;

namespace {

// Independent oracle for the Heisenberg group: upper-triangular 3x3 integer
// matrices [[1,a,c],[0,1,b],[0,0,1]].
using Mat3 = std::array<std::int64_t, 9>;

Mat3 heis_matrix(const GroupElement& g) {
    return {1, g.coords[0], g.coords[2], 0, 1, g.coords[1], 0, 0, 1};
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
    return c;
}

GroupElement random_heis(const GroupModel& g, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> d(-6, 6);
    return g.element({d(rng), d(rng), d(rng)});
}

// Symmetric group S3 as a multiplication table, identity at index 0.
GroupModel make_s3() {
    const std::array<std::array<int, 3>, 6> perms = {{
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2},
    }};
    auto compose = [&](int i, int j) { // (p_i . p_j)(x) = p_i(p_j(x))
        std::array<int, 3> c{};
        for (int x = 0; x < 3; ++x) c[x] = perms[i][perms[j][x]];
        for (int k = 0; k < 6; ++k)
            if (perms[k] == c) return k;
        return -1;
    };
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) table[i][j] = compose(i, j);
    return GroupModel::finite(table, {1, 3}); // a 3-cycle and a transposition
}

} // namespace

TEST_CASE("Zd arithmetic") {
    auto g = GroupModel::zd(1);
    CHECK(g.multiply(g.element({3}), g.element({4})) == g.element({7}));
    CHECK(g.inverse(g.element({5})) == g.element({-5}));
    CHECK(g.multiply(g.element({5}), g.inverse(g.element({5}))) == g.identity());

    auto g2 = GroupModel::zd(2);
    CHECK(g2.multiply(g2.element({2, -1}), g2.element({-3, 4})) == g2.element({-1, 3}));
    CHECK(g2.inverse(g2.element({2, -1})) == g2.element({-2, 1}));
}

TEST_CASE("Heisenberg normal form") {
    auto g = GroupModel::heisenberg();
    auto x = g.element({1, 0, 0});
    auto y = g.element({0, 1, 0});
    auto z = g.element({0, 0, 1});

    CHECK(g.multiply(x, y) == g.element({1, 1, 1}));
    CHECK(g.multiply(y, x) == g.element({1, 1, 0}));
    // commutator [x,y] = x y x^-1 y^-1 = z
    auto comm = g.multiply(g.multiply(x, y), g.multiply(g.inverse(x), g.inverse(y)));
    CHECK(comm == z);
    // z is central
    CHECK(g.multiply(z, x) == g.multiply(x, z));
    CHECK(g.multiply(z, y) == g.multiply(y, z));
}

TEST_CASE("Heisenberg agrees with the 3x3 matrix model") {
    auto g = GroupModel::heisenberg();
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto a = random_heis(g, rng);
        auto b = random_heis(g, rng);
        CHECK(heis_matrix(g.multiply(a, b)) == mat_mul(heis_matrix(a), heis_matrix(b)));
        CHECK(mat_mul(heis_matrix(a), heis_matrix(g.inverse(a))) == heis_matrix(g.identity()));
    }
}

TEST_CASE("associativity on sampled triples") {
    std::mt19937_64 rng(13);
    auto check_assoc = [&](const GroupModel& g, auto sample) {
        for (int t = 0; t < 100; ++t) {
            auto a = sample(), b = sample(), c = sample();
            CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
        }
    };
    auto z2 = GroupModel::zd(2);
    std::uniform_int_distribution<std::int64_t> d(-9, 9);
    check_assoc(z2, [&] { return z2.element({d(rng), d(rng)}); });
    auto h = GroupModel::heisenberg();
    check_assoc(h, [&] { return random_heis(h, rng); });
    auto s3 = make_s3();
    std::uniform_int_distribution<std::int64_t> ds(0, 5);
    check_assoc(s3, [&] { return s3.element({ds(rng)}); });
}

TEST_CASE("relation words evaluate to the identity") {
    auto eval_relations = [](const GroupModel& g) {
        for (const auto& word : g.relations()) {
            auto acc = g.identity();
            for (int s : word) {
                auto gen = g.generators()[static_cast<std::size_t>(std::abs(s) - 1)];
                acc = g.multiply(acc, s > 0 ? gen : g.inverse(gen));
            }
            CHECK(acc == g.identity());
        }
    };
    eval_relations(GroupModel::zd(3));
    eval_relations(GroupModel::heisenberg());
    eval_relations(make_s3());
}

TEST_CASE("finite table validation") {
    CHECK_THROWS(GroupModel::finite({{1, 0}, {0, 1}}, {1})); // index 0 not identity
    auto s3 = make_s3();
    CHECK(s3.finite_size() == 6);
    auto a = s3.element({1});
    CHECK(s3.multiply(a, s3.multiply(a, a)) == s3.identity()); // 3-cycle cubes to e
}

TEST_CASE("Folner set shapes and sizes") {
    FolnerFamily fz(std::make_shared<GroupModel>(GroupModel::zd(1)));
    auto f3 = fz.set(3);
    CHECK(f3.size() == 3);
    std::unordered_set<GroupElement, GroupElementHash> s(f3.begin(), f3.end());
    CHECK(s.count(fz.model().element({0})) == 1);
    CHECK(s.count(fz.model().element({2})) == 1);
    CHECK(s.count(fz.model().element({3})) == 0);

    FolnerFamily fz2(std::make_shared<GroupModel>(GroupModel::zd(2)));
    CHECK(fz2.size(10) == 100);

    FolnerFamily fh(std::make_shared<GroupModel>(GroupModel::heisenberg()));
    CHECK(fh.size(2) == 16); // k * k * k^2
    CHECK(fh.set(2).size() == 16);

    FolnerFamily fs(std::make_shared<GroupModel>(make_s3()));
    CHECK(fs.size(1) == 6);
    CHECK(fs.size(7) == 6); // F_k = G always
}

TEST_CASE("defect values") {
    FolnerFamily fz(std::make_shared<GroupModel>(GroupModel::zd(1)));
    CHECK(fz.defect(10, fz.model().identity()) == Rational(0, 1));
    CHECK(fz.defect(10, fz.model().element({1})) == Rational(1, 5));
    CHECK(fz.defect(10, fz.model().element({-1})) == Rational(1, 5));
    CHECK(fz.defect(10, fz.model().element({12})) == Rational(2, 1)); // disjoint translate

    FolnerFamily fz2(std::make_shared<GroupModel>(GroupModel::zd(2)));
    CHECK(fz2.defect(10, fz2.model().element({1, 0})) == Rational(1, 5));

    FolnerFamily fs(std::make_shared<GroupModel>(make_s3()));
    for (int i = 0; i < 6; ++i) CHECK(fs.defect(3, fs.model().element({i})) == Rational(0, 1));
}

TEST_CASE("defect decays along the doubling schedule") {
    auto check_decay = [](const FolnerFamily& f, std::size_t kmax) {
        for (const auto& gen : f.model().generators()) {
            for (std::size_t k = 1; k <= kmax; ++k) {
                CHECK(f.defect(2 * k, gen).as_double() <= f.defect(k, gen).as_double() + 1e-12);
            }
            CHECK(f.defect(2 * kmax, gen).as_double() < 0.75);
        }
    };
    check_decay(FolnerFamily(std::make_shared<GroupModel>(GroupModel::zd(1))), 100);
    check_decay(FolnerFamily(std::make_shared<GroupModel>(GroupModel::zd(2))), 100);
    // Heisenberg sets grow like k^4; keep the doubled index small.
    check_decay(FolnerFamily(std::make_shared<GroupModel>(GroupModel::heisenberg())), 6);
    check_decay(FolnerFamily(std::make_shared<GroupModel>(make_s3())), 10);
}
