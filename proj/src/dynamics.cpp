#include "ergo/dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const ComplexMatrix& x) {
    EMat m(x.dim(), x.dim());
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) m(i, j) = x(i, j);
    return m;
}

// Conjugation superoperator in row-major vec convention:
// vec(U x U^H)[(i,j)] = sum_{k,l} U(i,k) conj(U(j,l)) vec(x)[(k,l)].
EMat conjugation_superop(const ComplexMatrix& u) {
    const int n = u.dim();
    EMat a(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    a(i * n + j, k * n + l) = u(i, k) * std::conj(u(j, l));
    return a;
}

BlockElement evaluate_word(const WStarSystem& sys, const std::vector<int>& word) {
    BlockElement w = BlockElement::identity(sys.dims);
    for (int t : word) {
        const std::size_t gi = static_cast<std::size_t>(std::abs(t)) - 1;
        const BlockElement& u = sys.gen_unitaries.at(gi);
        w = (t > 0) ? w.mul(u) : w.mul(u.adjoint());
    }
    return w;
}

} // namespace

ValidationReport validate_system(const WStarSystem& sys) {
    ValidationReport rep;
    const auto push = [&rep](std::string name, double residual, double tol, std::string detail) {
        rep.checks.push_back({std::move(name), residual, tol, residual <= tol, std::move(detail)});
    };

    if (sys.gen_unitaries.size() != sys.group->generators().size())
        throw std::invalid_argument("system: one unitary per group generator required");
    for (const auto& u : sys.gen_unitaries)
        if (u.dims() != sys.dims)
            throw std::invalid_argument("system: unitary signature mismatch");
    if (sys.rho.densities.size() != sys.dims.size())
        throw std::invalid_argument("system: rho signature mismatch");

    // unitarity
    for (std::size_t g = 0; g < sys.gen_unitaries.size(); ++g) {
        double worst = 0;
        int worst_block = 0;
        for (std::size_t b = 0; b < sys.dims.size(); ++b) {
            const auto& u = sys.gen_unitaries[g].blocks[b];
            const double r =
                (u.mul_adjoint(u) - ComplexMatrix::identity(u.dim())).frobenius_norm();
            if (r > worst) { worst = r; worst_block = static_cast<int>(b); }
        }
        push("unitarity[gen " + std::to_string(g) + "]", worst, 1e-10,
             "worst block " + std::to_string(worst_block));
    }

    // rho-invariance: U delta = delta U per block per generator
    for (std::size_t g = 0; g < sys.gen_unitaries.size(); ++g) {
        double worst = 0;
        int worst_block = 0;
        for (std::size_t b = 0; b < sys.dims.size(); ++b) {
            const auto& u = sys.gen_unitaries[g].blocks[b];
            const auto& d = sys.rho.densities[b];
            const double r = (u.mul(d) - d.mul(u)).frobenius_norm();
            if (r > worst) { worst = r; worst_block = static_cast<int>(b); }
        }
        push("rho_invariance[gen " + std::to_string(g) + "]", worst, 1e-10,
             "worst block " + std::to_string(worst_block));
    }

    // faithfulness: every block density full rank, every block weight positive
    {
        double min_eig = 1e300;
        double min_weight = 1e300;
        for (std::size_t b = 0; b < sys.dims.size(); ++b) {
            const auto eig = hermitian_eig(sys.rho.densities[b]);
            min_eig = std::min(min_eig, eig.eigenvalues.front());
            min_weight = std::min(min_weight, sys.rho.weights[b]);
        }
        push("rho_faithful_density", min_eig >= 1e-8 ? 0.0 : 1e-8 - min_eig, 0.0,
             "min eigenvalue " + std::to_string(min_eig));
        push("rho_faithful_weights", min_weight > 0 ? 0.0 : 1.0, 0.0, "");
    }

    // rho is a state
    {
        double r = 0;
        try {
            sys.rho.validate();
        } catch (const std::exception&) {
            r = 1;
        }
        push("rho_state", r, 0.0, "");
    }

    // group relations hold in the unitaries
    {
        const auto& rels = sys.group->relations();
        for (std::size_t ri = 0; ri < rels.size(); ++ri) {
            const BlockElement w = evaluate_word(sys, rels[ri]);
            const BlockElement id = BlockElement::identity(sys.dims);
            double r = 0;
            for (std::size_t b = 0; b < sys.dims.size(); ++b)
                r = std::max(r, (w.blocks[b] - id.blocks[b]).frobenius_norm());
            push("relation[" + std::to_string(ri) + "]", r, 1e-8, "");
        }
    }

    return rep;
}

ActionEvaluator::ActionEvaluator(const WStarSystem& sys)
    : sys_(&sys), powers_(sys.gen_unitaries.size()) {}

const BlockElement& ActionEvaluator::generator_power(std::size_t gen, std::int64_t exp) {
    auto& cache = powers_[gen];
    if (auto it = cache.find(exp); it != cache.end()) return it->second;
    BlockElement v;
    if (exp == 0) {
        v = BlockElement::identity(sys_->dims);
    } else if (exp == 1) {
        v = sys_->gen_unitaries[gen];
    } else if (exp == -1) {
        v = sys_->gen_unitaries[gen].adjoint();
    } else {
        const std::int64_t step = exp > 0 ? 1 : -1;
        v = generator_power(gen, exp - step).mul(generator_power(gen, step));
    }
    return cache.emplace(exp, std::move(v)).first->second;
}

void ActionEvaluator::expand_finite() {
    if (finite_expanded_) return;
    finite_expanded_ = true;
    const GroupModel& m = *sys_->group;
    memo_.emplace(m.identity(), BlockElement::identity(sys_->dims));
    // breadth-first over right multiplication by generators
    std::vector<GroupElement> frontier{m.identity()};
    while (!frontier.empty()) {
        std::vector<GroupElement> next;
        for (const auto& g : frontier) {
            const BlockElement ug = memo_.at(g);
            for (std::size_t s = 0; s < m.generators().size(); ++s) {
                const GroupElement h = m.multiply(g, m.generators()[s]);
                if (memo_.count(h)) continue;
                memo_.emplace(h, ug.mul(sys_->gen_unitaries[s]));
                next.push_back(h);
            }
        }
        frontier = std::move(next);
    }
    if (memo_.size() != m.finite_size())
        throw std::invalid_argument("finite group generators do not generate the group");
}

const BlockElement& ActionEvaluator::unitary(const GroupElement& g) {
    if (g.model_tag != sys_->group->tag())
        throw std::invalid_argument("act: element from a different group");
    if (sys_->group->kind() == GroupKind::Finite) expand_finite();
    if (auto it = memo_.find(g); it != memo_.end()) return it->second;
    BlockElement u = BlockElement::identity(sys_->dims);
    for (const auto& [gen, exp] : sys_->group->normal_form_word(g))
        u = u.mul(generator_power(static_cast<std::size_t>(gen), exp));
    return memo_.emplace(g, std::move(u)).first->second;
}

BlockElement ActionEvaluator::act(const GroupElement& g, const BlockElement& x) {
    const BlockElement& u = unitary(g);
    BlockElement r;
    for (std::size_t b = 0; b < x.blocks.size(); ++b)
        r.blocks.push_back(u.blocks[b].mul(x.blocks[b]).mul_adjoint(u.blocks[b]));
    return r;
}

BlockElement ergodic_average(ActionEvaluator& eval, const BlockElement& x, std::size_t k) {
    const auto fk = eval.system().folner().set(k);
    BlockElement sum = BlockElement::zero(eval.system().dims);
    for (const auto& g : fk) sum.add_scaled(eval.act(g, x), 1.0);
    sum.scale(1.0 / static_cast<double>(fk.size()));
    return sum;
}

std::vector<NormPoint> norm_sequence(ActionEvaluator& eval, const BlockElement& x,
                                     const std::vector<std::size_t>& ks) {
    AverageSweep sweep(eval);
    std::vector<NormPoint> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) {
        sweep.advance_to(k);
        out.push_back({k, sweep.folner_size(), operator_norm(sweep.average(x))});
    }
    return out;
}

AverageSweep::AverageSweep(ActionEvaluator& eval) : eval_(&eval) {
    for (int n : eval.system().dims) sum_.emplace_back(n * n);
}

void AverageSweep::advance_to(std::size_t k) {
    if (k < current_k_) throw std::invalid_argument("AverageSweep: k must not decrease");
    if (k == current_k_) return;
    const auto& sys = eval_->system();
    const auto fk = sys.folner().set(k);
    const auto& kt = kernels::active_kernels();
    for (const auto& g : fk) {
        // skip elements already accumulated from F_{current_k}
        if (current_k_ > 0) {
            const auto& c = g.coords;
            const auto kc = static_cast<std::int64_t>(current_k_);
            bool inside = true;
            switch (sys.group->kind()) {
            case GroupKind::Zd:
                for (auto v : c) inside = inside && v < kc;
                break;
            case GroupKind::Heisenberg:
                inside = c[0] < kc && c[1] < kc && c[2] < kc * kc;
                break;
            case GroupKind::Finite:
                inside = true; // F_k = G for all k
                break;
            }
            if (inside) continue;
        }
        const BlockElement& u = eval_->unitary(g);
        for (std::size_t b = 0; b < sum_.size(); ++b) {
            const ComplexMatrix& ub = u.blocks[b];
            const int n = ub.dim();
            ComplexMatrix& s = sum_[b];
            // S[(i,j), (k,*)] += U(i,k) * conj(U(j,*))
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    cplx* row = s.data() + static_cast<std::size_t>(i * n + j) * n * n;
                    for (int kk = 0; kk < n; ++kk)
                        kt.axpy_conj(row + static_cast<std::size_t>(kk) * n, ub(i, kk),
                                     ub.data() + static_cast<std::size_t>(j) * n,
                                     static_cast<std::size_t>(n));
                }
        }
        ++count_;
    }
    current_k_ = k;
    if (count_ != sys.folner().size(k))
        throw std::logic_error("AverageSweep: folner enumeration mismatch");
}

BlockElement AverageSweep::average(const BlockElement& x) const {
    if (count_ == 0) throw std::logic_error("AverageSweep: advance_to before average");
    BlockElement r;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t b = 0; b < sum_.size(); ++b) {
        const ComplexMatrix& s = sum_[b];
        const ComplexMatrix& xb = x.blocks[b];
        const int n = xb.dim();
        ComplexMatrix y(n);
        for (int r_ = 0; r_ < n * n; ++r_) {
            const cplx* row = s.data() + static_cast<std::size_t>(r_) * n * n;
            cplx acc{};
            for (int c = 0; c < n * n; ++c) acc += row[c] * xb.data()[c];
            y.data()[r_] = acc * inv;
        }
        r.blocks.push_back(std::move(y));
    }
    return r;
}

FixedPointProjector::FixedPointProjector(const std::vector<int>& dims,
                                         const std::vector<BlockElement>& gen_unitaries,
                                         double rel_threshold) {
    for (std::size_t b = 0; b < dims.size(); ++b) {
        const int n = dims[b];
        EMat basis = EMat::Identity(n * n, n * n);
        for (const auto& gu : gen_unitaries) {
            const EMat a = conjugation_superop(gu.blocks[b]);
            const EMat m = (a - EMat::Identity(n * n, n * n)) * basis;
            Eigen::JacobiSVD<EMat> svd(m, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            const double cut = rel_threshold * std::max(1.0, sv.size() ? sv(0) : 0.0);
            int null_dim = 0;
            for (int i = static_cast<int>(sv.size()) - 1; i >= 0; --i) {
                if (sv(i) <= cut) ++null_dim;
                else break;
            }
            for (int i = 0; i < sv.size(); ++i)
                if (sv(i) > cut && sv(i) < 10.0 * cut) ambiguous_ = true;
            // columns of V with tiny singular values span the kernel
            basis = basis * svd.matrixV().rightCols(null_dim);
            if (null_dim == 0) break;
        }
        std::vector<ComplexMatrix> mats;
        for (int c = 0; c < basis.cols(); ++c) {
            ComplexMatrix s(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s(i, j) = basis(i * n + j, c);
            mats.push_back(std::move(s));
        }
        basis_.push_back(std::move(mats));
    }
}

BlockElement FixedPointProjector::apply(const BlockElement& x) const {
    BlockElement r;
    for (std::size_t b = 0; b < x.blocks.size(); ++b) {
        const ComplexMatrix& xb = x.blocks[b];
        ComplexMatrix y(xb.dim());
        for (const ComplexMatrix& s : basis_[b]) {
            cplx coef{};
            for (std::size_t i = 0; i < s.size(); ++i)
                coef += std::conj(s.data()[i]) * xb.data()[i];
            y.add_scaled(s, coef);
        }
        r.blocks.push_back(std::move(y));
    }
    return r;
}

BlockElement mean_ergodic_projection(const WStarSystem& sys, const BlockElement& x) {
    FixedPointProjector proj(sys.dims, sys.gen_unitaries);
    return proj.apply(x);
}

} // namespace ergo
