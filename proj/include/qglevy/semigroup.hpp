// Convolution algebra of functionals on U_q(g):
//
//   (f * g)(u) = (f x g)(Delta u),    phi_t = exp_*t psi = sum t^n/n! psi^{*n}.
//
// Convolution powers are evaluated through the recursion
// psi^{*n}(m) = sum psi^{*(n-1)}(m_(1)) psi(m_(2)) with memoization over the
// (finite) set of monomials reachable through iterated coproduct legs.

#pragma once

#include "qglevy/coproduct.hpp"
#include "qglevy/lattice_model.hpp"
#include "qglevy/report.hpp"
#include "qglevy/schurmann.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace qglevy {

struct Functional {
    enum class Kind { counit, generator, state, generic };
    Kind kind = Kind::generic;
    std::function<Complex(const AlgebraElement&)> eval;
    Complex operator()(const AlgebraElement& u) const { return eval(u); }
};

inline Functional counit_functional(const CartanData& ctx) {
    double q = ctx.numeric_q();
    return {Functional::Kind::counit,
            [q](const AlgebraElement& u) { return counit(u).eval_at_q(q); }};
}

inline Functional generator_functional(const SchurmannTriple& t) {
    return {Functional::Kind::generator, [&t](const AlgebraElement& u) { return t.psi(u); }};
}

// (f * g)(u) via the two-leg coproduct.
inline Complex convolve(const Functional& f, const Functional& g, const AlgebraElement& u) {
    const CartanData& ctx = u.ctx();
    double q = ctx.numeric_q();
    Complex acc{0.0, 0.0};
    TensorElement du = coproduct(u);
    for (const auto& [legs, c] : du.terms())
        acc += c.eval_at_q(q) * f(element_of_monomial(ctx, legs[0])) *
               g(element_of_monomial(ctx, legs[1]));
    return acc;
}

// (f_1 * ... * f_n)(u) via the n-leg coproduct.
inline Complex convolve_many(const std::vector<Functional>& fs, const AlgebraElement& u) {
    if (fs.empty()) throw std::invalid_argument("convolve_many: need at least one functional");
    if (fs.size() == 1) return fs[0](u);
    const CartanData& ctx = u.ctx();
    double q = ctx.numeric_q();
    Complex acc{0.0, 0.0};
    TensorElement du = coproduct_n(u, static_cast<int>(fs.size()));
    for (const auto& [legs, c] : du.terms()) {
        Complex prod = c.eval_at_q(q);
        for (size_t l = 0; l < fs.size(); ++l) prod *= fs[l](element_of_monomial(ctx, legs[l]));
        acc += prod;
    }
    return acc;
}

struct ConvExpResult {
    Complex value{0.0, 0.0};
    double bound = 0.0;  // geometric tail estimate of the truncation error
    int terms = 0;
    bool short_circuited = false;
};

class ConvolutionEngine {
  public:
    ConvolutionEngine(const CartanData& ctx, double q, Functional psi, int degree_cap = 6,
                      int n_max = 200)
        : ctx_(&ctx), q_(q), psi_(std::move(psi)), degree_cap_(degree_cap), n_max_(n_max) {}

    static ConvolutionEngine for_triple(const SchurmannTriple& t) {
        return ConvolutionEngine(t.ctx(), t.q(), generator_functional(t));
    }

    const CartanData& ctx() const { return *ctx_; }

    // psi^{*n}(u)
    Complex psi_power(const AlgebraElement& u, int n) {
        if (u.degree() > degree_cap_)
            throw std::invalid_argument("ConvolutionEngine: element degree exceeds cap of " +
                                        std::to_string(degree_cap_));
        Complex acc{0.0, 0.0};
        for (const auto& [m, c] : u.terms()) acc += c.eval_at_q(q_) * power(m, n);
        return acc;
    }

    ConvExpResult conv_exp(double t, const AlgebraElement& u, double tol,
                           bool force_series = false) {
        if (!(tol > 0.0)) throw std::invalid_argument("conv_exp: tolerance must be positive");
        if (t < 0.0) throw std::invalid_argument("conv_exp: time must be nonnegative");
        ConvExpResult res;
        if (!force_series && u.is_cartan_combination()) {
            // Cartan monomials are group-like, so exp_* acts term by term:
            // phi_t(k^lambda) = exp(t psi(k^lambda)).
            for (const auto& [m, c] : u.terms()) {
                AlgebraElement kl = element_of_monomial(*ctx_, m);
                res.value += c.eval_at_q(q_) * std::exp(t * psi_(kl));
            }
            res.short_circuited = true;
            return res;
        }
        Complex term = psi_power(u, 0);  // eps(u)
        res.value = term;
        double prev_mag = std::abs(term);
        int zero_run = prev_mag == 0.0 ? 1 : 0;
        double tn = 1.0;
        for (int n = 1; n <= n_max_; ++n) {
            tn *= t / n;
            Complex pn = psi_power(u, n);
            term = tn * pn;
            res.value += term;
            res.terms = n;
            double mag = std::abs(term);
            if (mag == 0.0) {
                if (++zero_run >= 3) {
                    res.bound = 0.0;
                    return res;
                }
                continue;
            }
            if (prev_mag > 0.0) {
                double ratio = mag / prev_mag;
                if (ratio < 1.0) {
                    res.bound = mag * ratio / (1.0 - ratio);
                    if (res.bound <= tol && n >= 3) return res;
                }
            }
            zero_run = 0;
            prev_mag = mag;
        }
        throw std::runtime_error("conv_exp: series did not converge within " +
                                 std::to_string(n_max_) + " terms");
    }

    // phi_t as a functional (state for t >= 0).
    Functional phi(double t, double tol = 1e-12) {
        return {Functional::Kind::state, [this, t, tol](const AlgebraElement& u) {
                    return conv_exp(t, u, tol).value;
                }};
    }

  private:
    struct Split {
        Monomial left, right;
        Complex coeff;
    };

    const std::vector<Split>& splits(const Monomial& m) {
        auto it = delta_cache_.find(m);
        if (it != delta_cache_.end()) return it->second;
        std::vector<Split> out;
        TensorElement dm = coproduct(element_of_monomial(*ctx_, m));
        for (const auto& [legs, c] : dm.terms()) out.push_back({legs[0], legs[1], c.eval_at_q(q_)});
        return delta_cache_.emplace(m, std::move(out)).first->second;
    }

    Complex power(const Monomial& m, int n) {
        if (n == 0) return m.is_cartan() ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        if (n == 1) return psi_(element_of_monomial(*ctx_, m));
        auto key = std::make_pair(m, n);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Complex acc{0.0, 0.0};
        for (const auto& s : splits(m)) acc += s.coeff * power(s.left, n - 1) * power(s.right, 1);
        memo_.emplace(std::move(key), acc);
        return acc;
    }

    const CartanData* ctx_;
    double q_;
    Functional psi_;
    int degree_cap_;
    int n_max_;
    std::map<Monomial, std::vector<Split>> delta_cache_;
    std::map<std::pair<Monomial, int>, Complex> memo_;
};

inline ConvExpResult conv_exp(double t, const SchurmannTriple& triple, const AlgebraElement& u,
                              double tol, bool force_series = false) {
    ConvolutionEngine engine = ConvolutionEngine::for_triple(triple);
    return engine.conv_exp(t, u, tol, force_series);
}

// Closed form of phi_t on the Cartan subalgebra:
//   phi_t(k^mu) = exp(t sum_lambda c_lambda (q^{<mu,lambda>/2} - 1)).
inline double phi_cartan_exact(const LevyLatticeModel& model, const std::vector<int>& mu,
                               double t) {
    if (t < 0.0) throw std::invalid_argument("phi_cartan_exact: time must be nonnegative");
    return std::exp(t * model.psi_cartan(mu));
}

// Semigroup law, unitality, positivity on probes, hermitianity, and numeric
// infinite divisibility for n in {2, 3, 4}.
inline Report verify_semigroup(const SchurmannTriple& triple, double s, double t,
                               const std::vector<AlgebraElement>& probes, double tol = 1e-10) {
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("verify_semigroup: negative time");
    const CartanData& ctx = triple.ctx();
    Report rep;
    ConvolutionEngine engine = ConvolutionEngine::for_triple(triple);
    Functional phi_s = engine.phi(s, tol), phi_t = engine.phi(t, tol);

    rep.add_residual("semigroup", "phi_t(1)",
                     std::abs(engine.conv_exp(t, AlgebraElement::one(ctx), tol).value - 1.0),
                     1e-12);

    double worst = 0.0;
    for (const auto& u : probes) {
        ConvExpResult sum = engine.conv_exp(s + t, u, tol, true);
        Complex split = convolve(phi_s, phi_t, u);
        double denom = std::max(1.0, std::abs(sum.value));
        worst = std::max(worst, std::abs(sum.value - split) / denom);
    }
    rep.add_residual("semigroup", "phi_s*phi_t=phi_{s+t}", worst, 1e-8);

    // state positivity on {1} + kernel generators
    std::vector<AlgebraElement> basis{AlgebraElement::one(ctx)};
    for (const auto& g : kernel_probe_generators(ctx)) basis.push_back(g);
    Matrix gram(basis.size(), basis.size());
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = 0; b < basis.size(); ++b)
            gram(static_cast<int>(a), static_cast<int>(b)) =
                engine.conv_exp(t, involute(basis[a]) * basis[b], tol).value;
    Eigen::SelfAdjointEigenSolver<Matrix> es((gram + gram.adjoint()) / 2.0);
    double scale = std::max(1.0, gram.norm());
    rep.add_lower_bound("semigroup", "state_gram_min_eigenvalue",
                        es.eigenvalues().minCoeff() / scale, -1e-8);

    worst = 0.0;
    for (const auto& u : probes) {
        Complex a = engine.conv_exp(t, involute(u), tol).value;
        Complex b = std::conj(engine.conv_exp(t, u, tol).value);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    rep.add_residual("semigroup", "hermitian", worst, 1e-10);

    worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
        std::vector<Functional> parts(static_cast<size_t>(n), engine.phi(t / n, tol));
        for (const auto& u : probes) {
            Complex whole = engine.conv_exp(t, u, tol).value;
            Complex divided = convolve_many(parts, u);
            worst = std::max(worst, std::abs(whole - divided) / std::max(1.0, std::abs(whole)));
        }
    }
    rep.add_residual("semigroup", "n_divisibility", worst, 1e-8);

    return rep;
}

}  // namespace qglevy
