// Schuermann triples (rho, eta, psi) built from a unitary representation and a
// vector Omega:
//
//   psi(u) = <Omega, (rho(u) - eps(u)) Omega>,   eta(u) = (rho(u) - eps(u)) Omega.
//
// Every generator of a Levy process on the compact form arises this way, so
// the verification suite here is the executable counterpart of the
// classification: cocycle equation, hermitianity, conditional positivity on
// kernel probes, determination of psi by (rho, eta), the ideal identities
// behind ker(eps)^2 = ker(eps), and the Casimir-based cocycle reconstruction.

#pragma once

#include "qglevy/coproduct.hpp"
#include "qglevy/report.hpp"
#include "qglevy/representation.hpp"

#include <complex>
#include <random>
#include <string>
#include <vector>

namespace qglevy {

struct WeightComponent {
    std::vector<int> lambda;
    Vector component;  // v_lambda, the projection of Omega
    double rate;       // c_lambda = |v_lambda|^2
};

class SchurmannTriple {
  public:
    SchurmannTriple(Rep rho, Vector omega) : rho_(std::move(rho)), omega_(std::move(omega)) {
        if (omega_.size() != rho_.dim())
            throw std::invalid_argument("SchurmannTriple: omega dimension mismatch");
        const double total = omega_.squaredNorm();
        for (const auto& ws : rho_.weights()) {
            Vector v = ws.basis * (ws.basis.adjoint() * omega_);
            double c = v.squaredNorm();
            if (c > 1e-14 * std::max(1.0, total)) components_.push_back({ws.lambda, v, c});
        }
        if (rho_.has_trivial_summand())
            warnings_.push_back("trivial one-dimensional summand present");
        if (cyclic_subspace_dim() < rho_.dim()) warnings_.push_back("omega is not cyclic");
    }

    const Rep& rho() const { return rho_; }
    const Vector& omega() const { return omega_; }
    const CartanData& ctx() const { return rho_.ctx(); }
    double q() const { return rho_.q(); }
    double total_rate() const { return omega_.squaredNorm(); }
    const std::vector<WeightComponent>& components() const { return components_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    Complex psi(const AlgebraElement& u) const {
        Complex eps = counit(u).eval_at_q(q());
        return omega_.dot(rho_.evaluate(u) * omega_) - eps * omega_.squaredNorm();
    }
    Vector eta(const AlgebraElement& u) const {
        Complex eps = counit(u).eval_at_q(q());
        return rho_.evaluate(u) * omega_ - eps * omega_;
    }
    Vector eta_star(const AlgebraElement& u) const { return eta(involute(u)); }

    // Dimension of span{ rho(U) Omega }.
    int cyclic_subspace_dim() const {
        std::vector<Vector> basis;
        auto push = [&basis](Vector v) {
            for (const auto& b : basis) v -= b.dot(v) * b;
            double n = v.norm();
            if (n > 1e-10) {
                basis.push_back(v / n);
                return true;
            }
            return false;
        };
        if (omega_.norm() == 0.0) return 0;
        push(omega_);
        bool grew = true;
        while (grew && static_cast<int>(basis.size()) < rho_.dim()) {
            grew = false;
            size_t upto = basis.size();
            for (size_t b = 0; b < upto; ++b) {
                for (int i = 0; i < ctx().rank; ++i) {
                    grew |= push(rho_.gen_e(i) * basis[b]);
                    grew |= push(rho_.gen_f(i) * basis[b]);
                    grew |= push(rho_.gen_k(i) * basis[b]);
                    grew |= push(rho_.gen_k_inv(i) * basis[b]);
                }
            }
        }
        return static_cast<int>(basis.size());
    }

  private:
    Rep rho_;
    Vector omega_;
    std::vector<WeightComponent> components_;
    std::vector<std::string> warnings_;
};

inline SchurmannTriple build_triple(Rep rho, Vector omega) {
    return SchurmannTriple(std::move(rho), std::move(omega));
}

// {e_i, f_i, k_i - 1, k_i^-1 - 1}: generators of ker(eps).
inline std::vector<AlgebraElement> kernel_probe_generators(const CartanData& ctx) {
    std::vector<AlgebraElement> out;
    AlgebraElement one = AlgebraElement::one(ctx);
    for (int i = 0; i < ctx.rank; ++i) {
        out.push_back(AlgebraElement::gen_e(ctx, i));
        out.push_back(AlgebraElement::gen_f(ctx, i));
        out.push_back(AlgebraElement::gen_k(ctx, i, 1) - one);
        out.push_back(AlgebraElement::gen_k(ctx, i, -1) - one);
    }
    return out;
}

// All products of up to `degree` kernel generators (ker eps is an ideal, so
// each product stays in ker eps).
inline std::vector<AlgebraElement> kernel_probes(const CartanData& ctx, int degree) {
    auto gens = kernel_probe_generators(ctx);
    std::vector<AlgebraElement> out = gens;
    std::vector<AlgebraElement> layer = gens;
    for (int d = 2; d <= degree; ++d) {
        std::vector<AlgebraElement> next;
        next.reserve(layer.size() * gens.size());
        for (const auto& a : layer)
            for (const auto& g : gens) next.push_back(a * g);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

inline Report verify_triple(const SchurmannTriple& t, int degree = 3, int trials = 50,
                            unsigned seed = 1234) {
    if (degree < 2) throw std::invalid_argument("verify_triple: degree must be >= 2");
    const CartanData& ctx = t.ctx();
    Report rep;
    const double scale = std::max(1.0, t.total_rate());

    rep.add_residual("triple", "psi(1)", std::abs(t.psi(AlgebraElement::one(ctx))), 1e-12 * scale);
    rep.add_residual("triple", "eta(1)", t.eta(AlgebraElement::one(ctx)).norm(), 1e-12 * scale);

    auto gens = kernel_probe_generators(ctx);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    auto random_kernel_element = [&](int max_factors) {
        std::uniform_int_distribution<int> nf(1, max_factors);
        AlgebraElement u = gens[pick(rng)];
        int n = nf(rng);
        for (int f = 1; f < n; ++f) u = u * gens[pick(rng)];
        return u;
    };

    // (a) cocycle equation eta(ab) = rho(a) eta(b) + eta(a) eps(b)
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        AlgebraElement a = random_kernel_element(2);
        AlgebraElement b = random_kernel_element(2);
        Complex eps_b = counit(b).eval_at_q(t.q());
        Vector lhs = t.eta(a * b);
        Vector rhs = t.rho().evaluate(a) * t.eta(b) + eps_b * t.eta(a);
        double denom = std::max(1.0, rhs.norm());
        worst = std::max(worst, (lhs - rhs).norm() / denom);
    }
    rep.add_residual("triple", "cocycle", worst, 1e-10);

    // (b) hermitianity psi(u*) = conj(psi(u))
    worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        AlgebraElement u = random_kernel_element(degree);
        Complex a = t.psi(involute(u)), b = std::conj(t.psi(u));
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    rep.add_residual("triple", "hermitian", worst, 1e-10);

    // (c) conditional positivity: for a, b in ker eps,
    //     psi(a* b) = <rho(a) Omega, rho(b) Omega>, so the Gram matrix over
    //     normalized probe vectors is PSD up to rounding.
    auto probes = kernel_probes(ctx, degree);
    Matrix x(t.rho().dim(), static_cast<int>(probes.size()));
    for (size_t p = 0; p < probes.size(); ++p) {
        Vector v = t.rho().evaluate(probes[p]) * t.omega();
        double n = v.norm();
        x.col(static_cast<int>(p)) = n > 1e-14 ? Vector(v / n) : Vector(Vector::Zero(v.size()));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.adjoint() * x);
    rep.add_lower_bound("triple", "gram_min_eigenvalue", es.eigenvalues().minCoeff(), -1e-10);

    // (d) psi determined by (rho, eta): psi(uv) = <eta(u*), eta(v)> on ker eps
    worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        AlgebraElement u = random_kernel_element(2);
        AlgebraElement v = random_kernel_element(2);
        Complex lhs = t.psi(u * v);
        Complex rhs = t.eta_star(u).dot(t.eta(v));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    rep.add_residual("triple", "determined_by_rho_eta", worst, 1e-10);

    // psi(u*u) = |rho(u) Omega|^2 for u in ker eps
    worst = 0.0;
    for (const auto& g : gens) {
        Complex lhs = t.psi(involute(g) * g);
        double rhs = (t.rho().evaluate(g) * t.omega()).squaredNorm();
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, rhs));
    }
    rep.add_residual("triple", "psi_star_square", worst, 1e-12);

    return rep;
}

// Executable identities behind Lemma "K_2 = K_1": products of kernel
// generators reproduce e_j, f_j and k_i - 1, k_i^{-1} - 1 exactly.
inline Report ideal_identities(const CartanData& ctx) {
    Report rep;
    AlgebraElement one = AlgebraElement::one(ctx);
    auto record = [&rep](const std::string& name, const AlgebraElement& lhs,
                         const AlgebraElement& rhs) {
        rep.add("ideal_identities", name, lhs == rhs ? 0.0 : 1.0, 0.0, lhs == rhs);
    };
    for (int i = 0; i < ctx.rank; ++i) {
        AlgebraElement k = AlgebraElement::gen_k(ctx, i, 1);
        AlgebraElement kinv = AlgebraElement::gen_k(ctx, i, -1);
        AlgebraElement km1 = k - one, kim1 = kinv - one;
        for (int j = 0; j < ctx.rank; ++j) {
            if (ctx.a[i][j] == 0) continue;
            std::string ij = "(i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1) + ")";
            AlgebraElement e = AlgebraElement::gen_e(ctx, j);
            AlgebraElement f = AlgebraElement::gen_f(ctx, j);
            Scalar ce = ctx.qi_half_power(i, ctx.a[i][j]) - Scalar::one();
            Scalar cf = ctx.qi_half_power(i, -ctx.a[i][j]) - Scalar::one();
            record("e_in_K2" + ij, ce * e, km1 * e * kim1 + km1 * e + e * kim1);
            record("f_in_K2" + ij, cf * f, km1 * f * kim1 + km1 * f + f * kim1);
        }
        std::string si = "(i=" + std::to_string(i + 1) + ")";
        AlgebraElement e = AlgebraElement::gen_e(ctx, i);
        AlgebraElement f = AlgebraElement::gen_f(ctx, i);
        AlgebraElement lhs =
            ctx.qi_minus_inv(i) * (e * f - f * e) - km1 * km1 + kim1 * kim1;
        record("commutator_identity" + si, lhs, Scalar(Rational(2)) * (k - kinv));
        Scalar half = Scalar(Rational(1, 2));
        record("k_minus_one" + si, km1, half * (k * (k - kinv) - km1 * km1));
        record("kinv_minus_one" + si, kim1, -(half * (kinv * (k - kinv) + kim1 * kim1)));
    }
    return rep;
}

struct CoboundaryResult {
    Vector omega_prime;
    Report report;
};

// Solve (rho(C) - eps(C)) Omega' = eta(C) for the separating rank-1 Casimir
// and verify that Omega' reproduces the cocycle on generators and random
// kernel elements.
inline CoboundaryResult coboundary_reconstruct(const SchurmannTriple& t, unsigned seed = 99) {
    const CartanData& ctx = t.ctx();
    if (ctx.rank != 1)
        throw std::invalid_argument("coboundary_reconstruct: rank-1 only (needs the su(2) Casimir)");
    AlgebraElement c = casimir_su2(ctx);
    double eps_c = counit(c).eval_at_q(t.q()).real();
    Matrix a = t.rho().evaluate(c) - eps_c * Matrix::Identity(t.rho().dim(), t.rho().dim());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (!(smin > 1e-10 * std::max(1.0, smax)))
        throw std::runtime_error(
            "coboundary_reconstruct: singular system; a trivial summand leaked into rho");
    Vector omega_prime = svd.solve(t.eta(c));

    CoboundaryResult result{omega_prime, {}};
    auto residual = [&](const AlgebraElement& u) {
        Complex eps_u = counit(u).eval_at_q(t.q());
        Vector lhs = t.eta(u);
        Vector rhs = t.rho().evaluate(u) * omega_prime - eps_u * omega_prime;
        return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
    };
    double worst = 0.0;
    for (const auto& g : kernel_probe_generators(ctx)) worst = std::max(worst, residual(g));
    result.report.add_residual("coboundary", "generator_residual", worst, 1e-9);

    std::mt19937 rng(seed);
    auto gens = kernel_probe_generators(ctx);
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    worst = 0.0;
    for (int trial = 0; trial < 20; ++trial)
        worst = std::max(worst, residual(gens[pick(rng)] * gens[pick(rng)]));
    result.report.add_residual("coboundary", "degree2_residual", worst, 1e-9);

    // Omega' agrees with Omega away from trivial summands.
    Vector visible = t.omega();
    int at = 0;
    for (const auto& [irr, mult] : t.rho().summands()) {
        for (int cpy = 0; cpy < mult; ++cpy) {
            if (irr.is_trivial()) visible.segment(at, irr.dim).setZero();
            at += irr.dim;
        }
    }
    result.report.add_residual("coboundary", "omega_recovery", (omega_prime - visible).norm(),
                               1e-9 * std::max(1.0, visible.norm()));
    return result;
}

}  // namespace qglevy
