// Symbolic verification suites for the Hopf structure: the defining
// relations as rewriting identities, the Hopf axioms on a finite spanning
// set, involution compatibility, and the exactness of the formal/numeric
// correspondence.  Everything here is exact scalar arithmetic; a check fails
// only if two canonical forms differ.

#pragma once

#include "qglevy/coproduct.hpp"
#include "qglevy/parser.hpp"
#include "qglevy/report.hpp"

#include <string>
#include <vector>

namespace qglevy {

// All monomials with up to `max_letters` e/f letters and Cartan exponents in
// {-1, 0, 1}^rank.
inline std::vector<AlgebraElement> spanning_monomials(const CartanData& ctx, int max_letters) {
    std::vector<std::vector<int>> words{{}};
    std::vector<std::vector<int>> layer{{}};
    for (int l = 0; l < max_letters; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& w : layer)
            for (int i = 0; i < ctx.rank; ++i) {
                auto nw = w;
                nw.push_back(i);
                next.push_back(nw);
            }
        words.insert(words.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    std::vector<std::vector<int>> kvecs{{}};
    for (int i = 0; i < ctx.rank; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& kv : kvecs)
            for (int x : {-1, 0, 1}) {
                auto nk = kv;
                nk.push_back(x);
                next.push_back(nk);
            }
        kvecs = std::move(next);
    }
    std::vector<AlgebraElement> out;
    for (const auto& fw : words) {
        for (const auto& ew : words) {
            if (static_cast<int>(fw.size() + ew.size()) > max_letters) continue;
            for (const auto& kv : kvecs) {
                Monomial m;
                m.f_word = fw;
                m.e_word = ew;
                m.k_exp = kv;
                AlgebraElement el(&ctx);
                el.add_term(m, Scalar::one());
                out.push_back(el);
            }
        }
    }
    return out;
}

// The non-Serre defining relations as exact identities of the rewriting
// engine.  (The Serre elements are not rewritten away by design; they are
// checked against representations instead.)
inline Report relation_identities_report(const CartanData& ctx) {
    Report rep;
    auto record = [&rep](const std::string& name, bool ok) {
        rep.add("relations", name, ok ? 0.0 : 1.0, 0.0, ok);
    };
    AlgebraElement one = AlgebraElement::one(ctx);
    for (int i = 0; i < ctx.rank; ++i) {
        AlgebraElement k = AlgebraElement::gen_k(ctx, i, 1);
        AlgebraElement kinv = AlgebraElement::gen_k(ctx, i, -1);
        std::string si = std::to_string(i + 1);
        record("k_K_identity(" + si + ")", k * kinv == one && kinv * k == one);
        for (int j = 0; j < ctx.rank; ++j) {
            std::string ij = "(" + si + "," + std::to_string(j + 1) + ")";
            AlgebraElement kj = AlgebraElement::gen_k(ctx, j, 1);
            AlgebraElement e = AlgebraElement::gen_e(ctx, j);
            AlgebraElement f = AlgebraElement::gen_f(ctx, j);
            record("k_commute" + ij, k * kj == kj * k);
            record("k_e_crossing" + ij, k * e == ctx.qi_half_power(i, ctx.a[i][j]) * (e * k));
            record("k_f_crossing" + ij, k * f == ctx.qi_half_power(i, -ctx.a[i][j]) * (f * k));
            AlgebraElement ei = AlgebraElement::gen_e(ctx, i);
            AlgebraElement comm = ei * f - f * ei;
            if (i == j) {
                AlgebraElement rhs =
                    (Scalar::one() / ctx.qi_minus_inv(i)) *
                    (AlgebraElement::gen_k(ctx, i, 2) - AlgebraElement::gen_k(ctx, i, -2));
                record("e_f_commutator" + ij, comm == rhs);
            } else {
                record("e_f_commutator" + ij, comm.is_zero());
            }
        }
    }
    return rep;
}

// Coassociativity, the counit axiom, the antipode axiom on generators, and
// involution compatibility, all on the degree-bounded spanning set.
inline Report hopf_axioms_report(const CartanData& ctx, int max_letters) {
    Report rep;
    auto probes = spanning_monomials(ctx, max_letters);
    bool coassoc = true, counit_ax = true, star_delta = true, star_eps = true;
    for (const auto& u : probes) {
        TensorElement du = coproduct(u);
        TensorElement left = coproduct_leg(du, 0);
        coassoc &= left == coproduct_leg(du, 1) && left == coproduct_n(u, 3);
        counit_ax &= first_leg_as_element(counit_leg(du, 0)) == u &&
                     first_leg_as_element(counit_leg(du, 1)) == u;
        // (* x *) Delta u = Delta(u*)
        TensorElement starred(&ctx, 2);
        for (const auto& [legs, c] : du.terms()) {
            AlgebraElement l0 = involute(element_of_monomial(ctx, legs[0]));
            AlgebraElement l1 = involute(element_of_monomial(ctx, legs[1]));
            for (const auto& [m0, c0] : l0.terms())
                for (const auto& [m1, c1] : l1.terms())
                    starred.add_term({m0, m1}, c.conj() * c0 * c1);
        }
        star_delta &= starred == coproduct(involute(u));
        star_eps &= counit(involute(u)) == counit(u).conj();
    }
    rep.add("hopf", "coassociativity", coassoc ? 0.0 : 1.0, 0.0, coassoc);
    rep.add("hopf", "counit_axiom", counit_ax ? 0.0 : 1.0, 0.0, counit_ax);
    rep.add("hopf", "star_coproduct_compatibility", star_delta ? 0.0 : 1.0, 0.0, star_delta);
    rep.add("hopf", "star_counit_compatibility", star_eps ? 0.0 : 1.0, 0.0, star_eps);

    bool antipode_ok = true;
    for (int i = 0; i < ctx.rank; ++i) {
        for (const auto& g : {AlgebraElement::gen_e(ctx, i), AlgebraElement::gen_f(ctx, i),
                              AlgebraElement::gen_k(ctx, i, 1), AlgebraElement::gen_k(ctx, i, -1)})
            antipode_ok &= antipode_convolution(g) == counit(g) * AlgebraElement::one(ctx);
    }
    rep.add("hopf", "antipode_axiom_on_generators", antipode_ok ? 0.0 : 1.0, 0.0, antipode_ok);
    return rep;
}

}  // namespace qglevy
