#include <catch2/catch_amalgamated.hpp>

#include "qglevy/algebra.hpp"
#include "qglevy/parser.hpp"
#include "test_util.hpp"

#include <random>

using namespace qglevy;

namespace {
const CartanData& a1() {
    static CartanData ctx = CartanData::named("A1", 4.0);
    return ctx;
}
}  // namespace

TEST_CASE("defining relations are rewritten to normal form") {
    const CartanData& ctx = a1();
    AlgebraElement e = AlgebraElement::gen_e(ctx, 0);
    AlgebraElement f = AlgebraElement::gen_f(ctx, 0);
    AlgebraElement k = AlgebraElement::gen_k(ctx, 0, 1);
    AlgebraElement kinv = AlgebraElement::gen_k(ctx, 0, -1);

    // multiply(e, k) = q^{-1} k e   (rank 1: q_1 = q, a_11 = 2)
    AlgebraElement lhs = e * k;
    AlgebraElement rhs = Scalar::v_power(-2) * (k * e);
    REQUIRE(lhs == rhs);

    // multiply(e, f) = f e + (k^2 - k^-2)/(q - q^-1)
    AlgebraElement commutator = parse_element("f_1*e_1 + (k_1^2 - K_1^2)/(q - q^-1)", ctx);
    REQUIRE(e * f == commutator);

    // k k^-1 = 1
    REQUIRE(k * kinv == AlgebraElement::one(ctx));

    // unit laws
    AlgebraElement one = AlgebraElement::one(ctx);
    AlgebraElement x = parse_element("e_1*f_1*k_1 + 2*e_1", ctx);
    REQUIRE(one * x == x);
    REQUIRE(x * one == x);
    REQUIRE((AlgebraElement::zero(ctx) * x).is_zero());
}

TEST_CASE("k-crossing relations hold for all named algebras") {
    for (const auto& name : {"A1", "A2", "B2", "G2"}) {
        CartanData ctx = CartanData::named(name);
        for (int i = 0; i < ctx.rank; ++i) {
            for (int j = 0; j < ctx.rank; ++j) {
                AlgebraElement e = AlgebraElement::gen_e(ctx, j);
                AlgebraElement f = AlgebraElement::gen_f(ctx, j);
                AlgebraElement k = AlgebraElement::gen_k(ctx, i, 1);
                // k_i e_j = q_i^{a_ij/2} e_j k_i
                REQUIRE(k * e == ctx.qi_half_power(i, ctx.a[i][j]) * (e * k));
                // k_i f_j = q_i^{-a_ij/2} f_j k_i
                REQUIRE(k * f == ctx.qi_half_power(i, -ctx.a[i][j]) * (f * k));
                // e_i f_j - f_j e_i = delta_ij (k_i^2 - k_i^-2)/(q_i - q_i^-1)
                AlgebraElement ei = AlgebraElement::gen_e(ctx, i);
                AlgebraElement diff = ei * f - f * ei;
                if (i == j) {
                    AlgebraElement expect =
                        (Scalar::one() / ctx.qi_minus_inv(i)) *
                        (AlgebraElement::gen_k(ctx, i, 2) - AlgebraElement::gen_k(ctx, i, -2));
                    REQUIRE(diff == expect);
                } else {
                    REQUIRE(diff.is_zero());
                }
            }
        }
    }
}

TEST_CASE("rewriting is associative on random monomials") {
    for (const auto& name : {"A1", "A2", "B2", "G2"}) {
        CartanData ctx = CartanData::named(name);
        std::mt19937 rng(42);
        for (int trial = 0; trial < 200; ++trial) {
            AlgebraElement a(&ctx), b(&ctx), c(&ctx);
            a.add_term(testutil::random_monomial(rng, ctx, 3), Scalar::one());
            b.add_term(testutil::random_monomial(rng, ctx, 3), Scalar::one());
            c.add_term(testutil::random_monomial(rng, ctx, 3), Scalar::one());
            REQUIRE((a * b) * c == a * (b * c));
        }
    }
}

TEST_CASE("involution is a conjugate-linear anti-homomorphism") {
    const CartanData& ctx = a1();
    REQUIRE(involute(AlgebraElement::gen_e(ctx, 0)) == AlgebraElement::gen_f(ctx, 0));
    REQUIRE(involute(AlgebraElement::gen_f(ctx, 0)) == AlgebraElement::gen_e(ctx, 0));

    AlgebraElement ik = parse_element("i*k_1", ctx);
    REQUIRE(involute(ik) == -ik);

    AlgebraElement w = parse_element("e_1*f_1*k_1", ctx);
    REQUIRE(involute(involute(w)) == w);

    std::mt19937 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        AlgebraElement a = testutil::random_element(rng, ctx, 2);
        AlgebraElement b = testutil::random_element(rng, ctx, 2);
        REQUIRE(involute(involute(a)) == a);
        REQUIRE(involute(a * b) == involute(b) * involute(a));
    }
}

TEST_CASE("counit") {
    const CartanData& ctx = a1();
    for (int l = -3; l <= 3; ++l) {
        AlgebraElement kl = AlgebraElement::cartan_monomial(ctx, {l});
        REQUIRE(counit(kl) == Scalar::one());
    }
    AlgebraElement ef = parse_element("e_1*f_1", ctx);
    REQUIRE(counit(ef).is_zero());

    // term-wise oracle for eps(f e + (k^2 - k^-2)/(q - q^-1)): evaluate each
    // cartan coefficient at q = 4 and sum
    AlgebraElement u = parse_element("f_1*e_1 + (k_1^2 - K_1^2)/(q - q^-1)", ctx);
    Complex oracle{0.0, 0.0};
    for (const auto& [m, c] : u.terms())
        if (m.is_cartan()) oracle += c.eval_at_q(4.0);
    REQUIRE(std::abs(oracle) < 1e-15);
    REQUIRE(counit(u).is_zero());

    std::mt19937 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        AlgebraElement a = testutil::random_element(rng, ctx, 2);
        AlgebraElement b = testutil::random_element(rng, ctx, 2);
        REQUIRE(counit(a * b) == counit(a) * counit(b));
    }
}

TEST_CASE("antipode on generators") {
    const CartanData& ctx = a1();
    REQUIRE(antipode(AlgebraElement::gen_k(ctx, 0, 1)) == AlgebraElement::gen_k(ctx, 0, -1));
    REQUIRE(antipode(AlgebraElement::one(ctx)) == AlgebraElement::one(ctx));
    REQUIRE(antipode(AlgebraElement::gen_e(ctx, 0)) ==
            -(Scalar::v_power(-2) * AlgebraElement::gen_e(ctx, 0)));
    REQUIRE(antipode(AlgebraElement::gen_f(ctx, 0)) ==
            -(Scalar::v_power(2) * AlgebraElement::gen_f(ctx, 0)));

    // S is an anti-homomorphism
    std::mt19937 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        AlgebraElement a = testutil::random_element(rng, ctx, 2);
        AlgebraElement b = testutil::random_element(rng, ctx, 2);
        REQUIRE(antipode(a * b) == antipode(b) * antipode(a));
    }
}

TEST_CASE("serre elements") {
    CartanData a2 = CartanData::named("A2");
    AlgebraElement s = serre_element(a2, 0, 1, true);
    AlgebraElement expect = parse_element("e_1^2*e_2 - (q + q^-1)*e_1*e_2*e_1 + e_2*e_1^2", a2);
    REQUIRE(s == expect);

    AlgebraElement sf = serre_element(a2, 0, 1, false);
    REQUIRE(sf == parse_element("f_1^2*f_2 - (q + q^-1)*f_1*f_2*f_1 + f_2*f_1^2", a2));

    // orthogonal pair: a_ij = 0 gives the plain commutator
    CartanData a1a1({{2, 0}, {0, 2}}, {1, 1});
    AlgebraElement comm = serre_element(a1a1, 0, 1, true);
    REQUIRE(comm == parse_element("e_1*e_2 - e_2*e_1", a1a1));

    REQUIRE_THROWS_AS(serre_element(a2, 0, 0, true), std::invalid_argument);
}

TEST_CASE("rank-1 casimir is *-invariant and central") {
    const CartanData& ctx = a1();
    AlgebraElement c = casimir_su2(ctx);
    REQUIRE(involute(c) == c);

    Scalar eps_c = counit(c);
    Scalar expect = (Scalar::v_power(2) + Scalar::v_power(-2)) /
                    ((Scalar::v_power(2) - Scalar::v_power(-2)).pow(2));
    REQUIRE(eps_c == expect);

    for (const auto* gen : {"e_1", "f_1", "k_1", "K_1"}) {
        AlgebraElement g = parse_element(gen, ctx);
        REQUIRE(c * g == g * c);
    }

    CartanData a2 = CartanData::named("A2");
    REQUIRE_THROWS_AS(casimir_su2(a2), std::invalid_argument);
}

TEST_CASE("numeric evaluation commutes with symbolic operations") {
    const CartanData& ctx = a1();
    std::mt19937 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        AlgebraElement a = testutil::random_element(rng, ctx, 2);
        AlgebraElement b = testutil::random_element(rng, ctx, 2);
        REQUIRE(testutil::close(counit(a * b).eval_at_q(4.0),
                                counit(a).eval_at_q(4.0) * counit(b).eval_at_q(4.0), 1e-9));
        REQUIRE(testutil::close(counit(involute(a)).eval_at_q(4.0),
                                std::conj(counit(a).eval_at_q(4.0)), 1e-10));
    }
}
