#include <catch2/catch_amalgamated.hpp>

#include "qglevy/coproduct.hpp"
#include "qglevy/parser.hpp"
#include "test_util.hpp"

#include <random>
#include <vector>

using namespace qglevy;

namespace {

const CartanData& a1() {
    static CartanData ctx = CartanData::named("A1", 4.0);
    return ctx;
}

// (* x ... x *) applied leg-wise, for the compatibility check.
TensorElement star_legs(const TensorElement& t) {
    TensorElement r(&t.ctx(), t.degree());
    for (const auto& [legs, c] : t.terms()) {
        std::vector<Monomial> out;
        out.reserve(legs.size());
        for (const auto& m : legs) {
            AlgebraElement s = involute(element_of_monomial(t.ctx(), m));
            REQUIRE(s.terms().size() == 1);
            out.push_back(s.terms().begin()->first);
        }
        r.add_term(out, c.conj());
    }
    return r;
}

// All monomials with at most `max_letters` e/f letters and k exponents in
// {-1,0,1}^rank; a finite probe of the degree-<=3 subspace.
std::vector<AlgebraElement> spanning_set(const CartanData& ctx, int max_letters) {
    std::vector<std::vector<int>> words{{}};
    std::vector<std::vector<int>> grown = words;
    for (int l = 0; l < max_letters; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& w : grown)
            for (int i = 0; i < ctx.rank; ++i) {
                auto nw = w;
                nw.push_back(i);
                next.push_back(nw);
            }
        words.insert(words.end(), next.begin(), next.end());
        grown = std::move(next);
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

}  // namespace

TEST_CASE("coproduct of generators") {
    const CartanData& ctx = a1();
    AlgebraElement e = AlgebraElement::gen_e(ctx, 0);
    AlgebraElement f = AlgebraElement::gen_f(ctx, 0);

    Monomial me = Monomial::identity(1);
    me.e_word.push_back(0);
    Monomial mf = Monomial::identity(1);
    mf.f_word.push_back(0);
    Monomial up = Monomial::identity(1);
    up.k_exp[0] = 1;
    Monomial down = Monomial::identity(1);
    down.k_exp[0] = -1;

    TensorElement de(&ctx, 2);
    de.add_term({me, down}, Scalar::one());
    de.add_term({up, me}, Scalar::one());
    REQUIRE(coproduct(e) == de);

    // Delta(f) = f x k^-1 + k x f  (the compact-form reading)
    TensorElement df(&ctx, 2);
    df.add_term({mf, down}, Scalar::one());
    df.add_term({up, mf}, Scalar::one());
    REQUIRE(coproduct(f) == df);

    // group-like Cartan monomials, any number of legs
    for (int m = 1; m <= 4; ++m) {
        AlgebraElement kl = AlgebraElement::cartan_monomial(ctx, {-2});
        Monomial mk = Monomial::identity(1);
        mk.k_exp[0] = -2;
        TensorElement expect(&ctx, m);
        expect.add_term(std::vector<Monomial>(static_cast<size_t>(m), mk), Scalar::one());
        REQUIRE(coproduct_n(kl, m) == expect);
    }
}

TEST_CASE("three-leg coproduct of e matches the hand expansion") {
    const CartanData& ctx = a1();
    AlgebraElement e = AlgebraElement::gen_e(ctx, 0);

    Monomial me = Monomial::identity(1);
    me.e_word.push_back(0);
    Monomial up = Monomial::identity(1);
    up.k_exp[0] = 1;
    Monomial down = Monomial::identity(1);
    down.k_exp[0] = -1;

    TensorElement expect(&ctx, 3);
    expect.add_term({me, down, down}, Scalar::one());
    expect.add_term({up, me, down}, Scalar::one());
    expect.add_term({up, up, me}, Scalar::one());
    REQUIRE(coproduct_n(e, 3) == expect);

    // and equals the iterated definition (Delta x id) Delta
    REQUIRE(coproduct_leg(coproduct(e), 0) == expect);
}

TEST_CASE("hopf axioms on a spanning set") {
    for (const auto& name : {"A1", "A2"}) {
        CartanData ctx = CartanData::named(name);
        auto probes = spanning_set(ctx, name == std::string("A1") ? 3 : 2);
        for (const auto& u : probes) {
            TensorElement du = coproduct(u);
            REQUIRE(coproduct_leg(du, 0) == coproduct_leg(du, 1));   // coassociativity
            REQUIRE(coproduct_leg(du, 0) == coproduct_n(u, 3));
            REQUIRE(first_leg_as_element(counit_leg(du, 0)) == u);   // counit axiom
            REQUIRE(first_leg_as_element(counit_leg(du, 1)) == u);
        }
    }
}

TEST_CASE("antipode axiom m(S x id)Delta = eps(.)1") {
    for (const auto& name : {"A1", "A2", "B2", "G2"}) {
        CartanData ctx = CartanData::named(name);
        for (int i = 0; i < ctx.rank; ++i) {
            for (const auto& g :
                 {AlgebraElement::gen_e(ctx, i), AlgebraElement::gen_f(ctx, i),
                  AlgebraElement::gen_k(ctx, i, 1), AlgebraElement::gen_k(ctx, i, -1)}) {
                AlgebraElement lhs = antipode_convolution(g);
                AlgebraElement rhs = counit(g) * AlgebraElement::one(ctx);
                REQUIRE(lhs == rhs);
            }
        }
    }
    // also on a few products
    CartanData ctx = CartanData::named("A1");
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        AlgebraElement u(&ctx);
        u.add_term(testutil::random_monomial(rng, ctx, 2), Scalar::one());
        REQUIRE(antipode_convolution(u) == counit(u) * AlgebraElement::one(ctx));
    }
}

TEST_CASE("coproduct and counit are compatible with the involution") {
    CartanData ctx = CartanData::named("A2");
    std::mt19937 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        AlgebraElement u = testutil::random_element(rng, ctx, 2);
        REQUIRE(coproduct(involute(u)) == star_legs(coproduct(u)));
        REQUIRE(counit(involute(u)) == counit(u).conj());
    }
}

TEST_CASE("coproduct is an algebra homomorphism") {
    CartanData ctx = CartanData::named("A1");
    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        AlgebraElement a = testutil::random_element(rng, ctx, 2, 2);
        AlgebraElement b = testutil::random_element(rng, ctx, 2, 2);
        REQUIRE(coproduct(a * b) == coproduct(a) * coproduct(b));
    }
}
