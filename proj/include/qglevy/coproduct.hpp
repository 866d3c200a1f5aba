// Tensor powers of U_q(g) and the iterated coproduct.
//
//   Delta(e_i) = e_i x k_i^{-1} + k_i x e_i
//   Delta(f_i) = f_i x k_i^{-1} + k_i x f_i
//   Delta(k_i^{+-1}) = k_i^{+-1} x k_i^{+-1}
//
// extended multiplicatively; Delta^{(1)} = id and Delta^{(m)} applies the
// m-leg splitting of each letter.  Legs are kept in weak normal form.

#pragma once

#include "qglevy/algebra.hpp"

#include <map>
#include <vector>

namespace qglevy {

class TensorElement {
  public:
    TensorElement() : degree_(0), ctx_(nullptr) {}
    TensorElement(const CartanData* ctx, int degree) : degree_(degree), ctx_(ctx) {
        if (degree < 1) throw std::invalid_argument("TensorElement: degree must be >= 1");
    }

    static TensorElement one(const CartanData& ctx, int degree) {
        TensorElement t(&ctx, degree);
        t.add_term(std::vector<Monomial>(static_cast<size_t>(degree), Monomial::identity(ctx.rank)),
                   Scalar::one());
        return t;
    }

    int degree() const { return degree_; }
    const CartanData& ctx() const {
        if (!ctx_) throw std::logic_error("TensorElement: missing context");
        return *ctx_;
    }
    const std::map<std::vector<Monomial>, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const std::vector<Monomial>& legs, const Scalar& c) {
        if (c.is_zero()) return;
        if (static_cast<int>(legs.size()) != degree_)
            throw std::invalid_argument("TensorElement: leg count mismatch");
        auto [it, inserted] = terms_.try_emplace(legs, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend TensorElement operator+(const TensorElement& a, const TensorElement& b) {
        TensorElement r = a;
        for (const auto& [legs, c] : b.terms_) r.add_term(legs, c);
        return r;
    }
    friend TensorElement operator-(const TensorElement& a, const TensorElement& b) {
        TensorElement r = a;
        for (const auto& [legs, c] : b.terms_) r.add_term(legs, -c);
        return r;
    }
    friend TensorElement operator*(const Scalar& s, const TensorElement& a) {
        TensorElement r(a.ctx_, a.degree_);
        for (const auto& [legs, c] : a.terms_) r.add_term(legs, s * c);
        return r;
    }
    friend bool operator==(const TensorElement& a, const TensorElement& b) {
        return a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

    // Leg-wise product; each leg is straightened back to normal form.
    friend TensorElement operator*(const TensorElement& a, const TensorElement& b) {
        if (a.degree_ != b.degree_)
            throw std::invalid_argument("TensorElement: degree mismatch in product");
        const CartanData& ctx = a.ctx();
        TensorElement r(a.ctx_, a.degree_);
        for (const auto& [la, ca] : a.terms_) {
            for (const auto& [lb, cb] : b.terms_) {
                std::vector<AlgebraElement> leg_products;
                leg_products.reserve(static_cast<size_t>(a.degree_));
                bool zero = false;
                for (int l = 0; l < a.degree_ && !zero; ++l) {
                    AlgebraElement p(&ctx);
                    detail::mul_monomial(ctx, la[static_cast<size_t>(l)], Scalar::one(),
                                         lb[static_cast<size_t>(l)], p);
                    zero = p.is_zero();
                    leg_products.push_back(std::move(p));
                }
                if (zero) continue;
                std::vector<Monomial> legs(static_cast<size_t>(a.degree_));
                expand_legs(r, leg_products, legs, 0, ca * cb);
            }
        }
        return r;
    }

  private:
    static void expand_legs(TensorElement& out, const std::vector<AlgebraElement>& parts,
                            std::vector<Monomial>& legs, size_t at, const Scalar& coeff) {
        if (at == parts.size()) {
            out.add_term(legs, coeff);
            return;
        }
        for (const auto& [m, c] : parts[at].terms()) {
            legs[at] = m;
            expand_legs(out, parts, legs, at + 1, coeff * c);
        }
    }

    int degree_;
    std::map<std::vector<Monomial>, Scalar> terms_;
    const CartanData* ctx_;
};

namespace detail {

// m-leg coproduct of a single letter.
inline TensorElement letter_coproduct(const CartanData& ctx, const Letter& letter, int m) {
    TensorElement t(&ctx, m);
    if (letter.kind == Letter::Kind::K) {
        Monomial km = Monomial::identity(ctx.rank);
        km.k_exp = letter.k_exp;
        t.add_term(std::vector<Monomial>(static_cast<size_t>(m), km), Scalar::one());
        return t;
    }
    int j = letter.index;
    Monomial up = Monomial::identity(ctx.rank);
    up.k_exp[static_cast<size_t>(j)] = 1;
    Monomial down = Monomial::identity(ctx.rank);
    down.k_exp[static_cast<size_t>(j)] = -1;
    Monomial gen = Monomial::identity(ctx.rank);
    (letter.kind == Letter::Kind::E ? gen.e_word : gen.f_word).push_back(j);
    for (int pos = 0; pos < m; ++pos) {
        std::vector<Monomial> legs;
        legs.reserve(static_cast<size_t>(m));
        for (int l = 0; l < m; ++l) legs.push_back(l < pos ? up : (l == pos ? gen : down));
        t.add_term(legs, Scalar::one());
    }
    return t;
}

inline std::vector<Letter> monomial_letters(const Monomial& m) {
    std::vector<Letter> letters;
    for (int j : m.f_word) letters.push_back({Letter::Kind::F, j, {}});
    bool k_trivial = true;
    for (int x : m.k_exp) k_trivial = k_trivial && x == 0;
    if (!k_trivial) letters.push_back({Letter::Kind::K, 0, m.k_exp});
    for (int j : m.e_word) letters.push_back({Letter::Kind::E, j, {}});
    return letters;
}

}  // namespace detail

// Delta^{(m)} as a unital algebra homomorphism into the m-fold tensor power.
inline TensorElement coproduct_n(const AlgebraElement& a, int m) {
    if (m < 1) throw std::invalid_argument("coproduct_n: need m >= 1");
    const CartanData& ctx = a.ctx();
    TensorElement r(&ctx, m);
    for (const auto& [mono, c] : a.terms()) {
        TensorElement acc = c * TensorElement::one(ctx, m);
        for (const auto& letter : detail::monomial_letters(mono))
            acc = acc * detail::letter_coproduct(ctx, letter, m);
        r = r + acc;
    }
    return r;
}

inline TensorElement coproduct(const AlgebraElement& a) { return coproduct_n(a, 2); }

inline AlgebraElement element_of_monomial(const CartanData& ctx, const Monomial& m) {
    AlgebraElement r(&ctx);
    r.add_term(m, Scalar::one());
    return r;
}

// Apply Delta to one leg of a tensor element (degree grows by one).
inline TensorElement coproduct_leg(const TensorElement& t, int leg) {
    const CartanData& ctx = t.ctx();
    if (leg < 0 || leg >= t.degree()) throw std::out_of_range("coproduct_leg: bad leg");
    TensorElement r(&ctx, t.degree() + 1);
    for (const auto& [legs, c] : t.terms()) {
        TensorElement split = coproduct_n(element_of_monomial(ctx, legs[static_cast<size_t>(leg)]), 2);
        for (const auto& [pair_legs, pc] : split.terms()) {
            std::vector<Monomial> out;
            out.reserve(legs.size() + 1);
            for (int l = 0; l < t.degree(); ++l) {
                if (l == leg) {
                    out.push_back(pair_legs[0]);
                    out.push_back(pair_legs[1]);
                } else {
                    out.push_back(legs[static_cast<size_t>(l)]);
                }
            }
            r.add_term(out, c * pc);
        }
    }
    return r;
}

// Apply the counit to one leg (degree shrinks by one; degree must be >= 2).
inline TensorElement counit_leg(const TensorElement& t, int leg) {
    const CartanData& ctx = t.ctx();
    if (t.degree() < 2) throw std::invalid_argument("counit_leg: degree must be >= 2");
    if (leg < 0 || leg >= t.degree()) throw std::out_of_range("counit_leg: bad leg");
    TensorElement r(&ctx, t.degree() - 1);
    for (const auto& [legs, c] : t.terms()) {
        if (!legs[static_cast<size_t>(leg)].is_cartan()) continue;
        std::vector<Monomial> out;
        out.reserve(legs.size() - 1);
        for (int l = 0; l < t.degree(); ++l)
            if (l != leg) out.push_back(legs[static_cast<size_t>(l)]);
        r.add_term(out, c);
    }
    return r;
}

inline AlgebraElement first_leg_as_element(const TensorElement& t) {
    if (t.degree() != 1) throw std::invalid_argument("expected a degree-1 tensor element");
    AlgebraElement r(&t.ctx());
    for (const auto& [legs, c] : t.terms()) r.add_term(legs[0], c);
    return r;
}

// m((S x id) Delta(a)); equals eps(a) 1 by the antipode axiom.
inline AlgebraElement antipode_convolution(const AlgebraElement& a) {
    const CartanData& ctx = a.ctx();
    TensorElement d = coproduct(a);
    AlgebraElement acc = AlgebraElement::zero(ctx);
    for (const auto& [legs, c] : d.terms()) {
        AlgebraElement left = antipode(element_of_monomial(ctx, legs[0]));
        AlgebraElement right = element_of_monomial(ctx, legs[1]);
        acc = acc + c * (left * right);
    }
    return acc;
}

}  // namespace qglevy
