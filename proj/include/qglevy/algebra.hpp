// Elements of U_q(g) in weak normal form.
//
// A monomial is F * k^kappa * E where F and E are words in the f_i / e_i and
// kappa is a merged exponent vector for the Cartan part.  Products are
// straightened with
//
//   k_i e_j = q_i^{ a_ij/2} e_j k_i,     k_i f_j = q_i^{-a_ij/2} f_j k_i,
//   e_i f_j - f_j e_i = delta_ij (k_i^2 - k_i^{-2}) / (q_i - q_i^{-1}),
//
// while pure e-words and pure f-words keep their written letter order.  The
// Serre relations are deliberately not rewritten; serre_element() exposes them
// as probes for representation-level checks.

#pragma once

#include "qglevy/cartan.hpp"
#include "qglevy/rational.hpp"

#include <compare>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qglevy {

struct Monomial {
    std::vector<int> f_word;
    std::vector<int> k_exp;  // one entry per Cartan generator
    std::vector<int> e_word;

    static Monomial identity(int rank) {
        Monomial m;
        m.k_exp.assign(static_cast<size_t>(rank), 0);
        return m;
    }

    int degree() const { return static_cast<int>(f_word.size() + e_word.size()); }
    bool is_identity() const {
        if (!f_word.empty() || !e_word.empty()) return false;
        for (int x : k_exp)
            if (x != 0) return false;
        return true;
    }
    bool is_cartan() const { return f_word.empty() && e_word.empty(); }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.f_word == b.f_word && a.k_exp == b.k_exp && a.e_word == b.e_word;
    }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        if (a.f_word != b.f_word) return a.f_word < b.f_word;
        if (a.e_word != b.e_word) return a.e_word < b.e_word;
        return a.k_exp < b.k_exp;
    }
};

inline bool ctx_equal(const CartanData& x, const CartanData& y) {
    return x.rank == y.rank && x.a == y.a && x.d == y.d;
}

class AlgebraElement {
  public:
    AlgebraElement() : ctx_(nullptr) {}
    explicit AlgebraElement(const CartanData* ctx) : ctx_(ctx) {}

    static AlgebraElement zero(const CartanData& ctx) { return AlgebraElement(&ctx); }
    static AlgebraElement one(const CartanData& ctx) {
        AlgebraElement r(&ctx);
        r.add_term(Monomial::identity(ctx.rank), Scalar::one());
        return r;
    }
    static AlgebraElement scalar(const CartanData& ctx, const Scalar& s) {
        AlgebraElement r(&ctx);
        r.add_term(Monomial::identity(ctx.rank), s);
        return r;
    }
    static AlgebraElement gen_e(const CartanData& ctx, int i) {
        ctx.check_index(i);
        AlgebraElement r(&ctx);
        Monomial m = Monomial::identity(ctx.rank);
        m.e_word.push_back(i);
        r.add_term(m, Scalar::one());
        return r;
    }
    static AlgebraElement gen_f(const CartanData& ctx, int i) {
        ctx.check_index(i);
        AlgebraElement r(&ctx);
        Monomial m = Monomial::identity(ctx.rank);
        m.f_word.push_back(i);
        r.add_term(m, Scalar::one());
        return r;
    }
    static AlgebraElement gen_k(const CartanData& ctx, int i, int power = 1) {
        ctx.check_index(i);
        AlgebraElement r(&ctx);
        Monomial m = Monomial::identity(ctx.rank);
        m.k_exp[static_cast<size_t>(i)] = power;
        r.add_term(m, Scalar::one());
        return r;
    }
    static AlgebraElement cartan_monomial(const CartanData& ctx, const std::vector<int>& lambda) {
        if (static_cast<int>(lambda.size()) != ctx.rank)
            throw std::invalid_argument("cartan_monomial: exponent vector has wrong length");
        AlgebraElement r(&ctx);
        Monomial m = Monomial::identity(ctx.rank);
        m.k_exp = lambda;
        r.add_term(m, Scalar::one());
        return r;
    }

    const CartanData& ctx() const {
        if (!ctx_) throw std::logic_error("AlgebraElement: missing context");
        return *ctx_;
    }
    const CartanData* ctx_ptr() const { return ctx_; }
    const std::map<Monomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    bool is_cartan_combination() const {
        for (const auto& [m, c] : terms_)
            if (!m.is_cartan()) return false;
        return true;
    }
    // The coefficient of the identity monomial if the element is a scalar
    // multiple of 1, otherwise nullopt.
    std::optional<Scalar> as_scalar() const {
        if (terms_.empty()) return Scalar::zero();
        if (terms_.size() == 1 && terms_.begin()->first.is_identity()) return terms_.begin()->second;
        return std::nullopt;
    }
    Scalar coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar::zero() : it->second;
    }

    void add_term(const Monomial& m, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
        AlgebraElement r = a.check_same_ctx(b);
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
        AlgebraElement r = a.check_same_ctx(b);
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend AlgebraElement operator-(const AlgebraElement& a) {
        AlgebraElement r(a.ctx_);
        for (const auto& [m, c] : a.terms_) r.add_term(m, -c);
        return r;
    }
    friend AlgebraElement operator*(const Scalar& s, const AlgebraElement& a) {
        AlgebraElement r(a.ctx_);
        for (const auto& [m, c] : a.terms_) r.add_term(m, s * c);
        return r;
    }
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        return a.terms_ == b.terms_;
    }

    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

  private:
    AlgebraElement check_same_ctx(const AlgebraElement& b) const {
        if (ctx_ && b.ctx_ && ctx_ != b.ctx_ && !ctx_equal(*ctx_, *b.ctx_))
            throw std::invalid_argument("AlgebraElement: mixed Cartan contexts");
        AlgebraElement r = *this;
        if (!r.ctx_) r.ctx_ = b.ctx_;
        return r;
    }
    std::map<Monomial, Scalar> terms_;
    const CartanData* ctx_;
};

namespace detail {

// v-exponent picked up when k^mu and a single letter swap places:
//   e_j k^mu = v^{-s} k^mu e_j   and   k^mu f_j = v^{-s} f_j k^mu,
// with s = sum_i d_i mu_i a_ij.  Both rewrites used below move against the
// relation's preferred side, so the factor is the same.
inline long k_crossing_exponent(const CartanData& ctx, const std::vector<int>& mu, int j) {
    long s = 0;
    for (int i = 0; i < ctx.rank; ++i) s += static_cast<long>(ctx.d[i]) * mu[i] * ctx.a[i][j];
    return -s;
}

// m * k^mu: k^mu commutes through the e-word and merges into the Cartan part.
inline std::pair<Monomial, long> mul_k(const CartanData& ctx, Monomial m,
                                       const std::vector<int>& mu) {
    long shift = 0;
    for (int j : m.e_word) shift += k_crossing_exponent(ctx, mu, j);
    for (int i = 0; i < ctx.rank; ++i) m.k_exp[static_cast<size_t>(i)] += mu[i];
    return {std::move(m), shift};
}

// m * f_j, crossing the e-word and the Cartan part.
inline void mul_f(const CartanData& ctx, const Monomial& m, const Scalar& coeff, int j,
                  AlgebraElement& out) {
    if (m.e_word.empty()) {
        long shift = k_crossing_exponent(ctx, m.k_exp, j);
        Monomial r = m;
        r.f_word.push_back(j);
        out.add_term(r, coeff * Scalar::v_power(shift));
        return;
    }
    Monomial head = m;
    int l = head.e_word.back();
    head.e_word.pop_back();
    if (l == j) {
        // e_l f_l -> f_l e_l + (k_l^2 - k_l^{-2}) / (q_l - q_l^{-1})
        Scalar denom = ctx.qi_minus_inv(l);
        std::vector<int> mu(static_cast<size_t>(ctx.rank), 0);
        mu[static_cast<size_t>(l)] = 2;
        auto [mp, sp] = mul_k(ctx, head, mu);
        out.add_term(mp, coeff * Scalar::v_power(sp) / denom);
        mu[static_cast<size_t>(l)] = -2;
        auto [mm, sm] = mul_k(ctx, head, mu);
        out.add_term(mm, -(coeff * Scalar::v_power(sm) / denom));
    }
    AlgebraElement partial(&ctx);
    mul_f(ctx, head, coeff, j, partial);
    for (const auto& [pm, pc] : partial.terms()) {
        Monomial r = pm;
        r.e_word.push_back(l);
        out.add_term(r, pc);
    }
}

inline void mul_monomial(const CartanData& ctx, const Monomial& lhs, const Scalar& coeff,
                         const Monomial& rhs, AlgebraElement& out) {
    AlgebraElement acc(&ctx);
    acc.add_term(lhs, coeff);
    for (int j : rhs.f_word) {
        AlgebraElement next(&ctx);
        for (const auto& [m, c] : acc.terms()) mul_f(ctx, m, c, j, next);
        acc = std::move(next);
    }
    bool k_trivial = true;
    for (int x : rhs.k_exp) k_trivial = k_trivial && x == 0;
    if (!k_trivial) {
        AlgebraElement next(&ctx);
        for (const auto& [m, c] : acc.terms()) {
            auto [km, shift] = mul_k(ctx, m, rhs.k_exp);
            next.add_term(km, c * Scalar::v_power(shift));
        }
        acc = std::move(next);
    }
    if (!rhs.e_word.empty()) {
        AlgebraElement next(&ctx);
        for (const auto& [m, c] : acc.terms()) {
            Monomial r = m;
            r.e_word.insert(r.e_word.end(), rhs.e_word.begin(), rhs.e_word.end());
            next.add_term(r, c);
        }
        acc = std::move(next);
    }
    for (const auto& [m, c] : acc.terms()) out.add_term(m, c);
}

}  // namespace detail

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r = a.check_same_ctx(b);
    r = AlgebraElement(r.ctx_ptr());
    if (!r.ctx_ptr()) return r;
    const CartanData& ctx = r.ctx();
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) detail::mul_monomial(ctx, ma, ca * cb, mb, r);
    return r;
}

inline AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }

// Conjugate-linear anti-homomorphism with e_i* = f_i, f_i* = e_i, k_i* = k_i.
// On a normal-form monomial the image is again normal form: the e-word maps to
// the reversed f-word and vice versa.
inline AlgebraElement involute(const AlgebraElement& a) {
    AlgebraElement r(a.ctx_ptr());
    for (const auto& [m, c] : a.terms()) {
        Monomial s;
        s.k_exp = m.k_exp;
        s.f_word.assign(m.e_word.rbegin(), m.e_word.rend());
        s.e_word.assign(m.f_word.rbegin(), m.f_word.rend());
        r.add_term(s, c.conj());
    }
    return r;
}

// Counit: 1 on Cartan monomials, 0 on anything with e/f letters.
inline Scalar counit(const AlgebraElement& a) {
    Scalar acc = Scalar::zero();
    for (const auto& [m, c] : a.terms())
        if (m.is_cartan()) acc = acc + c;
    return acc;
}

namespace detail {

// Fold a list of letters (each one of e_j / f_j / k^mu) into a product,
// starting from `prefix`.
struct Letter {
    enum class Kind { E, F, K } kind;
    int index = 0;
    std::vector<int> k_exp;
};

inline AlgebraElement product_of_letters(const CartanData& ctx, const AlgebraElement& prefix,
                                         const std::vector<Letter>& letters) {
    AlgebraElement acc = prefix;
    for (const auto& letter : letters) {
        AlgebraElement next(&ctx);
        for (const auto& [m, c] : acc.terms()) {
            switch (letter.kind) {
                case Letter::Kind::E: {
                    Monomial r = m;
                    r.e_word.push_back(letter.index);
                    next.add_term(r, c);
                    break;
                }
                case Letter::Kind::F:
                    mul_f(ctx, m, c, letter.index, next);
                    break;
                case Letter::Kind::K: {
                    auto [km, shift] = mul_k(ctx, m, letter.k_exp);
                    next.add_term(km, c * Scalar::v_power(shift));
                    break;
                }
            }
        }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace detail

// Antipode: anti-homomorphism with S(e_i) = -q_i^{-1} e_i, S(f_i) = -q_i f_i,
// S(k_i) = k_i^{-1}.
inline AlgebraElement antipode(const AlgebraElement& a) {
    const CartanData& ctx = a.ctx();
    AlgebraElement r(&ctx);
    for (const auto& [m, c] : a.terms()) {
        long vshift = 0;
        int sign = (m.degree() % 2 == 0) ? 1 : -1;
        std::vector<detail::Letter> letters;
        for (auto it = m.e_word.rbegin(); it != m.e_word.rend(); ++it) {
            vshift -= 2 * ctx.d[*it];
            letters.push_back({detail::Letter::Kind::E, *it, {}});
        }
        detail::Letter kl{detail::Letter::Kind::K, 0, m.k_exp};
        for (auto& x : kl.k_exp) x = -x;
        letters.push_back(kl);
        for (auto it = m.f_word.rbegin(); it != m.f_word.rend(); ++it) {
            vshift += 2 * ctx.d[*it];
            letters.push_back({detail::Letter::Kind::F, *it, {}});
        }
        Scalar pre = (sign > 0 ? c : -c) * Scalar::v_power(vshift);
        AlgebraElement seed = AlgebraElement::scalar(ctx, pre);
        AlgebraElement term = detail::product_of_letters(ctx, seed, letters);
        for (const auto& [tm, tc] : term.terms()) r.add_term(tm, tc);
    }
    return r;
}

// Left-hand side of the quantum Serre relation for the pair (i, j), kept as an
// unreduced element.  Vanishes in every verified representation.
inline AlgebraElement serre_element(const CartanData& ctx, int i, int j, bool e_side) {
    ctx.check_index(i);
    ctx.check_index(j);
    if (i == j) throw std::invalid_argument("serre_element: indices must differ");
    long n_max = 1 - ctx.a[i][j];
    AlgebraElement r(&ctx);
    for (long n = 0; n <= n_max; ++n) {
        Scalar coeff = q_binomial(ctx, n_max, n, i);
        if (n % 2 == 1) coeff = -coeff;
        Monomial m = Monomial::identity(ctx.rank);
        std::vector<int>& word = e_side ? m.e_word : m.f_word;
        word.insert(word.end(), static_cast<size_t>(n_max - n), i);
        word.push_back(j);
        word.insert(word.end(), static_cast<size_t>(n), i);
        r.add_term(m, coeff);
    }
    return r;
}

// Second order Casimir of U_q(su(2)):
//   C = f e + (q k^2 + q^{-1} k^{-2}) / (q - q^{-1})^2,
// *-invariant and central, with eps(C) = (q + q^{-1}) / (q - q^{-1})^2.
inline AlgebraElement casimir_su2(const CartanData& ctx) {
    if (ctx.rank != 1)
        throw std::invalid_argument("casimir_su2: only the rank-1 Casimir is implemented");
    Scalar denom = ctx.qi_minus_inv(0);
    Scalar denom2 = denom * denom;
    AlgebraElement r(&ctx);
    Monomial fe = Monomial::identity(1);
    fe.f_word.push_back(0);
    fe.e_word.push_back(0);
    r.add_term(fe, Scalar::one());
    Monomial kp = Monomial::identity(1);
    kp.k_exp[0] = 2;
    r.add_term(kp, Scalar::v_power(2) / denom2);
    Monomial km = Monomial::identity(1);
    km.k_exp[0] = -2;
    r.add_term(km, Scalar::v_power(-2) / denom2);
    return r;
}

}  // namespace qglevy
