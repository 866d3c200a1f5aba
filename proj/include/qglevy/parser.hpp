// Text form for algebra elements.
//
// Grammar (whitespace insignificant, UTF-8):
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := ('-'|'+')* power
//   power    := atom ('^' exponent)?
//   exponent := '-'? INT | '(' '-'? INT ')'
//   atom     := 'q' | 'v' | 'i' | INT | GEN | '(' expr ')'
//   GEN      := ('e'|'f'|'k'|'K') '_' INT          (K_i stands for k_i^{-1})
//
// Division requires a scalar divisor; rationals p/r arise from INT '/' INT.
// The printer emits terms sorted by monomial and round-trips through parse.

#pragma once

#include "qglevy/algebra.hpp"

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

namespace qglevy {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

class ElementParser {
  public:
    ElementParser(std::string_view text, const CartanData& ctx) : text_(text), ctx_(ctx) {}

    AlgebraElement parse() {
        AlgebraElement r = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return r;
    }

  private:
    AlgebraElement parse_expr() {
        AlgebraElement acc = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                acc = acc + parse_term();
            } else if (peek() == '-') {
                ++pos_;
                acc = acc - parse_term();
            } else {
                return acc;
            }
        }
    }

    AlgebraElement parse_term() {
        AlgebraElement acc = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                acc = acc * parse_factor();
            } else if (peek() == '/') {
                size_t at = pos_;
                ++pos_;
                AlgebraElement rhs = parse_factor();
                auto s = rhs.as_scalar();
                if (!s) throw ParseError("division by a non-scalar expression", at);
                if (s->is_zero()) throw ParseError("division by zero", at);
                acc = (Scalar::one() / *s) * acc;
            } else {
                return acc;
            }
        }
    }

    AlgebraElement parse_factor() {
        skip_ws();
        bool neg = false;
        while (peek() == '-' || peek() == '+') {
            if (peek() == '-') neg = !neg;
            ++pos_;
            skip_ws();
        }
        AlgebraElement r = parse_power();
        return neg ? -r : r;
    }

    AlgebraElement parse_power() {
        AlgebraElement base = parse_atom();
        skip_ws();
        if (peek() != '^') return base;
        size_t at = pos_;
        ++pos_;
        long n = parse_exponent();
        return element_power(base, n, at);
    }

    long parse_exponent() {
        skip_ws();
        bool parens = false;
        if (peek() == '(') {
            parens = true;
            ++pos_;
            skip_ws();
        }
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        if (!std::isdigit(peek())) throw ParseError("expected integer exponent", pos_);
        long n = parse_int();
        if (parens) {
            skip_ws();
            expect(')');
        }
        return neg ? -n : n;
    }

    AlgebraElement element_power(const AlgebraElement& base, long n, size_t at) {
        if (n >= 0) {
            AlgebraElement acc = AlgebraElement::one(ctx_);
            for (long r = 0; r < n; ++r) acc = acc * base;
            return acc;
        }
        if (auto s = base.as_scalar()) {
            if (s->is_zero()) throw ParseError("zero raised to a negative power", at);
            return AlgebraElement::scalar(ctx_, s->pow(n));
        }
        // A single Cartan monomial is invertible: (c k^lambda)^-1 = c^-1 k^-lambda.
        if (base.terms().size() == 1 && base.terms().begin()->first.is_cartan()) {
            const auto& [m, c] = *base.terms().begin();
            Monomial inv = m;
            for (auto& x : inv.k_exp) x = -x;
            AlgebraElement invel(&ctx_);
            invel.add_term(inv, Scalar::one() / c);
            return element_power(invel, -n, at);
        }
        throw ParseError("negative power of a non-invertible expression", at);
    }

    AlgebraElement parse_atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            AlgebraElement r = parse_expr();
            skip_ws();
            expect(')');
            return r;
        }
        if (std::isdigit(c)) {
            long n = parse_int();
            return AlgebraElement::scalar(ctx_, Scalar(Rational(n)));
        }
        if (c == 'q') {
            ++pos_;
            return AlgebraElement::scalar(ctx_, Scalar::v_power(2));
        }
        if (c == 'v') {
            ++pos_;
            return AlgebraElement::scalar(ctx_, Scalar::v_power(1));
        }
        if (c == 'i') {
            ++pos_;
            return AlgebraElement::scalar(ctx_, Scalar::imaginary_unit());
        }
        if (c == 'e' || c == 'f' || c == 'k' || c == 'K') {
            size_t at = pos_;
            ++pos_;
            skip_ws();
            if (peek() != '_') throw ParseError("expected '_' after generator letter", pos_);
            ++pos_;
            skip_ws();
            if (!std::isdigit(peek())) throw ParseError("expected generator index", pos_);
            long idx = parse_int();
            if (idx < 1 || idx > ctx_.rank)
                throw ParseError("generator index out of range", at);
            int i = static_cast<int>(idx - 1);
            switch (c) {
                case 'e': return AlgebraElement::gen_e(ctx_, i);
                case 'f': return AlgebraElement::gen_f(ctx_, i);
                case 'k': return AlgebraElement::gen_k(ctx_, i, 1);
                default: return AlgebraElement::gen_k(ctx_, i, -1);
            }
        }
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    long parse_int() {
        long n = 0;
        size_t at = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            n = n * 10 + (text_[pos_] - '0');
            if (n > 1000000000L) throw ParseError("integer literal too large", at);
            ++pos_;
        }
        return n;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    std::string_view text_;
    const CartanData& ctx_;
    size_t pos_ = 0;
};

inline std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// One polynomial coefficient as a grammar atom; `lead` suppresses parentheses
// that are only needed in product position.
inline std::string gauss_str(const GaussRational& c) {
    if (c.im == 0) return rational_str(c.re);
    std::string im_part;
    if (c.im == 1)
        im_part = "i";
    else if (c.im == -1)
        im_part = "-i";
    else
        im_part = rational_str(c.im) + "*i";
    if (c.re == 0) return im_part;
    std::string s = rational_str(c.re);
    if (!im_part.empty() && im_part[0] != '-') s += "+";
    return "(" + s + im_part + ")";
}

inline bool gauss_needs_parens(const GaussRational& c) { return c.re != 0 && c.im != 0; }

inline std::string poly_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        const GaussRational& c = p[static_cast<size_t>(k)];
        if (c.is_zero()) continue;
        std::string term;
        std::string vpart = k == 0 ? "" : (k == 1 ? "v" : "v^" + std::to_string(k));
        if (k == 0) {
            term = gauss_str(c);
        } else if (c == GaussRational(1)) {
            term = vpart;
        } else if (c == GaussRational(-1)) {
            term = "-" + vpart;
        } else {
            term = gauss_str(c) + "*" + vpart;
        }
        if (out.empty()) {
            out = term;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

// True if the printed polynomial needs parentheses inside a product.
inline bool poly_needs_parens(const Poly& p) {
    if (p.num_terms() > 1) return true;
    if (p.is_zero()) return false;
    // single term: sign and '*' bind fine in product position
    return false;
}

}  // namespace detail

inline std::string to_string(const Scalar& s) {
    using detail::poly_str;
    if (s.den() == Poly::one()) return poly_str(s.num());
    return "(" + poly_str(s.num()) + ")/(" + poly_str(s.den()) + ")";
}

inline std::string to_string(const Monomial& m) {
    std::string out;
    auto append = [&out](const std::string& part) {
        if (!out.empty()) out += "*";
        out += part;
    };
    for (int j : m.f_word) append("f_" + std::to_string(j + 1));
    for (size_t i = 0; i < m.k_exp.size(); ++i) {
        int p = m.k_exp[i];
        if (p == 0) continue;
        std::string base = (p > 0 ? "k_" : "K_") + std::to_string(i + 1);
        int mag = std::abs(p);
        append(mag == 1 ? base : base + "^" + std::to_string(mag));
    }
    for (int j : m.e_word) append("e_" + std::to_string(j + 1));
    return out;
}

inline bool scalar_needs_parens_in_product(const Scalar& c) {
    if (!(c.den() == Poly::one())) return false;  // printed as (num)/(den), binds fine
    return detail::poly_needs_parens(c.num());
}

inline std::string to_string(const AlgebraElement& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : a.terms()) {
        std::string mono = to_string(m);
        std::string term;
        if (mono.empty()) {
            term = to_string(c);
        } else if (c.is_one()) {
            term = mono;
        } else if ((-c).is_one()) {
            term = "-" + mono;
        } else {
            std::string cs = to_string(c);
            bool parens = scalar_needs_parens_in_product(c);
            term = (parens ? "(" + cs + ")" : cs) + "*" + mono;
        }
        if (out.empty()) {
            out = term;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

inline AlgebraElement parse_element(std::string_view text, const CartanData& ctx) {
    return detail::ElementParser(text, ctx).parse();
}

}  // namespace qglevy
