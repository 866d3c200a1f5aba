// Exact scalar arithmetic for the deformation parameter.
//
// A Scalar is a reduced rational function in the formal variable v, where
// v^2 = q, with Gaussian-rational coefficients.  Working in v instead of q
// keeps the half-integer powers q^{d_i a_ij / 2} polynomial, and the field
// structure makes equality of coefficients decidable, so symbolic identities
// can be checked exactly.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace qglevy {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// ---------------------------------------------------------------------------
// Gaussian rationals a + b*i.

struct GaussRational {
    Rational re{0};
    Rational im{0};

    GaussRational() = default;
    GaussRational(Rational r) : re(std::move(r)) {}
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRational(long n) : re(n) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussRational conj() const { return {re, -im}; }

    Complex eval() const { return {to_double(re), to_double(im)}; }

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("GaussRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// ---------------------------------------------------------------------------
// Dense polynomials in v over the Gaussian rationals.  coeff[k] multiplies v^k;
// the zero polynomial is the empty vector, and there are no trailing zeros.

class Poly {
  public:
    Poly() = default;
    explicit Poly(GaussRational c) {
        if (!c.is_zero()) coeff_.push_back(std::move(c));
    }
    static Poly monomial(const GaussRational& c, int deg) {
        Poly p;
        if (c.is_zero()) return p;
        p.coeff_.assign(static_cast<size_t>(deg) + 1, GaussRational{});
        p.coeff_.back() = c;
        return p;
    }
    static Poly one() { return Poly(GaussRational(1)); }

    bool is_zero() const { return coeff_.empty(); }
    int degree() const { return static_cast<int>(coeff_.size()) - 1; }  // -1 for zero
    const GaussRational& operator[](size_t k) const { return coeff_[k]; }
    const GaussRational& leading() const { return coeff_.back(); }
    size_t size() const { return coeff_.size(); }
    int num_terms() const {
        int n = 0;
        for (const auto& c : coeff_)
            if (!c.is_zero()) ++n;
        return n;
    }
    // Lowest k with coeff[k] != 0 (valuation at v = 0); -1 for the zero poly.
    int valuation() const {
        for (size_t k = 0; k < coeff_.size(); ++k)
            if (!coeff_[k].is_zero()) return static_cast<int>(k);
        return -1;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.coeff_.resize(std::max(a.coeff_.size(), b.coeff_.size()));
        for (size_t k = 0; k < r.coeff_.size(); ++k) {
            if (k < a.coeff_.size()) r.coeff_[k] = r.coeff_[k] + a.coeff_[k];
            if (k < b.coeff_.size()) r.coeff_[k] = r.coeff_[k] + b.coeff_[k];
        }
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, GaussRational{});
        for (size_t i = 0; i < a.coeff_.size(); ++i) {
            if (a.coeff_[i].is_zero()) continue;
            for (size_t j = 0; j < b.coeff_.size(); ++j) {
                if (b.coeff_[j].is_zero()) continue;
                r.coeff_[i + j] = r.coeff_[i + j] + a.coeff_[i] * b.coeff_[j];
            }
        }
        r.trim();
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.coeff_ == b.coeff_; }

    Poly scaled(const GaussRational& c) const {
        Poly r;
        if (c.is_zero()) return r;
        r.coeff_ = coeff_;
        for (auto& x : r.coeff_) x = x * c;
        return r;
    }
    // Divide by v^k, assuming valuation >= k.
    Poly shifted_down(int k) const {
        Poly r;
        if (is_zero()) return r;
        r.coeff_.assign(coeff_.begin() + k, coeff_.end());
        return r;
    }

    // Euclidean division; requires b != 0.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::domain_error("Poly: division by zero");
        Poly rem = a, quot;
        if (a.degree() >= b.degree())
            quot.coeff_.assign(static_cast<size_t>(a.degree() - b.degree()) + 1, GaussRational{});
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            int shift = rem.degree() - b.degree();
            GaussRational c = rem.leading() / b.leading();
            quot.coeff_[static_cast<size_t>(shift)] = c;
            rem = rem - Poly::monomial(c, shift) * b;
        }
        quot.trim();
        return {quot, rem};
    }

    // Monic gcd; gcd(0, b) = monic(b).
    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.is_zero()) a = a.scaled(GaussRational(1) / a.leading());
        return a;
    }

    Poly conj() const {
        Poly r = *this;
        for (auto& c : r.coeff_) c = c.conj();
        return r;
    }

    Complex eval(double v) const {
        Complex acc{0.0, 0.0};
        for (size_t k = coeff_.size(); k-- > 0;) acc = acc * v + coeff_[k].eval();
        return acc;
    }

  private:
    void trim() {
        while (!coeff_.empty() && coeff_.back().is_zero()) coeff_.pop_back();
    }
    std::vector<GaussRational> coeff_;
};

// ---------------------------------------------------------------------------
// Scalar: a canonical rational function num/den in v.
//
// Canonical form: gcd(num, den) = 1, common powers of v moved into whichever
// side keeps both polynomial, and den monic.  Equality is coefficient-wise.

class Scalar {
  public:
    Scalar() : num_(), den_(Poly::one()) {}
    Scalar(long n) : num_(GaussRational(n)), den_(Poly::one()) {}
    Scalar(Rational r) : num_(GaussRational(std::move(r))), den_(Poly::one()) {}
    Scalar(GaussRational c) : num_(std::move(c)), den_(Poly::one()) {}
    Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar imaginary_unit() { return Scalar(GaussRational(Rational(0), Rational(1))); }
    // v^n for n of either sign.
    static Scalar v_power(long n) {
        if (n >= 0) return Scalar(Poly::monomial(GaussRational(1), static_cast<int>(n)), Poly::one());
        return Scalar(Poly::one(), Poly::monomial(GaussRational(1), static_cast<int>(-n)));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == Poly::one() && den_ == Poly::one(); }
    bool is_constant() const { return num_.degree() <= 0 && den_ == Poly::one(); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return Scalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a) {
        Scalar r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
        return Scalar(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    Scalar pow(long n) const {
        if (n < 0) return Scalar::one() / pow(-n);
        Scalar acc = Scalar::one(), base = *this;
        for (long e = n; e > 0; e >>= 1) {
            if (e & 1) acc = acc * base;
            base = base * base;
        }
        return acc;
    }

    // Complex conjugation: v is a positive real, so only coefficients flip.
    Scalar conj() const {
        Scalar r;
        r.num_ = num_.conj();
        r.den_ = den_.conj();
        r.reduce();
        return r;
    }

    Complex eval_at_v(double v) const {
        Complex d = den_.eval(v);
        if (d == Complex{0.0, 0.0}) throw std::domain_error("Scalar: pole at requested v");
        return num_.eval(v) / d;
    }
    Complex eval_at_q(double q) const {
        if (!(q > 0.0)) throw std::domain_error("Scalar: numeric q must be positive");
        return eval_at_v(std::sqrt(q));
    }

  private:
    void reduce() {
        if (den_.is_zero()) throw std::domain_error("Scalar: zero denominator");
        if (num_.is_zero()) {
            den_ = Poly::one();
            return;
        }
        // Strip the common power of v first; it is the frequent case for
        // Laurent-monomial coefficients and avoids a general gcd.
        int va = num_.valuation(), vb = den_.valuation();
        int s = std::min(va, vb);
        if (s > 0) {
            num_ = num_.shifted_down(s);
            den_ = den_.shifted_down(s);
        }
        if (den_.degree() > 0 && num_.num_terms() > 1 && den_.num_terms() > 1) {
            Poly g = Poly::gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = Poly::divmod(num_, g).first;
                den_ = Poly::divmod(den_, g).first;
            }
        } else if (den_.degree() > 0 && den_.num_terms() > 1 && num_.num_terms() == 1) {
            // num is c*v^k: any nontrivial common factor must be v^j, already gone.
        } else if (den_.num_terms() == 1 && num_.num_terms() > 1) {
            // den is c*v^k: common v power already stripped.
        }
        GaussRational lead = den_.leading();
        if (!(lead == GaussRational(1))) {
            GaussRational inv = GaussRational(1) / lead;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    Poly num_;
    Poly den_;
};

}  // namespace qglevy
