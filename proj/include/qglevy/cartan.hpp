// Cartan data for U_q(g): Cartan matrix, symmetrizers, and the deformation
// parameter.  q_i = q^{d_i} = v^{2 d_i}.

#pragma once

#include "qglevy/rational.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qglevy {

struct CartanData {
    int rank = 0;
    std::vector<std::vector<int>> a;  // Cartan matrix a_ij
    std::vector<int> d;               // symmetrizers d_i
    std::optional<double> q;          // numeric value, q > 0 and q != 1

    CartanData() = default;
    CartanData(std::vector<std::vector<int>> cartan, std::vector<int> sym,
               std::optional<double> q_num = std::nullopt)
        : rank(static_cast<int>(sym.size())), a(std::move(cartan)), d(std::move(sym)), q(q_num) {
        validate();
    }

    void validate() const {
        if (rank < 1) throw std::invalid_argument("CartanData: rank must be positive");
        if (static_cast<int>(a.size()) != rank)
            throw std::invalid_argument("CartanData: Cartan matrix size mismatch");
        for (const auto& row : a)
            if (static_cast<int>(row.size()) != rank)
                throw std::invalid_argument("CartanData: Cartan matrix must be square");
        for (int i = 0; i < rank; ++i) {
            if (a[i][i] != 2) throw std::invalid_argument("CartanData: a_ii must equal 2");
            for (int j = 0; j < rank; ++j) {
                if (i != j && a[i][j] > 0)
                    throw std::invalid_argument("CartanData: off-diagonal entries must be <= 0");
                if ((a[i][j] == 0) != (a[j][i] == 0))
                    throw std::invalid_argument("CartanData: a_ij = 0 must imply a_ji = 0");
            }
        }
        int g = 0;
        for (int i = 0; i < rank; ++i) {
            if (d[i] <= 0) throw std::invalid_argument("CartanData: symmetrizers must be positive");
            g = std::gcd(g, d[i]);
        }
        if (g != 1) throw std::invalid_argument("CartanData: gcd of symmetrizers must be 1");
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (static_cast<long>(d[i]) * a[i][j] != static_cast<long>(d[j]) * a[j][i])
                    throw std::invalid_argument("CartanData: d_i a_ij must equal d_j a_ji");
        if (q) {
            if (!(*q > 0.0)) throw std::invalid_argument("CartanData: q must satisfy q>0, q!=1");
            if (*q == 1.0) throw std::invalid_argument("CartanData: q must satisfy q>0, q!=1");
        }
    }

    double numeric_q() const {
        if (!q) throw std::logic_error("CartanData: numeric q not set");
        return *q;
    }

    void check_index(int i) const {
        if (i < 0 || i >= rank) throw std::out_of_range("generator index out of range");
    }

    // q_i^{x/2} = v^{d_i x} as an exact scalar.
    Scalar qi_half_power(int i, long x) const { return Scalar::v_power(d[i] * x); }
    // q_i - q_i^{-1}.
    Scalar qi_minus_inv(int i) const {
        return Scalar::v_power(2 * d[i]) - Scalar::v_power(-2 * d[i]);
    }

    static CartanData named(const std::string& name, std::optional<double> q = std::nullopt) {
        if (name == "A1") return CartanData({{2}}, {1}, q);
        if (name == "A2") return CartanData({{2, -1}, {-1, 2}}, {1, 1}, q);
        if (name == "B2") return CartanData({{2, -1}, {-2, 2}}, {2, 1}, q);
        if (name == "G2") return CartanData({{2, -1}, {-3, 2}}, {3, 1}, q);
        throw std::invalid_argument("unknown algebra name: " + name);
    }
};

// [n]_{q_i} as a Laurent polynomial in v; d = d_i, or 1 for plain q.
inline Scalar q_number_d(long n, int d) {
    if (n == 0) return Scalar::zero();
    if (n < 0) return -q_number_d(-n, d);
    Scalar acc = Scalar::zero();
    for (long l = 0; l < n; ++l) acc = acc + Scalar::v_power(2 * d * (n - 1 - 2 * l));
    return acc;
}

inline Scalar q_number(const CartanData& ctx, long n, int i) {
    ctx.check_index(i);
    return q_number_d(n, ctx.d[i]);
}
inline Scalar q_number(long n) { return q_number_d(n, 1); }

inline Scalar q_factorial_d(long n, int d) {
    if (n < 0) throw std::invalid_argument("q_factorial: n must be nonnegative");
    Scalar acc = Scalar::one();
    for (long m = 1; m <= n; ++m) acc = acc * q_number_d(m, d);
    return acc;
}
inline Scalar q_factorial(const CartanData& ctx, long n, int i) {
    ctx.check_index(i);
    return q_factorial_d(n, ctx.d[i]);
}
inline Scalar q_factorial(long n) { return q_factorial_d(n, 1); }

inline Scalar q_binomial_d(long n, long k, int d) {
    if (n < 0) throw std::invalid_argument("q_binomial: n must be nonnegative");
    if (k < 0 || k > n) throw std::invalid_argument("q_binomial: k must lie in [0, n]");
    return q_factorial_d(n, d) / (q_factorial_d(k, d) * q_factorial_d(n - k, d));
}
inline Scalar q_binomial(const CartanData& ctx, long n, long k, int i) {
    ctx.check_index(i);
    return q_binomial_d(n, k, ctx.d[i]);
}
inline Scalar q_binomial(long n, long k) { return q_binomial_d(n, k, 1); }

}  // namespace qglevy
