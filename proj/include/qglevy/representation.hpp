// Finite-dimensional unitary representations: the standard weight-basis
// construction for U_q(su(2)), file-loaded matrix representations for any
// rank, matrix evaluation of algebra elements, and weight decompositions.

#pragma once

#include "qglevy/algebra.hpp"
#include "qglevy/parser.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qglevy {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Irrep {
    std::string label;
    int rank = 1;
    int dim = 0;
    double q = 0.0;
    std::optional<int> two_j;  // rank-1 spin label, in half-integer steps
    std::vector<Matrix> e, f, k, k_inv;  // one matrix per Cartan index

    bool is_trivial(double tol = 1e-10) const {
        if (dim != 1) return false;
        for (int i = 0; i < rank; ++i) {
            if (e[i].norm() > tol || f[i].norm() > tol) return false;
            if (std::abs(k[i](0, 0) - 1.0) > tol) return false;
        }
        return true;
    }
};

struct RelationViolation {
    std::string relation;
    double residual;
};

namespace detail {

inline double qnum(double q, long n) {
    return (std::pow(q, static_cast<double>(n)) - std::pow(q, static_cast<double>(-n))) /
           (q - 1.0 / q);
}

inline Matrix kpow(const Irrep& irr, const std::vector<int>& kappa) {
    Matrix m = Matrix::Identity(irr.dim, irr.dim);
    for (size_t i = 0; i < kappa.size(); ++i) {
        const Matrix& base = kappa[i] >= 0 ? irr.k[i] : irr.k_inv[i];
        for (int r = 0; r < std::abs(kappa[i]); ++r) m = m * base;
    }
    return m;
}

inline Matrix evaluate_monomial(const Irrep& irr, const Monomial& mono) {
    Matrix m = Matrix::Identity(irr.dim, irr.dim);
    for (int j : mono.f_word) m = m * irr.f[static_cast<size_t>(j)];
    m = m * kpow(irr, mono.k_exp);
    for (int j : mono.e_word) m = m * irr.e[static_cast<size_t>(j)];
    return m;
}

inline Matrix evaluate_in_irrep(const Irrep& irr, const AlgebraElement& a) {
    Matrix acc = Matrix::Zero(irr.dim, irr.dim);
    for (const auto& [mono, c] : a.terms())
        acc += c.eval_at_q(irr.q) * evaluate_monomial(irr, mono);
    return acc;
}

// Relative Frobenius residual; `scale` guards relations between large matrices.
inline double rel_residual(const Matrix& diff, double scale) {
    return diff.norm() / std::max(1.0, scale);
}

}  // namespace detail

// Checks every defining relation of the algebra plus unitarity; returns the
// list of violations above `tol` (empty for a valid representation).
inline std::vector<RelationViolation> verify_irrep(const CartanData& ctx, const Irrep& irr,
                                                   double tol) {
    std::vector<RelationViolation> out;
    auto check = [&](const std::string& name, const Matrix& diff, double scale) {
        double r = detail::rel_residual(diff, scale);
        if (!(r < tol)) out.push_back({name, r});
    };
    const double q = irr.q;
    const Matrix id = Matrix::Identity(irr.dim, irr.dim);
    for (int i = 0; i < ctx.rank; ++i) {
        double ks = irr.k[i].norm();
        check("k_K_identity(" + std::to_string(i + 1) + ")", irr.k[i] * irr.k_inv[i] - id,
              ks * irr.k_inv[i].norm());
        check("k_selfadjoint(" + std::to_string(i + 1) + ")", irr.k[i] - irr.k[i].adjoint(), ks);
        check("involution(e_" + std::to_string(i + 1) + ")", irr.f[i] - irr.e[i].adjoint(),
              irr.e[i].norm());
        for (int j = 0; j < ctx.rank; ++j) {
            std::string ij = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            double scale = irr.k[i].norm() * irr.e[j].norm();
            check("k_commute" + ij, irr.k[i] * irr.k[j] - irr.k[j] * irr.k[i],
                  ks * irr.k[j].norm());
            double ce = std::pow(q, 0.5 * ctx.d[i] * ctx.a[i][j]);
            check("k_e_crossing" + ij, irr.k[i] * irr.e[j] - ce * irr.e[j] * irr.k[i], scale);
            check("k_f_crossing" + ij, irr.k[i] * irr.f[j] - (1.0 / ce) * irr.f[j] * irr.k[i],
                  irr.k[i].norm() * irr.f[j].norm());
            Matrix comm = irr.e[i] * irr.f[j] - irr.f[j] * irr.e[i];
            Matrix rhs = Matrix::Zero(irr.dim, irr.dim);
            if (i == j) {
                double qi = std::pow(q, ctx.d[i]);
                rhs = (irr.k[i] * irr.k[i] - irr.k_inv[i] * irr.k_inv[i]) / (qi - 1.0 / qi);
            }
            check("e_f_commutator" + ij, comm - rhs,
                  irr.e[i].norm() * irr.f[j].norm() + rhs.norm());
            if (i != j) {
                for (bool e_side : {true, false}) {
                    AlgebraElement s = serre_element(ctx, i, j, e_side);
                    Matrix sm = detail::evaluate_in_irrep(irr, s);
                    double sscale =
                        std::pow((e_side ? irr.e[i] : irr.f[i]).norm(), 1.0 - ctx.a[i][j]) *
                        (e_side ? irr.e[j] : irr.f[j]).norm();
                    check(std::string("serre_") + (e_side ? "e" : "f") + ij, sm, sscale);
                }
            }
        }
    }
    return out;
}

// Weight-basis irrep of U_q(su(2)) with spin j = two_j / 2:
//   k |j,m> = q^m |j,m>,  e |j,m> = sqrt([j-m][j+m+1]) |j,m+1>,
//   f |j,m> = sqrt([j+m][j-m+1]) |j,m-1>,
// on the descending basis m = j, j-1, ..., -j.
inline Irrep su2_irrep(int two_j, double q) {
    if (two_j < 0) throw std::invalid_argument("su2_irrep: spin must be nonnegative");
    if (!(q > 0.0) || q == 1.0) throw std::invalid_argument("su2_irrep: need q > 0, q != 1");
    Irrep irr;
    irr.rank = 1;
    irr.dim = two_j + 1;
    irr.q = q;
    irr.two_j = two_j;
    irr.label = two_j % 2 == 0 ? std::to_string(two_j / 2) : std::to_string(two_j) + "/2";
    Matrix e = Matrix::Zero(irr.dim, irr.dim);
    Matrix k = Matrix::Zero(irr.dim, irr.dim);
    for (int idx = 0; idx < irr.dim; ++idx) {
        long m2 = two_j - 2 * idx;  // 2m at this basis vector
        k(idx, idx) = std::pow(q, 0.5 * static_cast<double>(m2));
        if (idx > 0) {
            // raise |j,m> (index idx) to |j,m+1> (index idx-1)
            long jm = (two_j - m2) / 2, jm1 = (two_j + m2) / 2 + 1;
            e(idx - 1, idx) = std::sqrt(detail::qnum(q, jm) * detail::qnum(q, jm1));
        }
    }
    irr.e = {e};
    irr.f = {e.adjoint()};
    irr.k = {k};
    irr.k_inv = {k.inverse()};
    CartanData a1 = CartanData::named("A1", q);
    auto bad = verify_irrep(a1, irr, 1e-10);
    if (!bad.empty())
        throw std::runtime_error("su2_irrep: construction failed relation check: " +
                                 bad.front().relation);
    return irr;
}

struct WeightSpace {
    std::vector<int> lambda;
    Matrix basis;  // dim x multiplicity, orthonormal columns
};

using WeightDecomposition = std::vector<WeightSpace>;

class Rep {
  public:
    Rep() = default;
    // `tol` is the verification tolerance; construction fails on any violated
    // relation.
    Rep(const CartanData& ctx, std::vector<std::pair<Irrep, int>> summands, double tol = 1e-10)
        : ctx_(&ctx), summands_(std::move(summands)) {
        if (summands_.empty()) throw std::invalid_argument("Rep: no summands");
        q_ = summands_.front().first.q;
        dim_ = 0;
        for (auto& [irr, mult] : summands_) {
            if (mult < 1) throw std::invalid_argument("Rep: multiplicity must be positive");
            if (irr.rank != ctx.rank) throw std::invalid_argument("Rep: rank mismatch");
            if (std::abs(irr.q - q_) > 1e-12) throw std::invalid_argument("Rep: mixed q values");
            auto bad = verify_irrep(ctx, irr, tol);
            if (!bad.empty()) {
                std::string msg = "representation rejected:";
                for (const auto& v : bad)
                    msg += " " + v.relation + " residual=" + std::to_string(v.residual) + ";";
                throw std::runtime_error(msg);
            }
            if (irr.is_trivial()) has_trivial_ = true;
            dim_ += irr.dim * mult;
        }
        if (ctx.q && std::abs(*ctx.q - q_) > 1e-12)
            throw std::invalid_argument("Rep: q differs from Cartan context");
        build_generator_matrices();
        wd_ = compute_weight_decomposition();
    }

    const CartanData& ctx() const { return *ctx_; }
    int dim() const { return dim_; }
    double q() const { return q_; }
    bool has_trivial_summand() const { return has_trivial_; }
    const std::vector<std::pair<Irrep, int>>& summands() const { return summands_; }
    const WeightDecomposition& weights() const { return wd_; }
    const Matrix& gen_e(int i) const { return ge_[static_cast<size_t>(i)]; }
    const Matrix& gen_f(int i) const { return gf_[static_cast<size_t>(i)]; }
    const Matrix& gen_k(int i) const { return gk_[static_cast<size_t>(i)]; }
    const Matrix& gen_k_inv(int i) const { return gki_[static_cast<size_t>(i)]; }

    Matrix evaluate(const AlgebraElement& a) const {
        if (a.ctx_ptr() && !ctx_equal(a.ctx(), *ctx_))
            throw std::invalid_argument("evaluate: element from a different Cartan context");
        Matrix acc = Matrix::Zero(dim_, dim_);
        for (const auto& [mono, c] : a.terms()) acc += c.eval_at_q(q_) * monomial_matrix(mono);
        return acc;
    }

    Matrix monomial_matrix(const Monomial& mono) const {
        Matrix m = Matrix::Identity(dim_, dim_);
        for (int j : mono.f_word) m = m * gf_[static_cast<size_t>(j)];
        for (size_t i = 0; i < mono.k_exp.size(); ++i) {
            const Matrix& base = mono.k_exp[i] >= 0 ? gk_[i] : gki_[i];
            for (int r = 0; r < std::abs(mono.k_exp[i]); ++r) m = m * base;
        }
        for (int j : mono.e_word) m = m * ge_[static_cast<size_t>(j)];
        return m;
    }

  private:
    void build_generator_matrices() {
        ge_.assign(static_cast<size_t>(ctx_->rank), Matrix::Zero(dim_, dim_));
        gf_ = ge_;
        gk_ = ge_;
        gki_ = ge_;
        int at = 0;
        for (const auto& [irr, mult] : summands_) {
            for (int cpy = 0; cpy < mult; ++cpy) {
                for (int i = 0; i < ctx_->rank; ++i) {
                    ge_[static_cast<size_t>(i)].block(at, at, irr.dim, irr.dim) = irr.e[i];
                    gf_[static_cast<size_t>(i)].block(at, at, irr.dim, irr.dim) = irr.f[i];
                    gk_[static_cast<size_t>(i)].block(at, at, irr.dim, irr.dim) = irr.k[i];
                    gki_[static_cast<size_t>(i)].block(at, at, irr.dim, irr.dim) = irr.k_inv[i];
                }
                at += irr.dim;
            }
        }
    }

    WeightDecomposition compute_weight_decomposition() const {
        struct Cluster {
            std::vector<int> lambda;
            Matrix basis;
        };
        std::vector<Cluster> clusters{{{}, Matrix::Identity(dim_, dim_)}};
        const double logq = std::log(q_);
        for (int i = 0; i < ctx_->rank; ++i) {
            std::vector<Cluster> next;
            for (const auto& cl : clusters) {
                Matrix h = cl.basis.adjoint() * gk_[static_cast<size_t>(i)] * cl.basis;
                Eigen::SelfAdjointEigenSolver<Matrix> es(h);
                if (es.info() != Eigen::Success)
                    throw std::runtime_error("weight decomposition: eigensolver failed");
                std::map<int, std::vector<int>> groups;
                for (int c = 0; c < h.rows(); ++c) {
                    double ev = es.eigenvalues()(c);
                    if (!(ev > 0.0))
                        throw std::runtime_error("weight decomposition: eigenvalue off-lattice "
                                                 "(nonpositive k eigenvalue)");
                    double lam = 2.0 * std::log(ev) / logq;
                    int rounded = static_cast<int>(std::lround(lam));
                    if (std::abs(lam - rounded) > 1e-8)
                        throw std::runtime_error(
                            "weight decomposition: eigenvalue off-lattice (residual " +
                            std::to_string(std::abs(lam - rounded)) + ")");
                    groups[rounded].push_back(c);
                }
                for (const auto& [lam, cols] : groups) {
                    Matrix basis(dim_, static_cast<int>(cols.size()));
                    for (size_t c = 0; c < cols.size(); ++c)
                        basis.col(static_cast<int>(c)) = cl.basis * es.eigenvectors().col(cols[c]);
                    Cluster nc;
                    nc.lambda = cl.lambda;
                    nc.lambda.push_back(lam);
                    nc.basis = std::move(basis);
                    next.push_back(std::move(nc));
                }
            }
            clusters = std::move(next);
        }
        WeightDecomposition wd;
        for (auto& cl : clusters) wd.push_back({cl.lambda, cl.basis});
        std::sort(wd.begin(), wd.end(),
                  [](const WeightSpace& a, const WeightSpace& b) { return a.lambda < b.lambda; });
        return wd;
    }

    const CartanData* ctx_ = nullptr;
    std::vector<std::pair<Irrep, int>> summands_;
    int dim_ = 0;
    double q_ = 0.0;
    bool has_trivial_ = false;
    std::vector<Matrix> ge_, gf_, gk_, gki_;
    WeightDecomposition wd_;
};

inline Matrix evaluate(const Rep& rep, const AlgebraElement& a) { return rep.evaluate(a); }

// (r1 (x) r2)(u) := (r1 (x) r2)(Delta u) on generators, assembled with
// Kronecker products and re-verified.
inline Rep tensor_rep(const Rep& r1, const Rep& r2) {
    if (std::abs(r1.q() - r2.q()) > 1e-12)
        throw std::invalid_argument("tensor_rep: mismatched q");
    long dim = static_cast<long>(r1.dim()) * r2.dim();
    if (dim > 4096) throw std::invalid_argument("tensor_rep: product dimension exceeds 4096");
    const CartanData& ctx = r1.ctx();
    auto kron = [](const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    Irrep irr;
    irr.rank = ctx.rank;
    irr.dim = static_cast<int>(dim);
    irr.q = r1.q();
    irr.label = "tensor";
    for (int i = 0; i < ctx.rank; ++i) {
        irr.e.push_back(kron(r1.gen_e(i), r2.gen_k_inv(i)) + kron(r1.gen_k(i), r2.gen_e(i)));
        irr.f.push_back(kron(r1.gen_f(i), r2.gen_k_inv(i)) + kron(r1.gen_k(i), r2.gen_f(i)));
        irr.k.push_back(kron(r1.gen_k(i), r2.gen_k(i)));
        irr.k_inv.push_back(kron(r1.gen_k_inv(i), r2.gen_k_inv(i)));
    }
    return Rep(ctx, {{irr, 1}});
}

// ---------------------------------------------------------------------------
// Representation files.
//
//   [irrep <name>]
//   dim = <n>
//   q = <decimal>
//   matrix e_<i> = [[re,im],[re,im],...]    (row-major, dim^2 entries)
//   (one line per generator: e_i, f_i, k_i, K_i)
//   [sum]
//   <name> x <multiplicity>

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<Complex> parse_complex_list(const std::string& text, const std::string& where) {
    std::vector<Complex> out;
    size_t pos = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("representation file: " + msg + " in " + where);
    };
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip();
    if (pos >= text.size() || text[pos] != '[') fail("expected '['");
    ++pos;
    skip();
    while (pos < text.size() && text[pos] != ']') {
        if (text[pos] != '[') fail("expected '[re,im]' pair");
        ++pos;
        char* end = nullptr;
        double re = std::strtod(text.c_str() + pos, &end);
        if (end == text.c_str() + pos) fail("bad real part");
        pos = static_cast<size_t>(end - text.c_str());
        skip();
        if (text[pos] != ',') fail("expected ','");
        ++pos;
        double im = std::strtod(text.c_str() + pos, &end);
        if (end == text.c_str() + pos) fail("bad imaginary part");
        pos = static_cast<size_t>(end - text.c_str());
        skip();
        if (text[pos] != ']') fail("expected ']'");
        ++pos;
        skip();
        if (pos < text.size() && text[pos] == ',') {
            ++pos;
            skip();
        }
        out.emplace_back(re, im);
    }
    if (pos >= text.size()) fail("unterminated list");
    return out;
}

}  // namespace detail

inline Rep load_rep(const CartanData& ctx, std::istream& in, double tol = 1e-8) {
    std::map<std::string, Irrep> irreps;
    std::vector<std::pair<std::string, int>> sum;
    std::string line, section, current;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("representation file line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            std::string head = detail::trim(line.substr(1, line.size() - 2));
            if (head == "sum") {
                section = "sum";
            } else if (head.rfind("irrep", 0) == 0) {
                current = detail::trim(head.substr(5));
                if (current.empty()) fail("irrep section needs a name");
                section = "irrep";
                Irrep irr;
                irr.rank = ctx.rank;
                irr.label = current;
                irr.e.resize(static_cast<size_t>(ctx.rank));
                irr.f.resize(static_cast<size_t>(ctx.rank));
                irr.k.resize(static_cast<size_t>(ctx.rank));
                irr.k_inv.resize(static_cast<size_t>(ctx.rank));
                irreps[current] = irr;
            } else {
                fail("unknown section '" + head + "'");
            }
            continue;
        }
        if (section == "sum") {
            auto x = line.find(" x ");
            if (x == std::string::npos) fail("expected '<name> x <multiplicity>'");
            std::string name = detail::trim(line.substr(0, x));
            int mult = std::stoi(detail::trim(line.substr(x + 3)));
            sum.emplace_back(name, mult);
            continue;
        }
        if (section != "irrep") fail("content before any section");
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        Irrep& irr = irreps[current];
        if (key == "dim") {
            irr.dim = std::stoi(value);
            if (irr.dim < 1) fail("dim must be positive");
        } else if (key == "q") {
            irr.q = std::stod(value);
            if (!(irr.q > 0.0) || irr.q == 1.0) fail("q must satisfy q>0, q!=1");
        } else if (key.rfind("matrix ", 0) == 0) {
            std::string gen = detail::trim(key.substr(7));
            if (gen.size() < 3 || gen[1] != '_') fail("bad generator name '" + gen + "'");
            int idx = std::stoi(gen.substr(2)) - 1;
            if (idx < 0 || idx >= ctx.rank) fail("generator index out of range");
            if (irr.dim < 1) fail("dim must come before matrix lines");
            auto entries = detail::parse_complex_list(value, "matrix " + gen);
            if (static_cast<int>(entries.size()) != irr.dim * irr.dim)
                fail("matrix " + gen + " needs dim^2 = " + std::to_string(irr.dim * irr.dim) +
                     " entries, got " + std::to_string(entries.size()));
            Matrix m(irr.dim, irr.dim);
            for (int r = 0; r < irr.dim; ++r)
                for (int c = 0; c < irr.dim; ++c) m(r, c) = entries[static_cast<size_t>(r * irr.dim + c)];
            switch (gen[0]) {
                case 'e': irr.e[static_cast<size_t>(idx)] = m; break;
                case 'f': irr.f[static_cast<size_t>(idx)] = m; break;
                case 'k': irr.k[static_cast<size_t>(idx)] = m; break;
                case 'K': irr.k_inv[static_cast<size_t>(idx)] = m; break;
                default: fail("unknown generator letter in '" + gen + "'");
            }
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (irreps.empty()) throw std::runtime_error("representation file: no irrep sections");
    for (auto& [name, irr] : irreps) {
        for (int i = 0; i < ctx.rank; ++i) {
            if (irr.e[static_cast<size_t>(i)].rows() != irr.dim ||
                irr.f[static_cast<size_t>(i)].rows() != irr.dim ||
                irr.k[static_cast<size_t>(i)].rows() != irr.dim ||
                irr.k_inv[static_cast<size_t>(i)].rows() != irr.dim)
                throw std::runtime_error("representation file: irrep " + name +
                                         " is missing generator matrices");
        }
    }
    std::vector<std::pair<Irrep, int>> summands;
    if (sum.empty()) {
        for (auto& [name, irr] : irreps) summands.emplace_back(irr, 1);
    } else {
        for (auto& [name, mult] : sum) {
            auto it = irreps.find(name);
            if (it == irreps.end())
                throw std::runtime_error("representation file: unknown irrep '" + name + "' in sum");
            summands.emplace_back(it->second, mult);
        }
    }
    return Rep(ctx, std::move(summands), tol);
}

inline Rep load_rep_file(const CartanData& ctx, const std::string& path, double tol = 1e-8) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open representation file: " + path);
    return load_rep(ctx, in, tol);
}

inline void save_rep(const Rep& rep, std::ostream& out) {
    auto write_matrix = [&out](const Matrix& m) {
        out << "[";
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) {
                if (r + c > 0) out << ",";
                // + 0.0 normalizes negative zeros from adjoints
                out << "[" << m(r, c).real() + 0.0 << "," << m(r, c).imag() + 0.0 << "]";
            }
        out << "]";
    };
    out.precision(17);
    int idx = 0;
    std::vector<std::string> names;
    for (const auto& [irr, mult] : rep.summands()) {
        std::string name = "s" + std::to_string(idx++);
        names.push_back(name);
        out << "[irrep " << name << "]\n";
        out << "dim = " << irr.dim << "\n";
        out << "q = " << irr.q << "\n";
        for (int i = 0; i < irr.rank; ++i) {
            out << "matrix e_" << i + 1 << " = ";
            write_matrix(irr.e[static_cast<size_t>(i)]);
            out << "\nmatrix f_" << i + 1 << " = ";
            write_matrix(irr.f[static_cast<size_t>(i)]);
            out << "\nmatrix k_" << i + 1 << " = ";
            write_matrix(irr.k[static_cast<size_t>(i)]);
            out << "\nmatrix K_" << i + 1 << " = ";
            write_matrix(irr.k_inv[static_cast<size_t>(i)]);
            out << "\n";
        }
    }
    out << "[sum]\n";
    for (size_t s = 0; s < names.size(); ++s)
        out << names[s] << " x " << rep.summands()[s].second << "\n";
}

}  // namespace qglevy
