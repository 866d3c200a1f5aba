// Discretized Fock-space realization of the process.
//
// Time [0, T] is cut into slices of width delta; each slice carries C (+) D
// and the one-slice compression of the quantum stochastic differentials is
//
//   pi_delta(u) = [ eps(u) + delta psi(u)   sqrt(delta) eta(u*)^+ ]
//                 [ sqrt(delta) eta(u)      rho(u)                ]
//
// The realized operator over an interval of m slices is
// pi_delta^{(x)m}(Delta^{(m)} u).  The slice-vacuum compression of pi_delta is
// eps + delta psi, so single-time vacuum moments are (eps + delta psi)^{*m}
// and converge to exp_* t psi at first order in delta.
//
// Vacuum moments of operator products are contracted slice by slice: the
// iterated coproduct is unrolled as a transfer chain whose bond space is the
// (finite) set of right coproduct remainders of u, so no state on the full
// (1+dim D)^m tensor power is ever materialized.  apply_process keeps the
// explicit sparse-state path for small grids; the two paths agree exactly and
// are tested against each other.

#pragma once

#include "qglevy/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace qglevy {

struct SliceOperator {
    Matrix mat;
    double delta;
};

inline SliceOperator slice_operator(const SchurmannTriple& t, const AlgebraElement& u,
                                    double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("slice_operator: delta must be positive");
    int d = t.rho().dim();
    Matrix m = Matrix::Zero(1 + d, 1 + d);
    double q = t.q();
    double root = std::sqrt(delta);
    m(0, 0) = counit(u).eval_at_q(q) + delta * t.psi(u);
    m.block(1, 0, d, 1) = root * t.eta(u);
    m.block(0, 1, 1, d) = root * t.eta_star(u).adjoint();
    m.block(1, 1, d, d) = t.rho().evaluate(u);
    return {std::move(m), delta};
}

struct FockGrid {
    int n_slices = 0;
    double delta = 0.0;
    double horizon() const { return n_slices * delta; }
};

inline int slice_index(double time, double delta, const char* what) {
    double r = time / delta;
    long idx = std::lround(r);
    if (std::abs(r - static_cast<double>(idx)) > 1e-9 * std::max(1.0, std::abs(r)))
        throw std::invalid_argument(std::string(what) + ": time " + std::to_string(time) +
                                    " is off the slice grid");
    if (idx < 0) throw std::invalid_argument(std::string(what) + ": negative time");
    return static_cast<int>(idx);
}

// Sparse amplitude map over (C (+) D)^{(x) n_slices}.
class FockState {
  public:
    FockState(FockGrid grid, int slice_dim) : grid_(grid), slice_dim_(slice_dim) {}

    static FockState vacuum(FockGrid grid, int slice_dim) {
        FockState s(grid, slice_dim);
        s.amps_[std::vector<int>(static_cast<size_t>(grid.n_slices), 0)] = 1.0;
        return s;
    }

    const FockGrid& grid() const { return grid_; }
    int slice_dim() const { return slice_dim_; }
    const std::map<std::vector<int>, Complex>& amplitudes() const { return amps_; }

    void add(const std::vector<int>& idx, Complex amp) {
        if (std::abs(amp) < 1e-300) return;
        auto [it, inserted] = amps_.try_emplace(idx, amp);
        if (!inserted) {
            it->second += amp;
            if (std::abs(it->second) < 1e-300) amps_.erase(it);
        }
    }

    Complex vacuum_amplitude() const {
        auto it = amps_.find(std::vector<int>(static_cast<size_t>(grid_.n_slices), 0));
        return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
    }

    double norm() const {
        double acc = 0.0;
        for (const auto& [idx, a] : amps_) acc += std::norm(a);
        return std::sqrt(acc);
    }

    friend Complex inner(const FockState& a, const FockState& b) {
        Complex acc{0.0, 0.0};
        const auto& small = a.amps_.size() <= b.amps_.size() ? a.amps_ : b.amps_;
        const auto& large = a.amps_.size() <= b.amps_.size() ? b.amps_ : a.amps_;
        bool small_is_a = a.amps_.size() <= b.amps_.size();
        for (const auto& [idx, amp] : small) {
            auto it = large.find(idx);
            if (it == large.end()) continue;
            acc += small_is_a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
        }
        return acc;
    }

    friend FockState operator-(const FockState& a, const FockState& b) {
        FockState r = a;
        for (const auto& [idx, amp] : b.amps_) r.add(idx, -amp);
        return r;
    }

  private:
    FockGrid grid_;
    int slice_dim_;
    std::map<std::vector<int>, Complex> amps_;
};

// pi^{(x)m}(Delta^{(m)} u) applied to the slices in [s, tend), identity
// elsewhere.  Explicit sparse-state path; for study-size grids only.
inline FockState apply_process(const SchurmannTriple& t, const AlgebraElement& u, double s,
                               double tend, const FockState& state) {
    const double delta = state.grid().delta;
    int s_idx = slice_index(s, delta, "apply_process");
    int t_idx = slice_index(tend, delta, "apply_process");
    if (s_idx > t_idx) throw std::invalid_argument("apply_process: needs s <= tend");
    if (t_idx > state.grid().n_slices)
        throw std::invalid_argument("apply_process: interval beyond the grid horizon");
    const int m = t_idx - s_idx;
    const int sdim = state.slice_dim();
    FockState out(state.grid(), sdim);
    if (m == 0) {
        Complex eps = counit(u).eval_at_q(t.q());
        for (const auto& [idx, amp] : state.amplitudes()) out.add(idx, eps * amp);
        return out;
    }
    TensorElement du = coproduct_n(u, m);
    double budget = static_cast<double>(du.terms().size()) * state.amplitudes().size() *
                    std::pow(static_cast<double>(sdim), m);
    if (budget > 1e7)
        throw std::invalid_argument("apply_process: term count limit exceeded; use vacuum_moment");

    std::map<Monomial, Matrix> pi_cache;
    auto pi = [&](const Monomial& mono) -> const Matrix& {
        auto it = pi_cache.find(mono);
        if (it != pi_cache.end()) return it->second;
        Matrix mat = slice_operator(t, element_of_monomial(t.ctx(), mono), delta).mat;
        return pi_cache.emplace(mono, std::move(mat)).first->second;
    };

    const double q = t.q();
    for (const auto& [idx, amp] : state.amplitudes()) {
        for (const auto& [legs, c] : du.terms()) {
            std::vector<Vector> cols(static_cast<size_t>(m));
            bool dead = false;
            for (int l = 0; l < m && !dead; ++l) {
                cols[static_cast<size_t>(l)] =
                    pi(legs[static_cast<size_t>(l)]).col(idx[static_cast<size_t>(s_idx + l)]);
                dead = cols[static_cast<size_t>(l)].norm() < 1e-300;
            }
            if (dead) continue;
            Complex base = amp * c.eval_at_q(q);
            std::vector<int> target = idx;
            // expand the tensor product of columns over the touched slices
            std::function<void(int, Complex)> expand = [&](int l, Complex acc) {
                if (l == m) {
                    out.add(target, acc);
                    return;
                }
                const Vector& col = cols[static_cast<size_t>(l)];
                for (int r = 0; r < sdim; ++r) {
                    if (std::abs(col(r)) < 1e-300) continue;
                    target[static_cast<size_t>(s_idx + l)] = r;
                    expand(l + 1, acc * col(r));
                }
                target[static_cast<size_t>(s_idx + l)] = idx[static_cast<size_t>(s_idx + l)];
            };
            expand(0, base);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transfer-chain contraction of vacuum moments.

struct ProcessItem {
    AlgebraElement u;
    double s = 0.0;
    double t = 0.0;
};

namespace detail {

class SliceTransferEngine {
  public:
    SliceTransferEngine(const SchurmannTriple& triple, double delta)
        : triple_(&triple), delta_(delta), sdim_(1 + triple.rho().dim()) {}

    Complex vacuum_moment(const std::vector<ProcessItem>& items) {
        struct Chain {
            int start, end;  // slice indices, end exclusive
            std::vector<Monomial> bond;
            std::map<Monomial, int> bond_index;
            std::vector<std::vector<std::tuple<int, int, Complex>>> trans;  // per bond state
            std::vector<std::tuple<int, int, Complex>> start_trans;
            Matrix whole_pi;
        };
        Complex prefactor{1.0, 0.0};
        std::vector<Chain> chains;
        int n_slices = 0;
        for (const auto& item : items) {
            int s_idx = slice_index(item.s, delta_, "vacuum_moment");
            int t_idx = slice_index(item.t, delta_, "vacuum_moment");
            if (s_idx > t_idx) throw std::invalid_argument("vacuum_moment: needs s <= t");
            n_slices = std::max(n_slices, t_idx);
            if (s_idx == t_idx) {
                prefactor *= counit(item.u).eval_at_q(triple_->q());
                continue;
            }
            Chain ch;
            ch.start = s_idx;
            ch.end = t_idx;
            if (t_idx - s_idx == 1) {
                ch.whole_pi = pi_element(item.u);
            } else {
                build_bond(item.u, ch.bond, ch.bond_index, ch.trans, ch.start_trans);
            }
            chains.push_back(std::move(ch));
        }
        if (prefactor == Complex{0.0, 0.0}) return prefactor;

        // transfer vector over the product of live bond dimensions
        std::vector<long> dims(chains.size(), 1);
        std::vector<Complex> transfer{prefactor};
        auto total = [&dims] {
            long p = 1;
            for (long d : dims) p *= d;
            return p;
        };

        for (int slice = 0; slice < n_slices; ++slice) {
            // any chain touching this slice?
            bool active = false;
            for (const auto& ch : chains) active |= slice >= ch.start && slice < ch.end;
            if (!active) continue;

            long width = total();
            if (width * sdim_ > 10000000L)
                throw std::invalid_argument("vacuum_moment: term count limit exceeded");
            // expand with the slice vacuum e_0
            std::vector<Complex> buf(static_cast<size_t>(width * sdim_), Complex{0.0, 0.0});
            for (long i = 0; i < width; ++i) buf[static_cast<size_t>(i * sdim_)] = transfer[static_cast<size_t>(i)];

            // rightmost factor acts on the slice vacuum first
            for (int c = static_cast<int>(chains.size()) - 1; c >= 0; --c) {
                Chain& ch = chains[static_cast<size_t>(c)];
                if (slice < ch.start || slice >= ch.end) continue;
                long din = dims[static_cast<size_t>(c)];
                bool single = ch.end - ch.start == 1;
                bool first = slice == ch.start;
                bool last = slice == ch.end - 1;
                long dout = (single || last) ? 1 : static_cast<long>(ch.bond.size());
                long before = 1, rest = 1;
                for (int j = 0; j < c; ++j) before *= dims[static_cast<size_t>(j)];
                for (size_t j = static_cast<size_t>(c) + 1; j < dims.size(); ++j)
                    rest *= dims[j];
                std::vector<Complex> nbuf(static_cast<size_t>(before * dout * rest * sdim_),
                                          Complex{0.0, 0.0});
                auto apply = [&](long b, long alpha, long gamma, const Matrix& mat, Complex coeff) {
                    for (long r = 0; r < rest; ++r) {
                        const Complex* src =
                            &buf[static_cast<size_t>(((b * din + alpha) * rest + r) * sdim_)];
                        Complex* dst =
                            &nbuf[static_cast<size_t>(((b * dout + gamma) * rest + r) * sdim_)];
                        for (int sp = 0; sp < sdim_; ++sp) {
                            Complex acc{0.0, 0.0};
                            for (int ss = 0; ss < sdim_; ++ss) acc += mat(sp, ss) * src[ss];
                            dst[sp] += coeff * acc;
                        }
                    }
                };
                for (long b = 0; b < before; ++b) {
                    if (single) {
                        apply(b, 0, 0, ch.whole_pi, Complex{1.0, 0.0});
                    } else if (first) {
                        for (const auto& [pidx, gamma, coeff] : ch.start_trans)
                            apply(b, 0, gamma, pi_table_[static_cast<size_t>(pidx)], coeff);
                    } else if (last) {
                        for (long alpha = 0; alpha < din; ++alpha)
                            apply(b, alpha, 0, pi_monomial(ch.bond[static_cast<size_t>(alpha)]),
                                  Complex{1.0, 0.0});
                    } else {
                        for (long alpha = 0; alpha < din; ++alpha)
                            for (const auto& [pidx, gamma, coeff] :
                                 ch.trans[static_cast<size_t>(alpha)])
                                apply(b, alpha, gamma, pi_table_[static_cast<size_t>(pidx)], coeff);
                    }
                }
                buf = std::move(nbuf);
                dims[static_cast<size_t>(c)] = dout;
            }

            // contract with the slice vacuum
            long new_width = total();
            transfer.assign(static_cast<size_t>(new_width), Complex{0.0, 0.0});
            for (long i = 0; i < new_width; ++i)
                transfer[static_cast<size_t>(i)] = buf[static_cast<size_t>(i * sdim_)];
        }
        if (transfer.size() != 1)
            throw std::logic_error("vacuum_moment: unterminated transfer chain");
        return transfer[0];
    }

  private:
    const Matrix& pi_monomial(const Monomial& m) {
        auto it = pi_index_.find(m);
        if (it != pi_index_.end()) return pi_table_[static_cast<size_t>(it->second)];
        Matrix mat = slice_operator(*triple_, element_of_monomial(triple_->ctx(), m), delta_).mat;
        pi_index_.emplace(m, static_cast<int>(pi_table_.size()));
        pi_table_.push_back(std::move(mat));
        return pi_table_.back();
    }
    int pi_id(const Monomial& m) {
        pi_monomial(m);
        return pi_index_.at(m);
    }
    Matrix pi_element(const AlgebraElement& u) {
        return slice_operator(*triple_, u, delta_).mat;
    }

    void build_bond(const AlgebraElement& u, std::vector<Monomial>& bond,
                    std::map<Monomial, int>& bond_index,
                    std::vector<std::vector<std::tuple<int, int, Complex>>>& trans,
                    std::vector<std::tuple<int, int, Complex>>& start_trans) {
        const CartanData& ctx = triple_->ctx();
        const double q = triple_->q();
        auto intern = [&](const Monomial& m) {
            auto it = bond_index.find(m);
            if (it != bond_index.end()) return it->second;
            int id = static_cast<int>(bond.size());
            bond_index.emplace(m, id);
            bond.push_back(m);
            return id;
        };
        // closure of right coproduct remainders
        std::vector<int> queue;
        for (const auto& [m, c] : u.terms()) queue.push_back(intern(m));
        for (size_t at = 0; at < queue.size(); ++at) {
            Monomial m = bond[static_cast<size_t>(queue[at])];
            TensorElement dm = coproduct(element_of_monomial(ctx, m));
            for (const auto& [legs, c] : dm.terms()) {
                if (bond_index.find(legs[1]) == bond_index.end())
                    queue.push_back(intern(legs[1]));
            }
            if (bond.size() > 4096)
                throw std::invalid_argument("vacuum_moment: coproduct closure too large");
        }
        trans.assign(bond.size(), {});
        for (size_t bidx = 0; bidx < bond.size(); ++bidx) {
            TensorElement dm = coproduct(element_of_monomial(ctx, bond[bidx]));
            for (const auto& [legs, c] : dm.terms())
                trans[bidx].push_back({pi_id(legs[0]), bond_index.at(legs[1]), c.eval_at_q(q)});
        }
        for (const auto& [m, c] : u.terms()) {
            Complex cm = c.eval_at_q(q);
            for (const auto& [pidx, next, coeff] : trans[static_cast<size_t>(bond_index.at(m))])
                start_trans.push_back({pidx, next, cm * coeff});
        }
    }

    const SchurmannTriple* triple_;
    double delta_;
    int sdim_;
    std::map<Monomial, int> pi_index_;
    std::vector<Matrix> pi_table_;
};

}  // namespace detail

// <vac, prod_i pi^{(x)}(Delta^{(m_i)} u_i) vac> in the written order.
inline Complex vacuum_moment(const SchurmannTriple& t, const std::vector<ProcessItem>& items,
                             double delta) {
    detail::SliceTransferEngine engine(t, delta);
    return engine.vacuum_moment(items);
}

// The compression of pi_delta to the slice vacuum: eps + delta psi.  Its m-th
// convolution power is the single-interval vacuum moment over m slices.
inline Functional slice_vacuum_functional(const SchurmannTriple& t, double delta) {
    return {Functional::Kind::generic, [&t, delta](const AlgebraElement& u) {
                return counit(u).eval_at_q(t.q()) + delta * t.psi(u);
            }};
}

// ---------------------------------------------------------------------------
// Exact coherent-vector dynamics for group-like Cartan monomials.

struct StepFunction {
    std::vector<double> breaks;  // size = values.size() + 1, strictly increasing
    std::vector<Vector> values;  // value on [breaks[i], breaks[i+1]); zero outside
    int dim = 0;

    static StepFunction zero(int dim) { return {{}, {}, dim}; }
    static StepFunction indicator(double a, double b, const Vector& v) {
        if (!(a < b)) throw std::invalid_argument("StepFunction: empty interval");
        StepFunction f;
        f.dim = static_cast<int>(v.size());
        f.breaks = {a, b};
        f.values = {v};
        return f;
    }

    Vector at(double r) const {
        for (size_t p = 0; p < values.size(); ++p)
            if (r >= breaks[p] && r < breaks[p + 1]) return values[p];
        return Vector::Zero(dim);
    }
};

// integral_0^inf <f(r), g(r)> dr, conjugate-linear in f.
inline Complex step_inner(const StepFunction& f, const StepFunction& g) {
    std::set<double> cuts(f.breaks.begin(), f.breaks.end());
    cuts.insert(g.breaks.begin(), g.breaks.end());
    Complex acc{0.0, 0.0};
    if (cuts.size() < 2) return acc;
    auto it = cuts.begin();
    double prev = *it++;
    for (; it != cuts.end(); ++it) {
        double mid = 0.5 * (prev + *it);
        acc += f.at(mid).dot(g.at(mid)) * (*it - prev);
        prev = *it;
    }
    return acc;
}

// <E(f), E(g)> = exp(integral <f, g>)
inline Complex coherent_inner(const StepFunction& f, const StepFunction& g) {
    return std::exp(step_inner(f, g));
}

// <E(g), j_{st}(k^lambda) E(f)> from the closed formula: no grid involved.
inline Complex group_like_coherent(const SchurmannTriple& t, const std::vector<int>& lambda,
                                   double s, double tend, const StepFunction& f,
                                   const StepFunction& g) {
    if (!(s <= tend)) throw std::invalid_argument("group_like_coherent: needs s <= t");
    const CartanData& ctx = t.ctx();
    AlgebraElement kl = AlgebraElement::cartan_monomial(ctx, lambda);
    Complex psi_l = t.psi(kl);
    Vector eta_l = t.eta(kl);
    Matrix rho_l = t.rho().evaluate(kl);

    // integral_s^t <eta(k^l), f(r)> dr, exact on step functions
    std::set<double> cuts(f.breaks.begin(), f.breaks.end());
    cuts.insert(s);
    cuts.insert(tend);
    Complex drift{0.0, 0.0};
    {
        auto it = cuts.begin();
        double prev = *it++;
        for (; it != cuts.end(); ++it) {
            double lo = std::max(prev, s), hi = std::min(*it, tend);
            if (lo < hi) drift += eta_l.dot(f.at(0.5 * (lo + hi))) * (hi - lo);
            prev = *it;
        }
    }
    Complex scalar = std::exp(static_cast<double>(tend - s) * psi_l + drift);

    // new argument: f outside [s,t), rho(k^l) f + eta(k^l) inside
    StepFunction h;
    h.dim = f.dim;
    std::vector<double> cut_list(cuts.begin(), cuts.end());
    for (size_t p = 0; p + 1 < cut_list.size(); ++p) {
        double lo = cut_list[p], hi = cut_list[p + 1];
        double mid = 0.5 * (lo + hi);
        Vector val = f.at(mid);
        if (mid >= s && mid < tend) val = rho_l * val + eta_l;
        if (h.breaks.empty()) h.breaks.push_back(lo);
        h.breaks.push_back(hi);
        h.values.push_back(val);
    }
    return scalar * coherent_inner(g, h);
}

// ---------------------------------------------------------------------------
// Classical-version diagnostics for commuting families.

enum class CommutingFamily { cartan, casimir, z_element };

inline AlgebraElement z_element(const CartanData& ctx, int i = 0) {
    // Z = k_i^{-1} e_i + f_i k_i^{-1}, self-adjoint with Delta Z = Z x k^-2 + 1 x Z
    AlgebraElement kinv = AlgebraElement::gen_k(ctx, i, -1);
    return kinv * AlgebraElement::gen_e(ctx, i) + AlgebraElement::gen_f(ctx, i) * kinv;
}

inline Matrix evaluate_tensor_pair(const Rep& rep, const TensorElement& t) {
    if (t.degree() != 2) throw std::invalid_argument("evaluate_tensor_pair: degree-2 only");
    long dim = static_cast<long>(rep.dim()) * rep.dim();
    Matrix acc = Matrix::Zero(dim, dim);
    const double q = rep.q();
    for (const auto& [legs, c] : t.terms()) {
        Matrix a = rep.monomial_matrix(legs[0]);
        Matrix b = rep.monomial_matrix(legs[1]);
        Complex coeff = c.eval_at_q(q);
        for (int i = 0; i < rep.dim(); ++i)
            for (int j = 0; j < rep.dim(); ++j)
                acc.block(i * rep.dim(), j * rep.dim(), rep.dim(), rep.dim()) +=
                    coeff * a(i, j) * b;
    }
    return acc;
}

struct CommutingFamilyResult {
    Report report;
    std::vector<double> moments;  // m_0 .. m_{2M} of j_{0,tmax}(u) (last family element)
};

inline CommutingFamilyResult commuting_family_report(const SchurmannTriple& t,
                                                     CommutingFamily family, double tmax,
                                                     double delta, int max_moment = 4,
                                                     int index = 0) {
    const CartanData& ctx = t.ctx();
    if (family != CommutingFamily::cartan && ctx.rank != 1)
        throw std::invalid_argument("commuting_family_report: casimir/Z need rank 1");
    CommutingFamilyResult result;
    Report& rep = result.report;

    std::vector<AlgebraElement> family_elements;
    std::string fname;
    switch (family) {
        case CommutingFamily::cartan:
            fname = "cartan";
            for (int i = 0; i < ctx.rank; ++i)
                family_elements.push_back(AlgebraElement::gen_k(ctx, i, 1));
            break;
        case CommutingFamily::casimir:
            fname = "casimir";
            family_elements.push_back(casimir_su2(ctx));
            break;
        case CommutingFamily::z_element:
            fname = "Z";
            family_elements.push_back(z_element(ctx, index));
            break;
    }

    // (a) Schuermann's criterium [u x 1, Delta u] = 0, symbolically and in
    // rho (x) rho.
    for (size_t a = 0; a < family_elements.size(); ++a) {
        for (size_t b = 0; b < family_elements.size(); ++b) {
            const AlgebraElement& ua = family_elements[a];
            const AlgebraElement& ub = family_elements[b];
            TensorElement ua_leg(&ctx, 2);
            for (const auto& [m, c] : ua.terms())
                ua_leg.add_term({m, Monomial::identity(ctx.rank)}, c);
            TensorElement du = coproduct(ub);
            TensorElement comm = ua_leg * du - du * ua_leg;
            std::string ab = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
            rep.add(fname, "symbolic_commutant" + ab, comm.is_zero() ? 0.0 : 1.0, 0.0,
                    comm.is_zero());
            Matrix ma = evaluate_tensor_pair(t.rho(), ua_leg);
            Matrix mb = evaluate_tensor_pair(t.rho(), du);
            double scale = std::max(1.0, ma.norm() * mb.norm());
            rep.add_residual(fname, "tensor_commutator" + ab, (ma * mb - mb * ma).norm() / scale,
                             1e-10);
        }
    }
    if (family == CommutingFamily::z_element) {
        // Delta Z = Z x k^-2 + 1 x Z, exactly
        AlgebraElement z = family_elements[0];
        TensorElement expect(&ctx, 2);
        Monomial km2 = Monomial::identity(ctx.rank);
        km2.k_exp[static_cast<size_t>(index)] = -2;
        for (const auto& [m, c] : z.terms()) expect.add_term({m, km2}, c);
        for (const auto& [m, c] : z.terms())
            expect.add_term({Monomial::identity(ctx.rank), m}, c);
        bool ok = coproduct(z) == expect;
        rep.add(fname, "delta_Z_identity", ok ? 0.0 : 1.0, 0.0, ok);
    }

    // (c) slice self-adjointness for the family and probes
    double worst = 0.0;
    for (const auto& u : family_elements) {
        Matrix su = slice_operator(t, u, delta).mat;
        Matrix sustar = slice_operator(t, involute(u), delta).mat;
        worst = std::max(worst, (sustar - su.adjoint()).norm() / std::max(1.0, su.norm()));
    }
    rep.add_residual(fname, "slice_star_compatibility", worst, 1e-12);

    // (b) commutation of the realized operators on the vacuum
    const AlgebraElement& u = family_elements.back();
    AlgebraElement ustar = involute(u);
    double s_half = std::max(delta, std::floor(0.5 * tmax / delta) * delta);
    double resid = 0.0, scale = 1.0;
    {
        auto mom = [&](const AlgebraElement& a1, double t1, const AlgebraElement& a2, double t2,
                       const AlgebraElement& a3, double t3, const AlgebraElement& a4, double t4) {
            return vacuum_moment(
                t, {{a1, 0.0, t1}, {a2, 0.0, t2}, {a3, 0.0, t3}, {a4, 0.0, t4}}, delta);
        };
        Complex abab = mom(ustar, tmax, ustar, s_half, u, s_half, u, tmax);
        Complex abba = mom(ustar, tmax, ustar, s_half, u, tmax, u, s_half);
        Complex baba = mom(ustar, s_half, ustar, tmax, u, tmax, u, s_half);
        double norm2 = std::abs(abab - abba - std::conj(abba) + baba);
        scale = std::max(1.0, std::sqrt(std::abs(abab)) * std::sqrt(std::abs(baba)));
        resid = std::sqrt(std::max(0.0, norm2)) / scale;
    }
    rep.add_residual(fname, "realized_commutator", resid, 10.0 * delta);

    // (d) moment sequence of j_{0,tmax}(u) and its Hankel matrix
    std::vector<double> moments;
    double max_imag = 0.0;
    for (int n = 0; n <= 2 * max_moment; ++n) {
        std::vector<ProcessItem> items(static_cast<size_t>(n), ProcessItem{u, 0.0, tmax});
        Complex m = vacuum_moment(t, items, delta);
        max_imag = std::max(max_imag, std::abs(m.imag()));
        moments.push_back(m.real());
    }
    double mscale = 1.0;
    for (double m : moments) mscale = std::max(mscale, std::abs(m));
    rep.add_residual(fname, "moments_real", max_imag, 1e-8 * mscale);
    Matrix hankel(max_moment + 1, max_moment + 1);
    for (int a = 0; a <= max_moment; ++a)
        for (int b = 0; b <= max_moment; ++b) hankel(a, b) = moments[static_cast<size_t>(a + b)];
    Eigen::SelfAdjointEigenSolver<Matrix> es(hankel);
    rep.add_lower_bound(fname, "hankel_min_eigenvalue", es.eigenvalues().minCoeff(),
                        -1e-6 * mscale);
    result.moments = std::move(moments);
    return result;
}

// ---------------------------------------------------------------------------
// Joint spectrum of the realized Cartan operators on the vacuum.

struct VacuumWeightDistribution {
    std::map<std::vector<int>, double> weights;
    double max_label_deviation = 0.0;  // distance of per-slice labels from the lattice
};

inline VacuumWeightDistribution vacuum_weight_distribution(const SchurmannTriple& t, double tend,
                                                           double delta) {
    const CartanData& ctx = t.ctx();
    const int rank = ctx.rank;
    int n = slice_index(tend, delta, "vacuum_weight_distribution");
    VacuumWeightDistribution out;
    if (n == 0) {
        out.weights[std::vector<int>(static_cast<size_t>(rank), 0)] = 1.0;
        return out;
    }
    // slice matrices of the k_i: self-adjoint, and for a commuting family they
    // can be diagonalized together
    std::vector<Matrix> slices;
    for (int i = 0; i < rank; ++i)
        slices.push_back(slice_operator(t, AlgebraElement::gen_k(ctx, i, 1), delta).mat);
    for (size_t a = 0; a < slices.size(); ++a)
        for (size_t b = a + 1; b < slices.size(); ++b) {
            double comm = (slices[a] * slices[b] - slices[b] * slices[a]).norm();
            if (comm > 1e-8 * std::max(1.0, slices[a].norm() * slices[b].norm()))
                throw std::runtime_error(
                    "vacuum_weight_distribution: slice operators do not commute; clustering "
                    "ambiguity");
        }

    const int sdim = static_cast<int>(slices[0].rows());
    const double logq = std::log(t.q());
    struct Cluster {
        std::vector<int> lambda;
        Matrix basis;
    };
    std::vector<Cluster> clusters{{{}, Matrix::Identity(sdim, sdim)}};
    for (int i = 0; i < rank; ++i) {
        std::vector<Cluster> next;
        for (const auto& cl : clusters) {
            Matrix h = cl.basis.adjoint() * slices[static_cast<size_t>(i)] * cl.basis;
            Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
            // group nearly equal eigenvalues (clustering tolerance 1e-6)
            std::vector<std::pair<double, std::vector<int>>> groups;
            for (int c = 0; c < h.rows(); ++c) {
                double ev = es.eigenvalues()(c);
                if (!(ev > 0.0))
                    throw std::runtime_error(
                        "vacuum_weight_distribution: nonpositive slice eigenvalue");
                if (!groups.empty() &&
                    std::abs(ev - groups.back().first) < 1e-6 * std::max(1.0, std::abs(ev))) {
                    groups.back().second.push_back(c);
                } else {
                    groups.push_back({ev, {c}});
                }
            }
            for (const auto& [ev, cols] : groups) {
                double lam = 2.0 * std::log(ev) / logq;
                int rounded = static_cast<int>(std::lround(lam));
                out.max_label_deviation =
                    std::max(out.max_label_deviation, std::abs(lam - rounded));
                Matrix basis(sdim, static_cast<int>(cols.size()));
                for (size_t c = 0; c < cols.size(); ++c)
                    basis.col(static_cast<int>(c)) = cl.basis * es.eigenvectors().col(cols[c]);
                Cluster nc;
                nc.lambda = cl.lambda;
                nc.lambda.push_back(rounded);
                nc.basis = std::move(basis);
                next.push_back(std::move(nc));
            }
        }
        clusters = std::move(next);
    }

    // per-slice vacuum weights, then the n-fold convolution over the lattice
    std::map<std::vector<int>, double> single;
    for (const auto& cl : clusters) {
        // overlap of the slice vacuum with this joint eigenspace
        double w = cl.basis.row(0).squaredNorm();
        if (w > 0.0) single[cl.lambda] += w;
    }
    std::map<std::vector<int>, double> acc;
    acc[std::vector<int>(static_cast<size_t>(rank), 0)] = 1.0;
    for (int s = 0; s < n; ++s) {
        std::map<std::vector<int>, double> nxt;
        for (const auto& [la, wa] : acc)
            for (const auto& [lb, wb] : single) {
                std::vector<int> sum(la.size());
                for (size_t i = 0; i < la.size(); ++i) sum[i] = la[i] + lb[i];
                nxt[sum] += wa * wb;
            }
        acc = std::move(nxt);
    }
    // drop negligible mass but keep normalization
    for (const auto& [l, w] : acc)
        if (w > 1e-15) out.weights[l] = w;
    return out;
}

}  // namespace qglevy
