// The classical compound-Poisson lattice process N_t = sum_lambda lambda
// N^(lambda)_{c_lambda t}: exact moments and distributions from the
// independent-Poisson superposition, trajectory simulation through the
// waiting-time construction, and the Monte Carlo comparison harness.
//
// Both constructions of N_t are present on purpose: the superposition powers
// exact_distribution, the exponential-waiting-time sampler powers simulate,
// and their agreement is itself a test.

#pragma once

#include "qglevy/lattice_model.hpp"
#include "qglevy/report.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace qglevy {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Trajectory {
    double t_max = 0.0;
    uint64_t seed = 0;
    uint64_t index = 0;
    std::vector<double> times;  // strictly increasing jump times in (0, t_max]
    std::vector<int> marks;     // index into model.lambdas
};

// Waiting-time construction: i.i.d. exponential(c) gaps, i.i.d. marks with
// P(mark = lambda) = c_lambda / c, independent of the gaps.  Streams are keyed
// by (seed, index) so parallel batches reproduce independently of scheduling.
inline Trajectory simulate(const LevyLatticeModel& model, double t_max, uint64_t seed,
                           uint64_t index = 0) {
    if (!(t_max > 0.0)) throw std::invalid_argument("simulate: t_max must be positive");
    Trajectory traj;
    traj.t_max = t_max;
    traj.seed = seed;
    traj.index = index;
    const double c = model.total_rate();
    if (model.lambdas.empty() || c <= 0.0) return traj;

    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index + 0x51ab42e0d1c3f7a9ULL)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> cdf(model.rates.size());
    double acc = 0.0;
    for (size_t a = 0; a < model.rates.size(); ++a) {
        acc += model.rates[a] / c;
        cdf[a] = acc;
    }
    double t = 0.0;
    for (;;) {
        double u = unif(rng);
        t += -std::log1p(-u) / c;
        if (t > t_max) break;
        double m = unif(rng);
        size_t mark = 0;
        while (mark + 1 < cdf.size() && m > cdf[mark]) ++mark;
        traj.times.push_back(t);
        traj.marks.push_back(static_cast<int>(mark));
    }
    return traj;
}

// N(t) - N(s) componentwise, counting jumps in (s, t].
inline std::vector<long> increment(const LevyLatticeModel& model, const Trajectory& traj,
                                   double s, double t) {
    if (s < 0.0 || t < s || t > traj.t_max + 1e-12)
        throw std::invalid_argument("increment: times outside the simulated horizon");
    std::vector<long> n(static_cast<size_t>(model.rank), 0);
    for (size_t j = 0; j < traj.times.size(); ++j) {
        if (traj.times[j] <= s || traj.times[j] > t) continue;
        const auto& lam = model.lambdas[static_cast<size_t>(traj.marks[j])];
        for (int i = 0; i < model.rank; ++i) n[static_cast<size_t>(i)] += lam[static_cast<size_t>(i)];
    }
    return n;
}

// khat_i(s,t) = q^{(N_i(t) - N_i(s))/2}
inline std::vector<double> k_hat(const LevyLatticeModel& model, const Trajectory& traj, double s,
                                 double t) {
    std::vector<long> n = increment(model, traj, s, t);
    std::vector<double> out(n.size());
    for (size_t i = 0; i < n.size(); ++i)
        out[i] = std::pow(model.q, 0.5 * static_cast<double>(n[i]));
    return out;
}

struct MomentFactor {
    double s = 0.0;
    double t = 0.0;
    std::vector<int> mu;
};

// E[prod_l khat^{mu_l}(s_l, t_l)].  Ordered disjoint factors multiply
// directly; overlapping input is split into elementary increments (allowed
// only with split_overlaps, since it relies on independence + stationarity).
inline double exact_moment(const LevyLatticeModel& model, const std::vector<MomentFactor>& factors,
                           bool split_overlaps = false) {
    for (const auto& f : factors) {
        if (f.s < 0.0 || f.t < f.s) throw std::invalid_argument("exact_moment: bad interval");
        if (static_cast<int>(f.mu.size()) != model.rank)
            throw std::invalid_argument("exact_moment: exponent dimension mismatch");
    }
    bool ordered = true;
    for (size_t l = 0; l + 1 < factors.size(); ++l) ordered &= factors[l].t <= factors[l + 1].s;
    if (ordered) {
        double acc = 1.0;
        for (const auto& f : factors) acc *= std::exp((f.t - f.s) * model.psi_cartan(f.mu));
        return acc;
    }
    if (!split_overlaps)
        throw std::invalid_argument(
            "exact_moment: overlapping intervals need split_overlaps = true");
    std::vector<double> cuts;
    for (const auto& f : factors) {
        cuts.push_back(f.s);
        cuts.push_back(f.t);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 1.0;
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
        double lo = cuts[p], hi = cuts[p + 1];
        double mid = 0.5 * (lo + hi);
        std::vector<int> mu(static_cast<size_t>(model.rank), 0);
        for (const auto& f : factors)
            if (f.s <= mid && mid < f.t)
                for (int i = 0; i < model.rank; ++i) mu[static_cast<size_t>(i)] += f.mu[static_cast<size_t>(i)];
        acc *= std::exp((hi - lo) * model.psi_cartan(mu));
    }
    return acc;
}

struct LatticeDistribution {
    std::map<std::vector<int>, double> prob;
    double captured_mass = 1.0;
    bool box_warning = false;
};

// Distribution of N_t by convolving the independent Poisson laws over a
// lattice box.  The default box radius per axis is
// ceil(c t + 10 sqrt(c t)) * max |lambda_i|.
inline LatticeDistribution exact_distribution(const LevyLatticeModel& model, double t,
                                              std::optional<long> box_radius = std::nullopt) {
    if (t < 0.0) throw std::invalid_argument("exact_distribution: negative time");
    LatticeDistribution out;
    std::vector<int> origin(static_cast<size_t>(model.rank), 0);
    if (t == 0.0 || model.lambdas.empty()) {
        out.prob[origin] = 1.0;
        return out;
    }
    const double c = model.total_rate();
    long radius;
    if (box_radius) {
        radius = *box_radius;
    } else {
        long max_step = 1;
        for (const auto& lam : model.lambdas)
            for (int x : lam) max_step = std::max(max_step, static_cast<long>(std::abs(x)));
        radius = static_cast<long>(std::ceil(c * t + 10.0 * std::sqrt(c * t))) * max_step;
    }
    auto inside = [&](const std::vector<int>& v) {
        for (int x : v)
            if (std::abs(x) > radius) return false;
        return true;
    };
    out.prob[origin] = 1.0;
    for (size_t a = 0; a < model.lambdas.size(); ++a) {
        const double mean = model.rates[a] * t;
        // Poisson pmf, truncated once the tail is below 1e-13
        std::vector<double> pmf;
        double p = std::exp(-mean), cum = p;
        pmf.push_back(p);
        for (long m = 1; cum < 1.0 - 1e-13 && m < 100000; ++m) {
            p *= mean / static_cast<double>(m);
            pmf.push_back(p);
            cum += p;
        }
        std::map<std::vector<int>, double> next;
        for (const auto& [point, w] : out.prob) {
            for (size_t m = 0; m < pmf.size(); ++m) {
                std::vector<int> shifted = point;
                for (int i = 0; i < model.rank; ++i)
                    shifted[static_cast<size_t>(i)] +=
                        static_cast<int>(m) * model.lambdas[a][static_cast<size_t>(i)];
                if (!inside(shifted)) continue;
                next[shifted] += w * pmf[m];
            }
        }
        out.prob = std::move(next);
    }
    double mass = 0.0;
    for (const auto& [point, w] : out.prob) mass += w;
    out.captured_mass = mass;
    out.box_warning = mass < 1.0 - 1e-9;
    return out;
}

inline double pairwise_sum(std::vector<double>& xs, size_t lo, size_t hi) {
    if (hi - lo <= 8) {
        double acc = 0.0;
        for (size_t i = lo; i < hi; ++i) acc += xs[i];
        return acc;
    }
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

inline double total_variation(const std::map<std::vector<int>, double>& a,
                              const std::map<std::vector<int>, double>& b) {
    double tv = 0.0;
    for (const auto& [k, va] : a) {
        auto it = b.find(k);
        tv += std::abs(va - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [k, vb] : b)
        if (a.find(k) == a.end()) tv += vb;
    return 0.5 * tv;
}

struct McComparison {
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double exact = 0.0;
    double tv_distance = 0.0;
    Report report;
};

// Monte Carlo check of the joint moment and of the time-t_dist marginal.
// Pass criteria: |mean - exact| <= 4 stderr and TV <= tv_tol.
inline McComparison mc_compare(const LevyLatticeModel& model,
                               const std::vector<MomentFactor>& spec, long n_samples,
                               uint64_t seed, double t_dist, double tv_tol = 0.01) {
    if (n_samples < 1000) throw std::invalid_argument("mc_compare: need at least 1e3 samples");
    double horizon = t_dist;
    for (const auto& f : spec) horizon = std::max(horizon, f.t);
    if (!(horizon > 0.0)) throw std::invalid_argument("mc_compare: empty horizon");

    std::vector<double> values(static_cast<size_t>(n_samples));
    std::map<std::vector<int>, double> histogram;
    const double logq = std::log(model.q);
    for (long run = 0; run < n_samples; ++run) {
        Trajectory traj = simulate(model, horizon, seed, static_cast<uint64_t>(run));
        double expo = 0.0;
        for (const auto& f : spec) {
            std::vector<long> n = increment(model, traj, f.s, f.t);
            long pairing = 0;
            for (int i = 0; i < model.rank; ++i)
                pairing += static_cast<long>(f.mu[static_cast<size_t>(i)]) * n[static_cast<size_t>(i)];
            expo += 0.5 * static_cast<double>(pairing);
        }
        values[static_cast<size_t>(run)] = std::exp(expo * logq);
        std::vector<long> nt = increment(model, traj, 0.0, t_dist);
        std::vector<int> key(nt.begin(), nt.end());
        histogram[key] += 1.0;
    }
    McComparison out;
    out.mc_mean = pairwise_sum(values, 0, values.size()) / static_cast<double>(n_samples);
    double var = 0.0;
    for (double v : values) var += (v - out.mc_mean) * (v - out.mc_mean);
    var /= static_cast<double>(n_samples - 1);
    out.mc_stderr = std::sqrt(var / static_cast<double>(n_samples));
    out.exact = exact_moment(model, spec, true);

    for (auto& [k, w] : histogram) w /= static_cast<double>(n_samples);
    LatticeDistribution dist = exact_distribution(model, t_dist);
    out.tv_distance = total_variation(histogram, dist.prob);

    double diff = std::abs(out.mc_mean - out.exact);
    out.report.add_residual("mc_compare", "moment_vs_exact", diff,
                            4.0 * std::max(out.mc_stderr, 1e-15));
    out.report.add_residual("mc_compare", "tv_distance", out.tv_distance, tv_tol);
    if (dist.box_warning)
        out.report.add("mc_compare", "distribution_mass", dist.captured_mass, 1.0 - 1e-9, false);
    return out;
}

// Trajectory export: `t_jump,lambda_1,...,lambda_n`, one row per jump.
inline void write_trajectory(std::ostream& os, const LevyLatticeModel& model,
                             const Trajectory& traj) {
    os << "t_jump";
    for (int i = 1; i <= model.rank; ++i) os << ",lambda_" << i;
    os << "\n";
    for (size_t j = 0; j < traj.times.size(); ++j) {
        os << format_number(traj.times[j]);
        const auto& lam = model.lambdas[static_cast<size_t>(traj.marks[j])];
        for (int x : lam) os << "," << x;
        os << "\n";
    }
}

}  // namespace qglevy
