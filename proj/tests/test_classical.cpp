#include <catch2/catch_amalgamated.hpp>

#include "qglevy/classical.hpp"
#include "qglevy/fock.hpp"
#include "test_util.hpp"

#include <cmath>
#include <sstream>

using namespace qglevy;

namespace {

const CartanData& a1q4() {
    static CartanData ctx = CartanData::named("A1", 4.0);
    return ctx;
}

LevyLatticeModel poisson_model() { return LevyLatticeModel(1, 4.0, {{1}}, {1.0}); }
LevyLatticeModel skellam_model() { return LevyLatticeModel(1, 4.0, {{1}, {-1}}, {0.5, 0.5}); }

}  // namespace

TEST_CASE("models from triples") {
    Rep rep(a1q4(), {{su2_irrep(1, 4.0), 1}});
    Vector plus(2);
    plus << 1.0, 0.0;
    LevyLatticeModel m1 = model_from_triple(build_triple(rep, plus));
    REQUIRE(m1.lambdas == std::vector<std::vector<int>>{{1}});
    REQUIRE(std::abs(m1.rates[0] - 1.0) < 1e-14);

    Vector mixed(2);
    mixed << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    LevyLatticeModel m2 = model_from_triple(build_triple(rep, mixed));
    REQUIRE(m2.lambdas.size() == 2);
    for (double r : m2.rates) REQUIRE(std::abs(r - 0.5) < 1e-14);
    REQUIRE(std::abs(m2.total_rate() - 1.0) < 1e-14);

    LevyLatticeModel empty = model_from_triple(build_triple(rep, Vector::Zero(2)));
    REQUIRE(empty.lambdas.empty());

    REQUIRE_THROWS_AS(LevyLatticeModel(1, 4.0, {{1}, {1}}, {0.5, 0.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(LevyLatticeModel(1, 4.0, {{1}}, {0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(LevyLatticeModel(1, -1.0, {{1}}, {1.0}), std::invalid_argument);
}

TEST_CASE("simulation is deterministic per (seed, index) and matches the rate") {
    LevyLatticeModel model = skellam_model();
    Trajectory a = simulate(model, 5.0, 42, 7);
    Trajectory b = simulate(model, 5.0, 42, 7);
    REQUIRE(a.times == b.times);
    REQUIRE(a.marks == b.marks);
    Trajectory c = simulate(model, 5.0, 42, 8);
    REQUIRE(a.times != c.times);

    // jump count and mark frequencies at 1e5 trajectories over [0, 1]
    const long n = 100000;
    double jumps = 0.0, plus_marks = 0.0, total_marks = 0.0;
    for (long run = 0; run < n; ++run) {
        Trajectory tr = simulate(model, 1.0, 2024, static_cast<uint64_t>(run));
        jumps += static_cast<double>(tr.times.size());
        for (int mk : tr.marks) {
            total_marks += 1.0;
            if (mk == 0) plus_marks += 1.0;
        }
    }
    double mean = jumps / n;
    double stderr_mean = std::sqrt(1.0 / static_cast<double>(n));  // Var(Poisson(1)) = 1
    REQUIRE(std::abs(mean - 1.0) < 4.0 * stderr_mean);
    double freq = plus_marks / total_marks;
    REQUIRE(std::abs(freq - 0.5) < 4.0 * 0.5 / std::sqrt(total_marks));

    REQUIRE(simulate(LevyLatticeModel(), 1.0, 1).times.empty());  // empty model
}

TEST_CASE("k_hat values") {
    LevyLatticeModel model = poisson_model();
    Trajectory traj;
    traj.t_max = 2.0;
    traj.times = {0.5};
    traj.marks = {0};
    REQUIRE(k_hat(model, traj, 0.6, 1.0) == std::vector<double>{1.0});  // no jumps in window
    REQUIRE(k_hat(model, traj, 0.0, 1.0) == std::vector<double>{2.0});  // q^{1/2} = 2
    REQUIRE(k_hat(model, traj, 0.7, 0.7) == std::vector<double>{1.0});  // s = t
    REQUIRE_THROWS_AS(k_hat(model, traj, 0.0, 3.0), std::invalid_argument);
}

TEST_CASE("exact moments") {
    LevyLatticeModel model = poisson_model();
    // single interval vs the cartan closed form
    for (int mu = -2; mu <= 2; ++mu)
        REQUIRE(testutil::close(exact_moment(model, {{0.3, 1.1, {mu}}}),
                                phi_cartan_exact(model, {mu}, 0.8), 1e-12));
    // mu = 0 contributes a unit factor
    REQUIRE(testutil::close(exact_moment(model, {{0.0, 1.0, {0}}, {1.0, 2.0, {1}}}),
                            std::exp(1.0), 1e-12));
    // ordered disjoint: (0,1) mu=1 and (1,2) mu=2 give e * e^3
    REQUIRE(testutil::close(exact_moment(model, {{0.0, 1.0, {1}}, {1.0, 2.0, {2}}}),
                            std::exp(4.0), 1e-10));
    // stationarity: only lengths matter
    REQUIRE(testutil::close(exact_moment(model, {{0.7, 1.7, {1}}, {1.7, 2.7, {2}}}),
                            exact_moment(model, {{0.0, 1.0, {1}}, {1.0, 2.0, {2}}}), 1e-12));
    // overlapping split: [0,2) mu=1 with [1,3) mu=1 -> increments 1, 2, 1
    REQUIRE_THROWS_AS(exact_moment(model, {{0.0, 2.0, {1}}, {1.0, 3.0, {1}}}),
                      std::invalid_argument);
    double split = exact_moment(model, {{0.0, 2.0, {1}}, {1.0, 3.0, {1}}}, true);
    REQUIRE(testutil::close(split, std::exp(1.0 + 3.0 + 1.0), 1e-10));
}

TEST_CASE("exact distribution: poisson and skellam") {
    LevyLatticeModel model = poisson_model();
    LatticeDistribution d = exact_distribution(model, 1.0);
    REQUIRE(d.captured_mass >= 1.0 - 1e-9);
    REQUIRE(!d.box_warning);
    for (int m = 0; m <= 5; ++m) {
        double expect = std::exp(-1.0) / std::tgamma(m + 1.0);
        REQUIRE(std::abs(d.prob.at({m}) - expect) < 1e-12);
    }

    // Skellam at zero: P(N_t = 0) = e^{-t} sum_m (t/2)^{2m} / (m!)^2
    LevyLatticeModel sk = skellam_model();
    for (double t : {0.5, 1.0, 2.0}) {
        LatticeDistribution ds = exact_distribution(sk, t);
        double oracle = 0.0;
        for (int m = 0; m < 60; ++m)
            oracle += std::pow(t / 2.0, 2.0 * m) / std::pow(std::tgamma(m + 1.0), 2.0);
        oracle *= std::exp(-t);
        REQUIRE(std::abs(ds.prob.at({0}) - oracle) < 1e-12);
    }

    LatticeDistribution at0 = exact_distribution(model, 0.0);
    REQUIRE(at0.prob.size() == 1);
    REQUIRE(at0.prob.at({0}) == 1.0);

    LatticeDistribution cramped = exact_distribution(model, 4.0, 2);
    REQUIRE(cramped.box_warning);
    REQUIRE(cramped.captured_mass < 1.0 - 1e-9);
}

TEST_CASE("monte carlo agrees with the closed forms") {
    LevyLatticeModel model = poisson_model();
    McComparison cmp =
        mc_compare(model, {{0.0, 1.0, {1}}}, 20000, 99, 1.0, 0.02);
    REQUIRE(cmp.report.all_pass());
    REQUIRE(std::abs(cmp.exact - std::exp(1.0)) < 1e-12);

    // reproducibility: identical numbers for the same seed
    McComparison again = mc_compare(model, {{0.0, 1.0, {1}}}, 20000, 99, 1.0, 0.02);
    REQUIRE(cmp.mc_mean == again.mc_mean);
    REQUIRE(cmp.tv_distance == again.tv_distance);

    // two-interval joint moment
    McComparison joint = mc_compare(skellam_model(), {{0.0, 0.5, {1}}, {0.5, 1.0, {-2}}}, 20000,
                                    123, 1.0, 0.02);
    REQUIRE(joint.report.all_pass());

    REQUIRE_THROWS_AS(mc_compare(model, {{0.0, 1.0, {1}}}, 10, 1, 1.0), std::invalid_argument);
}

TEST_CASE("increment law is stationary") {
    LevyLatticeModel model = skellam_model();
    const long n = 20000;
    std::map<std::vector<int>, double> hist;
    for (long run = 0; run < n; ++run) {
        Trajectory tr = simulate(model, 2.0, 7, static_cast<uint64_t>(run));
        std::vector<long> inc = increment(model, tr, 0.5, 1.5);
        hist[std::vector<int>(inc.begin(), inc.end())] += 1.0 / static_cast<double>(n);
    }
    LatticeDistribution law = exact_distribution(model, 1.0);
    REQUIRE(total_variation(hist, law.prob) < 0.02);
}

TEST_CASE("corollary bridge: vacuum weights match the lattice law") {
    Rep rep(a1q4(), {{su2_irrep(1, 4.0), 1}});
    Vector plus(2);
    plus << 1.0, 0.0;
    SchurmannTriple t = build_triple(rep, plus);
    LevyLatticeModel model = model_from_triple(t);

    VacuumWeightDistribution vw = vacuum_weight_distribution(t, 1.0, 1.0 / 32.0);
    LatticeDistribution law = exact_distribution(model, 1.0);
    for (const auto& [lam, p] : law.prob) {
        if (p < 0.05) continue;
        double got = vw.weights.count(lam) ? vw.weights.at(lam) : 0.0;
        REQUIRE(std::abs(got - p) < 0.10 * p);
    }
}

TEST_CASE("trajectory export format") {
    LevyLatticeModel model = skellam_model();
    Trajectory traj;
    traj.t_max = 1.0;
    traj.times = {0.25, 0.75};
    traj.marks = {0, 1};
    std::ostringstream os;
    write_trajectory(os, model, traj);
    REQUIRE(os.str() == "t_jump,lambda_1\n0.25,1\n0.75,-1\n");
}
