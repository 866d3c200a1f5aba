// Command implementations behind the CLI: building the model objects from a
// configuration and running the check / moments / simulate / fock / compare
// pipelines.  Every command writes its report files under an output directory
// and returns a process exit code: 0 all checks passed, 1 named check
// failures, while configuration errors throw ConfigError (exit 2 in the CLI).

#pragma once

#include "qglevy/classical.hpp"
#include "qglevy/config.hpp"
#include "qglevy/fock.hpp"
#include "qglevy/verification.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace qglevy {

struct ModelBundle {
    std::unique_ptr<CartanData> ctx;  // stable address: elements and reps point at it
    std::optional<Rep> rep;
    std::optional<SchurmannTriple> triple;
    std::optional<LevyLatticeModel> model;
};

inline ModelBundle build_bundle(const ModelConfig& cfg) {
    cfg.validate();
    ModelBundle b;
    b.ctx = std::make_unique<CartanData>(cfg.cartan());
    if (cfg.has_representation()) {
        if (!cfg.rep_file.empty()) {
            b.rep = load_rep_file(*b.ctx, cfg.rep_file);
        } else {
            std::vector<std::pair<Irrep, int>> summands;
            for (const auto& [two_j, mult] : cfg.spins)
                summands.emplace_back(su2_irrep(two_j, cfg.q), mult);
            b.rep = Rep(*b.ctx, std::move(summands));
        }
        Vector omega(b.rep->dim());
        if (!cfg.omega_full.empty()) {
            if (static_cast<int>(cfg.omega_full.size()) != b.rep->dim())
                throw ConfigError("omega has " + std::to_string(cfg.omega_full.size()) +
                                  " entries; representation dimension is " +
                                  std::to_string(b.rep->dim()));
            for (int i = 0; i < b.rep->dim(); ++i) omega(i) = cfg.omega_full[static_cast<size_t>(i)];
        } else {
            // per-block coefficient lists
            std::vector<int> block_dims;
            for (const auto& [irr, mult] : b.rep->summands())
                for (int c = 0; c < mult; ++c) block_dims.push_back(irr.dim);
            if (cfg.omega_blocks.size() != block_dims.size())
                throw ConfigError("omega blocks: expected " + std::to_string(block_dims.size()) +
                                  " blocks, got " + std::to_string(cfg.omega_blocks.size()));
            int at = 0;
            for (size_t blk = 0; blk < block_dims.size(); ++blk) {
                if (static_cast<int>(cfg.omega_blocks[blk].size()) != block_dims[blk])
                    throw ConfigError("omega block " + std::to_string(blk + 1) +
                                      " has the wrong length");
                for (Complex z : cfg.omega_blocks[blk]) omega(at++) = z;
            }
        }
        b.triple = build_triple(*b.rep, omega);
        b.model = model_from_triple(*b.triple);
    } else {
        b.model = LevyLatticeModel(b.ctx->rank, cfg.q, cfg.lambdas, cfg.rates);
    }
    return b;
}

namespace detail {

inline std::ofstream open_output(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / name);
    if (!os) throw std::runtime_error("cannot open output file " + name + " under " + out_dir);
    return os;
}

inline double snap_to_grid(double t, double dt) { return std::lround(t / dt) * dt; }

// Sampling noise of the empirical histogram scales like 1/sqrt(n); 0.01 is
// the design bound at 1e5 samples.
inline double tv_tolerance(long n_samples) {
    return std::max(0.01, 2.0 / std::sqrt(static_cast<double>(n_samples)));
}

}  // namespace detail

// Structural checks: relations, Hopf axioms, ideal identities, triple
// verification, cocycle reconstruction and the commuting families.
inline int cmd_check(const ModelConfig& cfg, const std::string& out_dir) {
    Report all;
    int exit_code = 0;
    try {
        ModelBundle b = build_bundle(cfg);
        const CartanData& ctx = *b.ctx;
        all.merge(relation_identities_report(ctx));
        all.merge(hopf_axioms_report(ctx, ctx.rank == 1 ? 3 : 2));
        all.merge(ideal_identities(ctx));
        if (b.rep) {
            // named relation residuals, re-verified at the strict tolerance
            for (const auto& [irr, mult] : b.rep->summands()) {
                auto bad = verify_irrep(ctx, irr, 1e-10);
                all.add("representation", "relations(" + irr.label + ")",
                        bad.empty() ? 0.0 : bad.front().residual, 1e-10, bad.empty());
            }
            if (ctx.rank >= 2) {
                double worst = 0.0;
                for (int i = 0; i < ctx.rank; ++i)
                    for (int j = 0; j < ctx.rank; ++j) {
                        if (i == j) continue;
                        for (bool e_side : {true, false})
                            worst = std::max(
                                worst, b.rep->evaluate(serre_element(ctx, i, j, e_side)).norm());
                    }
                all.add_residual("representation", "serre_elements", worst, 1e-10);
            }
        }
        if (b.triple) {
            for (const auto& w : b.triple->warnings())
                std::cerr << "warning: " << w << "\n";
            all.merge(verify_triple(*b.triple, 3, 40, static_cast<unsigned>(cfg.seed)));
            if (ctx.rank == 1 && !b.rep->has_trivial_summand()) {
                CoboundaryResult cb = coboundary_reconstruct(*b.triple);
                all.merge(cb.report);
            }
            all.merge(commuting_family_report(*b.triple, CommutingFamily::cartan,
                                              detail::snap_to_grid(std::min(cfg.t_max, 1.0), cfg.dt),
                                              cfg.dt, 2)
                          .report);
            if (ctx.rank == 1) {
                double tm = detail::snap_to_grid(std::min(cfg.t_max, 1.0), cfg.dt);
                all.merge(
                    commuting_family_report(*b.triple, CommutingFamily::casimir, tm, cfg.dt, 2)
                        .report);
                all.merge(
                    commuting_family_report(*b.triple, CommutingFamily::z_element, tm, cfg.dt, 2)
                        .report);
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& err) {
        all.add("check", std::string("aborted: ") + err.what(), 1.0, 0.0, false);
        exit_code = 1;
    }
    auto os = detail::open_output(out_dir, "check_report.csv");
    all.write_csv(os);
    if (!all.all_pass()) {
        for (const auto& name : all.failures()) std::cerr << "failed: " << name << "\n";
        exit_code = 1;
    }
    return exit_code;
}

// Moment table: rows (mu, t) with exact, series, fock and Monte Carlo columns
// for every enabled engine.
inline int cmd_moments(const ModelConfig& cfg, const std::string& out_dir) {
    ModelBundle b = build_bundle(cfg);
    const LevyLatticeModel& model = *b.model;
    bool with_series = b.triple.has_value();
    bool with_fock = b.triple.has_value();
    for (double t : cfg.t_list) {
        double r = t / cfg.dt;
        if (std::abs(r - std::lround(r)) > 1e-9) with_fock = false;
    }
    bool with_mc = cfg.samples >= 1000 && !model.lambdas.empty();

    std::optional<ConvolutionEngine> engine;
    if (with_series) engine.emplace(ConvolutionEngine::for_triple(*b.triple));

    // one set of trajectories shared by all rows
    double horizon = 0.0;
    for (double t : cfg.t_list) horizon = std::max(horizon, t);
    size_t rows = cfg.mu_list.size() * cfg.t_list.size();
    std::vector<std::vector<double>> samples(rows);
    if (with_mc) {
        for (auto& v : samples) v.reserve(static_cast<size_t>(cfg.samples));
        const double logq = std::log(model.q);
        for (long run = 0; run < cfg.samples; ++run) {
            Trajectory traj = simulate(model, horizon, cfg.seed, static_cast<uint64_t>(run));
            size_t row = 0;
            for (const auto& mu : cfg.mu_list) {
                for (double t : cfg.t_list) {
                    std::vector<long> n = increment(model, traj, 0.0, t);
                    long pairing = 0;
                    for (int i = 0; i < model.rank; ++i)
                        pairing += static_cast<long>(mu[static_cast<size_t>(i)]) *
                                   n[static_cast<size_t>(i)];
                    samples[row++].push_back(std::exp(0.5 * pairing * logq));
                }
            }
        }
    }

    auto os = detail::open_output(out_dir, "moments.csv");
    os << "mu,t,exact";
    if (with_series) os << ",series";
    if (with_fock) os << ",fock";
    if (with_mc) os << ",mc_mean,mc_stderr";
    os << "\n";
    bool ok = true;
    size_t row = 0;
    for (const auto& mu : cfg.mu_list) {
        std::string mu_str = "[";
        for (size_t i = 0; i < mu.size(); ++i)
            mu_str += (i ? " " : "") + std::to_string(mu[static_cast<size_t>(i)]);
        mu_str += "]";
        for (double t : cfg.t_list) {
            double exact = phi_cartan_exact(model, mu, t);
            os << mu_str << "," << format_number(t) << "," << format_number(exact);
            if (with_series) {
                AlgebraElement km = AlgebraElement::cartan_monomial(*b.ctx, mu);
                ConvExpResult series = engine->conv_exp(t, km, cfg.tol, true);
                os << "," << format_number(series.value.real());
                ok &= std::abs(series.value.real() - exact) <=
                      std::max(series.bound * 10.0, 1e-6 * std::max(1.0, exact));
            }
            if (with_fock) {
                AlgebraElement km = AlgebraElement::cartan_monomial(*b.ctx, mu);
                Complex fock = t == 0.0 ? Complex{1.0, 0.0}
                                        : vacuum_moment(*b.triple, {{km, 0.0, t}}, cfg.dt);
                os << "," << format_number(fock.real());
            }
            if (with_mc) {
                auto& vals = samples[row];
                double mean = pairwise_sum(vals, 0, vals.size()) / vals.size();
                double var = 0.0;
                for (double v : vals) var += (v - mean) * (v - mean);
                var /= static_cast<double>(vals.size() - 1);
                double se = std::sqrt(var / static_cast<double>(vals.size()));
                os << "," << format_number(mean) << "," << format_number(se);
                ok &= std::abs(mean - exact) <= 4.0 * se + 1e-12;
            }
            ++row;
        }
    }
    os << "status=" << (ok ? "pass" : "fail") << "\n";
    return ok ? 0 : 1;
}

// Trajectory files plus the Monte Carlo comparison report.
inline int cmd_simulate(const ModelConfig& cfg, const std::string& out_dir) {
    ModelBundle b = build_bundle(cfg);
    const LevyLatticeModel& model = *b.model;
    if (model.lambdas.empty()) std::cerr << "warning: empty jump model (omega = 0?)\n";
    for (int path = 0; path < cfg.n_paths; ++path) {
        Trajectory traj =
            model.lambdas.empty()
                ? Trajectory{cfg.t_max, cfg.seed, static_cast<uint64_t>(path), {}, {}}
                : simulate(model, cfg.t_max, cfg.seed, static_cast<uint64_t>(path));
        auto os = detail::open_output(out_dir, "trajectory_" + std::to_string(path) + ".csv");
        if (model.lambdas.empty()) {
            os << "t_jump";
            for (int i = 1; i <= model.rank; ++i) os << ",lambda_" << i;
            os << "\n";
        } else {
            write_trajectory(os, model, traj);
        }
        os << "status=pass\n";
    }
    Report rep;
    if (!model.lambdas.empty() && cfg.samples >= 1000) {
        std::vector<int> mu1 = cfg.mu_list.front();
        std::vector<int> mu2 = cfg.mu_list.size() > 1 ? cfg.mu_list[1] : mu1;
        double mid = 0.5 * cfg.t_max;
        McComparison cmp = mc_compare(model, {{0.0, mid, mu1}, {mid, cfg.t_max, mu2}},
                                      cfg.samples, cfg.seed, cfg.t_max,
                                      detail::tv_tolerance(cfg.samples));
        rep = cmp.report;
        rep.add("mc_compare", "mc_mean", cmp.mc_mean, 0.0, true);
        rep.add("mc_compare", "mc_stderr", cmp.mc_stderr, 0.0, true);
        rep.add("mc_compare", "exact", cmp.exact, 0.0, true);
    } else {
        rep.add("mc_compare", "skipped_empty_model_or_few_samples", 0.0, 0.0, true);
    }
    auto os = detail::open_output(out_dir, "mc_report.csv");
    rep.write_csv(os);
    return rep.all_pass() ? 0 : 1;
}

// Slice-discretization study: refinement of vacuum moments toward the
// convolution exponential, and the exact coherent-vector cross-check.
inline int cmd_fock(const ModelConfig& cfg, const std::string& out_dir) {
    ModelBundle b = build_bundle(cfg);
    if (!b.triple) throw ConfigError("the fock command needs a representation + omega model");
    const SchurmannTriple& triple = *b.triple;
    const CartanData& ctx = *b.ctx;
    double horizon = detail::snap_to_grid(std::min(cfg.t_max, 1.0), cfg.dt);
    if (horizon <= 0.0) horizon = cfg.dt;

    std::vector<std::pair<std::string, AlgebraElement>> subjects;
    for (int i = 0; i < ctx.rank; ++i)
        subjects.push_back({"k_" + std::to_string(i + 1), AlgebraElement::gen_k(ctx, i, 1)});
    if (ctx.rank == 1) {
        subjects.push_back({"k_1^2", parse_element("k_1^2", ctx)});
        subjects.push_back({"e_1*f_1", parse_element("e_1*f_1", ctx)});
    }

    ConvolutionEngine engine = ConvolutionEngine::for_triple(triple);
    Report rep;
    auto os = detail::open_output(out_dir, "fock_report.csv");
    for (const auto& [name, u] : subjects) {
        double target = engine.conv_exp(horizon, u, cfg.tol, true).value.real();
        double prev_err = 0.0;
        for (int stage = 0; stage < 3; ++stage) {
            double delta = cfg.dt / static_cast<double>(1 << stage);
            double got = vacuum_moment(triple, {{u, 0.0, horizon}}, delta).real();
            double err = std::abs(got - target);
            rep.add("fock_refinement", name + "_delta=" + format_number(delta), err, 0.0, true);
            if (stage > 0) {
                double ratio = prev_err > 0.0 && err > 0.0 ? prev_err / err : 2.0;
                rep.add("fock_refinement", name + "_halving_ratio_" + std::to_string(stage),
                        ratio, 0.0, ratio > 1.6 && ratio < 2.4);
            }
            prev_err = err;
        }
    }
    // exact coherent matrix elements at f = g = 0 against exp(t psi)
    StepFunction zero = StepFunction::zero(triple.rho().dim());
    double worst = 0.0;
    for (int i = 0; i < ctx.rank; ++i) {
        for (int sign : {1, -1}) {
            std::vector<int> lam(static_cast<size_t>(ctx.rank), 0);
            lam[static_cast<size_t>(i)] = sign;
            AlgebraElement kl = AlgebraElement::cartan_monomial(ctx, lam);
            Complex closed = group_like_coherent(triple, lam, 0.0, horizon, zero, zero);
            Complex expect = std::exp(horizon * triple.psi(kl));
            worst = std::max(worst, std::abs(closed - expect) / std::max(1.0, std::abs(expect)));
        }
    }
    rep.add_residual("fock_coherent", "group_like_vs_exp", worst, 1e-12);

    double star = 0.0;
    for (const auto& [name, u] : subjects) {
        Matrix a = slice_operator(triple, involute(u), cfg.dt).mat;
        Matrix bb = slice_operator(triple, u, cfg.dt).mat.adjoint();
        star = std::max(star, (a - bb).norm() / std::max(1.0, bb.norm()));
    }
    rep.add_residual("fock_slice", "star_compatibility", star, 1e-12);
    rep.write_csv(os);
    return rep.all_pass() ? 0 : 1;
}

// Corollary bridge: the joint spectrum of the realized Cartan operators on
// the vacuum against the exact lattice distribution and the Monte Carlo
// histogram.
inline int cmd_compare(const ModelConfig& cfg, const std::string& out_dir) {
    ModelBundle b = build_bundle(cfg);
    if (!b.triple) throw ConfigError("the compare command needs a representation + omega model");
    const SchurmannTriple& triple = *b.triple;
    double horizon = detail::snap_to_grid(std::min(cfg.t_max, 1.0), cfg.dt);
    if (horizon <= 0.0) horizon = cfg.dt;

    VacuumWeightDistribution vw = vacuum_weight_distribution(triple, horizon, cfg.dt);
    LatticeDistribution law = exact_distribution(*b.model, horizon);

    Report rep;
    auto lam_str = [](const std::vector<int>& lam) {
        std::string s = "[";
        for (size_t i = 0; i < lam.size(); ++i) s += (i ? " " : "") + std::to_string(lam[i]);
        return s + "]";
    };
    for (const auto& [lam, p] : law.prob) {
        double got = vw.weights.count(lam) ? vw.weights.at(lam) : 0.0;
        rep.add("corollary_bridge", "exact" + lam_str(lam), p, 0.0, true);
        rep.add("corollary_bridge", "vacuum_weight" + lam_str(lam), got, 0.0, true);
        if (p >= 0.01)
            rep.add_residual("corollary_bridge", "rel_err" + lam_str(lam), std::abs(got - p) / p,
                             0.10);
    }
    rep.add("corollary_bridge", "label_deviation", vw.max_label_deviation, 0.5,
            vw.max_label_deviation < 0.5);
    if (law.box_warning)
        rep.add("corollary_bridge", "captured_mass", law.captured_mass, 1.0 - 1e-9, false);

    if (cfg.samples >= 1000 && !b.model->lambdas.empty()) {
        McComparison cmp = mc_compare(*b.model, {{0.0, horizon, cfg.mu_list.front()}},
                                      cfg.samples, cfg.seed, horizon,
                                      detail::tv_tolerance(cfg.samples));
        rep.add_residual("corollary_bridge", "mc_tv_distance", cmp.tv_distance,
                         detail::tv_tolerance(cfg.samples));
    }

    auto os = detail::open_output(out_dir, "compare_report.csv");
    rep.write_csv(os);
    return rep.all_pass() ? 0 : 1;
}

inline int run_command(const std::string& command, const ModelConfig& cfg,
                       const std::string& out_dir) {
    if (command == "check") return cmd_check(cfg, out_dir);
    if (command == "moments") return cmd_moments(cfg, out_dir);
    if (command == "simulate") return cmd_simulate(cfg, out_dir);
    if (command == "fock") return cmd_fock(cfg, out_dir);
    if (command == "compare") return cmd_compare(cfg, out_dir);
    throw ConfigError("unknown command: " + command);
}

}  // namespace qglevy
