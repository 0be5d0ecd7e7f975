// Command-line front end over the wfrec core library.
//
//   wfrec plan                  write plan.json (both certified parameter sets)
//   wfrec simulate              run a path batch, write paths.csv
//   wfrec verify [which]        run verification checks, write report files
//
// Common flags: --config <path>, --seed <u64>, --out <dir>,
// --format json|csv|both, --threads <n>. The thread count affects wall time
// only; outputs are byte-identical for every value.
//
// Exit codes: 0 all verdicts Pass; 1 any Fail; 2 precondition violated
// (endpoint-classification condition or semantic parameter error);
// 3 Inconclusive without any Fail; 64 usage or config parse error;
// 70 unexpected internal error; 74 filesystem error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "wfrec/config.hpp"
#include "wfrec/drift_scan.hpp"
#include "wfrec/errors.hpp"
#include "wfrec/estimators.hpp"
#include "wfrec/model.hpp"
#include "wfrec/planner.hpp"
#include "wfrec/report.hpp"
#include "wfrec/sde.hpp"

namespace {

using namespace wfrec;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;
constexpr int kExitIo = 74;

// 99% two-sided normal quantile, matching the half-width in the estimates.
constexpr double kZ99 = 2.5758293035489004;

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    if (dir.back() == '/') return dir + name;
    return dir + "/" + name;
}

std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive)
        return Verdict::Inconclusive;
    return Verdict::Pass;
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kExitPass;
        case Verdict::Fail: return kExitFail;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitInternal;
}

EstimatorPolicy make_policy(const RunConfig& cfg) {
    EstimatorPolicy policy;
    policy.censor_tolerance = cfg.verify.censor_tolerance;
    policy.kurtosis_guard = cfg.verify.kurtosis_guard;
    policy.boundary_touch_tolerance = cfg.verify.touch_tolerance;
    return policy;
}

// Persists one report under the configured formats and prints a one-line
// summary; folds its verdict into the running aggregate.
void emit_report(const VerificationReport& report, const RunConfig& cfg,
                 const std::string& stem,
                 std::vector<VerificationReport>& all, Verdict& overall) {
    if (cfg.format == ReportFormat::Json || cfg.format == ReportFormat::Both)
        write_file(join_path(cfg.out_dir, stem + ".json"),
                   report_json(report, cfg));
    if (cfg.format == ReportFormat::Csv || cfg.format == ReportFormat::Both)
        write_file(join_path(cfg.out_dir, stem + ".csv"),
                   reports_csv(std::vector<VerificationReport>{report}));
    std::printf("%-32s %-12s mean=%-12.6g bound=%-12.6g n=%llu\n",
                report.quantity.c_str(), verdict_name(report.verdict).c_str(),
                report.estimate.mean, report.bound_value,
                static_cast<unsigned long long>(report.estimate.n));
    all.push_back(report);
    overall = combine(overall, report.verdict);
}

VerificationReport check_stationary(const ModelParams& p, const RunConfig& cfg,
                                    unsigned threads) {
    DistributionEstimate est =
        empirical_distribution(p, cfg.sim, cfg.verify.stationary_x0,
                               cfg.verify.stationary_t, cfg.verify.bins,
                               threads);
    const double tv = tv_distance(est, p);
    const double floor =
        2.0 / std::sqrt(static_cast<double>(cfg.sim.n_paths));

    VerificationReport r;
    r.quantity = "stationary_tv_distance";
    r.bound_value = cfg.verify.tv_tolerance;
    r.estimate.mean = tv;
    r.estimate.n = est.sample_count;
    r.verdict = tv <= cfg.verify.tv_tolerance ? Verdict::Pass : Verdict::Fail;
    r.claim = "TV(empirical law at the snapshot time, invariant Beta law on "
              "the same bins) <= tolerance";
    r.notes = "histogram TV against quadrature bin masses of the invariant "
              "law; finite-sample noise floor is of order " + fmt3(floor) +
              " at this path count and bin count; std_error/ci99 do not "
              "apply to a TV statistic and are reported as 0";
    r.aux.emplace_back("snapshot_time", cfg.verify.stationary_t);
    r.aux.emplace_back("bins", static_cast<double>(cfg.verify.bins));
    r.aux.emplace_back("tv_floor", floor);
    return r;
}

VerificationReport check_decay(const ModelParams& p, const RunConfig& cfg,
                               unsigned threads) {
    VerificationReport r;
    r.quantity = "tv_decay_rate";
    r.bound_value = 0.0;
    r.claim = "fitted exponential decay rate of TV(t) against the invariant "
              "law exceeds 0, and TV at the last snapshot is below TV at the "
              "first";
    try {
        TvDecayFit fit =
            fit_tv_decay(p, cfg.sim, cfg.verify.decay_x0,
                         cfg.verify.decay_snapshots, cfg.verify.bins, threads);
        r.estimate.mean = fit.rate;
        r.estimate.n = fit.fit.used.size();
        if (fit.fit.used.size() > 2) {
            double ss = 0.0;
            for (double res : fit.fit.residuals) ss += res * res;
            double tbar = 0.0;
            for (std::size_t i : fit.fit.used) tbar += fit.snapshot_times[i];
            tbar /= static_cast<double>(fit.fit.used.size());
            double stt = 0.0;
            for (std::size_t i : fit.fit.used) {
                const double d = fit.snapshot_times[i] - tbar;
                stt += d * d;
            }
            if (stt > 0.0) {
                r.estimate.std_error = std::sqrt(
                    ss / static_cast<double>(fit.fit.used.size() - 2) / stt);
                r.estimate.ci99_halfwidth = kZ99 * r.estimate.std_error;
            }
        }
        const bool improved = fit.tv_values.back() < fit.tv_values.front();
        r.verdict = (fit.rate > 0.0 && improved) ? Verdict::Pass
                                                 : Verdict::Fail;
        r.notes = "least-squares fit of log TV against time over the "
                  "snapshot grid; snapshots at or below the sampling noise "
                  "floor are excluded from the fit";
        r.aux.emplace_back("intercept", fit.intercept);
        r.aux.emplace_back("tv_floor", fit.tv_floor);
        r.aux.emplace_back("points_used",
                           static_cast<double>(fit.fit.used.size()));
        for (std::size_t i = 0; i < fit.snapshot_times.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "tv_at_t%g",
                          fit.snapshot_times[i]);
            r.aux.emplace_back(name, fit.tv_values[i]);
        }
    } catch (const DegenerateFit& e) {
        r.verdict = Verdict::Inconclusive;
        r.notes = std::string("decay fit degenerate: ") + e.what();
    }
    return r;
}

// Audits the four pointwise drift inequalities (both recurrence ends, both
// endpoint plans), writes one CSV per scan plus a JSON summary, and folds
// everything into a single report row.
VerificationReport check_drift(const ModelParams& p, const RunConfig& cfg) {
    const RecurrencePlan rp =
        plan_recurrence(p, cfg.plan.c, cfg.plan.m_fraction,
                        cfg.plan.alpha_fraction);
    const BoundaryPlan bp0 = plan_boundary(p, 0, cfg.plan.kappa_fraction);
    const BoundaryPlan bp1 = plan_boundary(p, 1, cfg.plan.kappa_fraction);

    std::vector<DriftScanReport> scans;
    scans.push_back(scan_recurrence_drift(p, rp, cfg.drift_grid_size, false));
    scans.push_back(scan_recurrence_drift(p, rp, cfg.drift_grid_size, true));
    scans.push_back(scan_boundary_drift(p, bp0, cfg.drift_grid_size));
    scans.push_back(scan_boundary_drift(p, bp1, cfg.drift_grid_size));

    for (const DriftScanReport& scan : scans)
        write_file(join_path(cfg.out_dir, "drift_" + scan.label + ".csv"),
                   drift_scan_csv(scan));
    if (cfg.format == ReportFormat::Json || cfg.format == ReportFormat::Both)
        write_file(join_path(cfg.out_dir, "drift_summary.json"),
                   scan_summary_json(scans, cfg));

    bool all_hold = true;
    double min_margin = 0.0;
    double worst_rel_err = 0.0;
    std::uint64_t points = 0;
    VerificationReport r;
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const DriftScanReport& scan = scans[i];
        all_hold = all_hold && scan.holds;
        if (i == 0 || scan.inequality_margin < min_margin)
            min_margin = scan.inequality_margin;
        worst_rel_err = std::max(worst_rel_err, scan.max_rel_err);
        points += scan.grid.size();
        r.aux.emplace_back(scan.label + "_margin", scan.inequality_margin);
        r.aux.emplace_back(scan.label + "_max_rel_err", scan.max_rel_err);
    }

    r.quantity = "drift_inequality_margin";
    r.bound_value = kDriftMarginTolerance;
    r.estimate.mean = min_margin;
    r.estimate.n = points;
    if (!all_hold)
        r.verdict = Verdict::Fail;
    else if (worst_rel_err > kFdAgreementTolerance)
        r.verdict = Verdict::Inconclusive;
    else
        r.verdict = Verdict::Pass;
    r.claim = "min over the audit grids of (required right-hand side - "
              "generator value) >= the round-off allowance, with the closed "
              "form cross-checked by finite differences at every point";
    r.notes = "deterministic pointwise audit; mean holds the worst margin, "
              "bound_value the allowance " + fmt3(kDriftMarginTolerance) +
              "; cross-check tolerance " + fmt3(kFdAgreementTolerance) +
              " (disagreement turns the verdict Inconclusive)";
    return r;
}

int run_plan(const RunConfig& cfg) {
    const std::string doc = plan_json(cfg);
    write_file(join_path(cfg.out_dir, "plan.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return kExitPass;
}

int run_simulate(const RunConfig& cfg, unsigned threads) {
    const ModelParams p = cfg.model();
    cfg.sim.validate();
    const SimulateSettings& s = cfg.simulate;
    const std::vector<Functional> functionals;  // raw paths only

    std::vector<PathRecord> records;
    StoppingSpec stop;
    bool horizon_run = false;
    if (s.stop == "none") {
        horizon_run = true;
        HorizonResult hr =
            run_batch_horizon(p, cfg.sim, s.x0, {}, functionals, threads);
        records = std::move(hr.records);
    } else {
        double threshold = s.threshold;
        if (s.stop == "tau_alpha") {
            if (threshold < 0)
                threshold = plan_recurrence(p, cfg.plan.c, cfg.plan.m_fraction,
                                            cfg.plan.alpha_fraction)
                                .alpha;
            stop = StoppingSpec::tau_alpha(threshold);
        } else if (s.stop == "gamma_beta") {
            if (threshold < 0)
                throw ConfigError(
                    "simulate.threshold must be set for simulate.stop = "
                    "gamma_beta");
            stop = StoppingSpec::gamma_beta(threshold);
        } else if (s.stop == "t_kappa") {
            if (threshold < 0)
                threshold =
                    plan_boundary(p, 0, cfg.plan.kappa_fraction).kappa;
            stop = StoppingSpec::t_kappa(threshold);
        } else {
            throw ConfigError("unknown simulate.stop '" + s.stop + "'");
        }
        records = run_batch(p, cfg.sim, s.x0, stop, functionals, threads);
    }

    const std::string path = join_path(cfg.out_dir, "paths.csv");
    write_file(path, path_records_csv(records, stop, functionals, horizon_run));

    std::uint64_t censored = 0, clamps = 0;
    double mean_stop = 0.0;
    for (const PathRecord& rec : records) {
        censored += rec.censored ? 1 : 0;
        clamps += rec.clamp_events;
        mean_stop += rec.stop_time;
    }
    if (!records.empty()) mean_stop /= static_cast<double>(records.size());
    std::printf("wrote %s: %zu paths, %llu censored, mean stop_time %.6g, "
                "%llu clamp events\n",
                path.c_str(), records.size(),
                static_cast<unsigned long long>(censored), mean_stop,
                static_cast<unsigned long long>(clamps));
    return kExitPass;
}

int run_verify(const RunConfig& cfg, const std::string& which,
               unsigned threads) {
    const ModelParams p = cfg.model();
    cfg.sim.validate();
    const EstimatorPolicy policy = make_policy(cfg);
    auto want = [&](const char* name) {
        return which == "all" || which == name;
    };

    std::vector<VerificationReport> all;
    Verdict overall = Verdict::Pass;

    if (want("recurrence")) {
        const RecurrencePlan plan =
            plan_recurrence(p, cfg.plan.c, cfg.plan.m_fraction,
                            cfg.plan.alpha_fraction);
        SimConfig sim = cfg.sim;
        sim.scheme = cfg.verify.recurrence_scheme;
        if (cfg.verify.recurrence_dt > 0) sim.dt = cfg.verify.recurrence_dt;
        emit_report(verify_exp_moment(p, plan, cfg.verify.recurrence_x0, sim,
                                      policy, threads),
                    cfg, "report_exp_moment", all, overall);
        emit_report(verify_additive_functional(p, plan,
                                               cfg.verify.recurrence_x0, sim,
                                               policy, threads),
                    cfg, "report_additive_functional", all, overall);
    }
    if (want("boundary")) {
        SimConfig sim = cfg.sim;
        sim.scheme = cfg.verify.boundary_scheme;
        emit_report(verify_boundary_avoidance(p, sim, cfg.verify.boundary_x0,
                                              cfg.verify.boundary_horizon,
                                              policy, threads),
                    cfg, "report_boundary_touch", all, overall);
    }
    if (want("hitprob")) {
        for (int endpoint = 0; endpoint < 2; ++endpoint) {
            const BoundaryPlan bplan =
                plan_boundary(p, endpoint, cfg.plan.kappa_fraction);
            emit_report(verify_hit_probability(p, bplan, cfg.verify.hit_x0,
                                               cfg.verify.hit_beta, cfg.sim,
                                               policy, threads),
                        cfg,
                        endpoint == 0 ? "report_hit_probability_endpoint0"
                                      : "report_hit_probability_endpoint1",
                        all, overall);
        }
    }
    if (want("stationary"))
        emit_report(check_stationary(p, cfg, threads), cfg,
                    "report_stationary", all, overall);
    if (want("decay"))
        emit_report(check_decay(p, cfg, threads), cfg, "report_tv_decay", all,
                    overall);
    if (want("drift"))
        emit_report(check_drift(p, cfg), cfg, "report_drift", all, overall);

    if (cfg.format == ReportFormat::Csv || cfg.format == ReportFormat::Both)
        write_file(join_path(cfg.out_dir, "reports.csv"), reports_csv(all));

    std::printf("overall: %s (%zu checks)\n",
                verdict_name(overall).c_str(), all.size());
    return verdict_exit(overall);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Numerical laboratory for the Wright-Fisher mutation diffusion: "
        "certified Lyapunov parameter plans, reproducible SDE batches, and "
        "Monte Carlo verification of recurrence, endpoint-avoidance, and "
        "stationarity bounds"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    std::string format_override;
    unsigned threads = 0;

    app.add_option("--config", config_path,
                   "flat key = value settings file (dotted keys)");
    CLI::Option* seed_opt =
        app.add_option("--seed", seed_override, "override sim.master_seed");
    CLI::Option* out_opt =
        app.add_option("--out", out_override, "override out.dir");
    CLI::Option* fmt_opt =
        app.add_option("--format", format_override, "override out.format")
            ->check(CLI::IsMember({"json", "csv", "both"}));
    app.add_option("--threads", threads,
                   "worker threads, 0 = hardware concurrency (wall time "
                   "only; never changes output bytes)");

    CLI::App* sub_plan = app.add_subcommand(
        "plan", "compute both certified parameter sets, write plan.json");
    sub_plan->fallthrough();
    CLI::App* sub_sim = app.add_subcommand(
        "simulate", "run a path batch per [simulate] settings, write "
                    "paths.csv");
    sub_sim->fallthrough();
    CLI::App* sub_verify = app.add_subcommand(
        "verify", "run verification checks and write one report per check");
    sub_verify->fallthrough();
    std::string which = "all";
    sub_verify->add_option("which", which, "which check to run")
        ->check(CLI::IsMember({"recurrence", "boundary", "hitprob",
                               "stationary", "decay", "drift", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        if (seed_opt->count() > 0) cfg.sim.master_seed = seed_override;
        if (out_opt->count() > 0) cfg.out_dir = out_override;
        if (fmt_opt->count() > 0) cfg.format = format_from_name(format_override);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    }

    try {
        if (sub_plan->parsed()) return run_plan(cfg);
        if (sub_sim->parsed()) return run_simulate(cfg, threads);
        return run_verify(cfg, which, threads);
    } catch (const FellerViolated& e) {
        std::fprintf(stderr, "precondition: FellerViolated: %s\n", e.what());
        return kExitPrecondition;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const DegenerateFit& e) {
        std::fprintf(stderr, "inconclusive: %s\n", e.what());
        return kExitInconclusive;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "precondition: %s\n", e.what());
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
}
