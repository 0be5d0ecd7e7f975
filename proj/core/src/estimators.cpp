#include "wfrec/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wfrec {
namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

struct SampleStats {
    MonteCarloEstimate estimate;
    double kurtosis = 0;  // raw (normal = 3); 0 when undefined
};

// Fixed-order two-pass moments; the caller passes samples in path order so
// the result is independent of how the batch was scheduled.
SampleStats summarize(const std::vector<double>& samples, double censored_fraction) {
    SampleStats s;
    const std::uint64_t n = samples.size();
    s.estimate.n = n;
    s.estimate.censored_fraction = censored_fraction;
    if (n == 0) return s;

    double sum = 0;
    for (double v : samples) sum += v;
    const double mean = sum / (double)n;

    double m2 = 0, m4 = 0;
    for (double v : samples) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    s.estimate.mean = mean;
    if (n > 1) {
        const double var = m2 / (double)(n - 1);
        s.estimate.std_error = std::sqrt(var / (double)n);
        s.estimate.ci99_halfwidth = kZ99 * s.estimate.std_error;
    }
    if (m2 > 0) s.kurtosis = (double)n * m4 / (m2 * m2);
    return s;
}

void require_feller(const ModelParams& p, const char* who) {
    if (!feller_satisfied(p))
        throw FellerViolated(std::string(who) + ": requires min(a,b) > epsilon^2/2");
}

std::string model_note(const ModelParams& p, const SimConfig& cfg, double x0) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "a=%.17g b=%.17g epsilon=%.17g x0=%.17g dt=%.17g t_max=%.17g "
                  "n_paths=%llu",
                  p.a, p.b, p.epsilon, x0, cfg.dt, cfg.t_max,
                  (unsigned long long)cfg.n_paths);
    return buf;
}

// Shared Pass/Fail/Inconclusive logic for mean-vs-upper-bound checks. The
// kurtosis guard is optional: it protects checks whose samples should be
// light-tailed (entry-time exponentials), while functionals that are
// heavy-tailed by nature report the diagnostic without degrading the
// verdict.
void decide_upper_bound(VerificationReport& report, const SampleStats& stats,
                        const EstimatorPolicy& policy,
                        bool apply_kurtosis_guard = true) {
    const bool below = stats.estimate.mean + 3.0 * stats.estimate.std_error <=
                       report.bound_value;
    const Verdict raw = below ? Verdict::Pass : Verdict::Fail;
    if (stats.estimate.censored_fraction > policy.censor_tolerance) {
        report.verdict = Verdict::Inconclusive;
        report.notes += " censored_fraction " +
                        std::to_string(stats.estimate.censored_fraction) +
                        " exceeds tolerance " +
                        std::to_string(policy.censor_tolerance) +
                        "; would otherwise be " + verdict_name(raw) + ".";
    } else if (apply_kurtosis_guard && stats.kurtosis > policy.kurtosis_guard) {
        report.verdict = Verdict::Inconclusive;
        report.notes += " sample kurtosis " + std::to_string(stats.kurtosis) +
                        " exceeds guard " + std::to_string(policy.kurtosis_guard) +
                        ", normal-theory CI suspect; would otherwise be " +
                        verdict_name(raw) + ".";
    } else {
        report.verdict = raw;
    }
    report.aux.emplace_back("kurtosis", stats.kurtosis);
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

VerificationReport verify_exp_moment(const ModelParams& p,
                                     const RecurrencePlan& plan, double x0,
                                     const SimConfig& cfg,
                                     const EstimatorPolicy& policy,
                                     unsigned threads) {
    require_feller(p, "verify_exp_moment");
    validate_plan(p, plan);

    const auto records = run_batch(p, cfg, x0, StoppingSpec::tau_alpha(plan.alpha),
                                   {}, threads);
    std::vector<double> samples;
    samples.reserve(records.size());
    std::uint64_t censored = 0;
    for (const PathRecord& rec : records) {
        if (rec.censored)
            ++censored;
        else
            samples.push_back(std::exp(plan.c * rec.stop_time));
    }
    const SampleStats stats =
        summarize(samples, (double)censored / (double)records.size());

    VerificationReport report;
    report.quantity = "exp_moment_entry_time";
    report.bound_value = bound_exp_moment(plan, x0);
    report.estimate = stats.estimate;
    report.claim =
        "mean(exp(c*tau)) + 3*std_error <= C_m*c*alpha^(m+1)*(x0^(-m)+(1-x0)^(-m))+1";
    report.notes = "tau = first grid entry to [alpha, 1-alpha]; mean over "
                   "uncensored paths. " +
                   model_note(p, cfg, x0);
    report.aux.emplace_back("c", plan.c);
    report.aux.emplace_back("m", plan.m);
    report.aux.emplace_back("alpha", plan.alpha);
    report.aux.emplace_back("C_m", plan.C_m);
    decide_upper_bound(report, stats, policy);
    return report;
}

VerificationReport verify_additive_functional(const ModelParams& p,
                                              const RecurrencePlan& plan,
                                              double x0, const SimConfig& cfg,
                                              const EstimatorPolicy& policy,
                                              unsigned threads) {
    require_feller(p, "verify_additive_functional");
    validate_plan(p, plan);

    const std::vector<Functional> functionals = {
        power_functional("integral_x_pow_neg_m_plus_1", -plan.m - 1.0)};
    const auto records = run_batch(p, cfg, x0, StoppingSpec::tau_alpha(plan.alpha),
                                   functionals, threads);
    std::vector<double> samples;
    samples.reserve(records.size());
    std::uint64_t censored = 0;
    for (const PathRecord& rec : records) {
        if (rec.censored)
            ++censored;
        else
            samples.push_back(rec.integrals[0]);
    }
    const SampleStats stats =
        summarize(samples, (double)censored / (double)records.size());

    const double as_proved =
        bound_additive_functional(plan, x0, FunctionalBound::AsProved);
    const double as_stated =
        bound_additive_functional(plan, x0, FunctionalBound::AsStated);

    VerificationReport report;
    report.quantity = "additive_functional_entry_time";
    report.bound_value = as_proved;
    report.estimate = stats.estimate;
    report.claim =
        "mean(integral of X^(-m-1) up to tau) + 3*std_error <= C_m*(x0^(-m)+(1-x0)^(-m))";
    const bool stated_ok =
        stats.estimate.mean + 3.0 * stats.estimate.std_error <= as_stated;
    report.notes = "verdict decided by the conservative variant; the tighter "
                   "variant C_m*c*alpha^(m+1)*(x0^(-m)+(1-x0)^(-m)) = " +
                   std::to_string(as_stated) + " is informational only and is " +
                   (stated_ok ? "respected" : "exceeded") +
                   " by this sample. " + model_note(p, cfg, x0);
    report.notes += " The integrand X^(-m-1) is heavy-tailed near the "
                    "endpoint, so kurtosis is reported as a diagnostic only.";
    report.aux.emplace_back("as_proved_bound", as_proved);
    report.aux.emplace_back("as_stated_bound", as_stated);
    report.aux.emplace_back("as_stated_respected", stated_ok ? 1.0 : 0.0);
    report.aux.emplace_back("m", plan.m);
    report.aux.emplace_back("alpha", plan.alpha);
    decide_upper_bound(report, stats, policy, /*apply_kurtosis_guard=*/false);
    return report;
}

VerificationReport verify_boundary_avoidance(const ModelParams& p,
                                             const SimConfig& cfg, double x0,
                                             double horizon,
                                             const EstimatorPolicy& policy,
                                             unsigned threads) {
    SimConfig run_cfg = cfg;
    run_cfg.t_max = horizon;

    const auto touch_fraction = [&](const ModelParams& model) {
        const HorizonResult res = run_batch_horizon(model, run_cfg, x0, {}, {},
                                                    threads);
        std::uint64_t touched = 0;
        for (const PathRecord& rec : res.records)
            if (rec.clamp_events > 0) ++touched;
        return (double)touched / (double)res.records.size();
    };

    const double fraction = touch_fraction(p);
    const ModelParams contrast(0.1 * p.epsilon * p.epsilon,
                               0.1 * p.epsilon * p.epsilon, p.epsilon);
    const double contrast_fraction = touch_fraction(contrast);

    VerificationReport report;
    report.quantity = "boundary_touch_fraction";
    report.bound_value = policy.boundary_touch_tolerance;
    report.estimate.mean = fraction;
    report.estimate.n = run_cfg.n_paths;
    report.estimate.std_error =
        std::sqrt(fraction * (1.0 - fraction) / (double)run_cfg.n_paths);
    report.estimate.ci99_halfwidth = kZ99 * report.estimate.std_error;
    report.estimate.censored_fraction = 0.0;
    report.verdict = fraction <= policy.boundary_touch_tolerance ? Verdict::Pass
                                                                 : Verdict::Fail;
    report.claim = "fraction of paths with any clamp event <= tolerance";
    report.notes =
        "horizon run, no stopping; a clamp event means a proposal left "
        "[clamp_eps, 1-clamp_eps]. Contrast run cuts both rates to "
        "0.1*epsilon^2 (strongly violating min(a,b) > epsilon^2/2) and is "
        "reported without affecting the verdict. " +
        model_note(p, run_cfg, x0);
    report.aux.emplace_back("contrast_touch_fraction", contrast_fraction);
    report.aux.emplace_back("contrast_a", contrast.a);
    report.aux.emplace_back("contrast_b", contrast.b);
    report.aux.emplace_back("horizon", horizon);
    return report;
}

VerificationReport verify_hit_probability(const ModelParams& p,
                                          const BoundaryPlan& bplan, double x0,
                                          double beta, const SimConfig& cfg,
                                          const EstimatorPolicy& policy,
                                          unsigned threads) {
    validate_plan(p, bplan);
    if (!(beta > 0.0 && beta < x0))
        throw std::invalid_argument("verify_hit_probability: requires 0 < beta < x0");
    if (!(x0 < bplan.kappa))
        throw std::invalid_argument("verify_hit_probability: requires x0 < kappa");

    const ModelParams run_model = bplan.endpoint == 0 ? p : p.swapped();
    const StoppingSpec stop = StoppingSpec::first_of(
        {StopCondition{StopCondition::Kind::GammaBeta, beta},
         StopCondition{StopCondition::Kind::TKappa, bplan.kappa}});
    const auto records = run_batch(run_model, cfg, x0, stop, {}, threads);

    std::uint64_t hits = 0, censored = 0;
    for (const PathRecord& rec : records) {
        if (rec.stop_reason == 0) ++hits;
        if (rec.censored) ++censored;
    }
    const double n = (double)records.size();
    const double fraction = (double)hits / n;

    VerificationReport report;
    report.quantity = "hit_probability_before_kappa";
    report.bound_value = bound_hit_probability(bplan, x0, beta);
    report.estimate.mean = fraction;
    report.estimate.n = records.size();
    report.estimate.std_error = std::sqrt(fraction * (1.0 - fraction) / n);
    report.estimate.ci99_halfwidth = kZ99 * report.estimate.std_error;
    report.estimate.censored_fraction = (double)censored / n;
    report.verdict = fraction + 3.0 * report.estimate.std_error <=
                             report.bound_value
                         ? Verdict::Pass
                         : Verdict::Fail;
    report.claim =
        "P(distance hits beta before exceeding kappa) + 3*std_error <= "
        "beta^n * x0^(-n)";
    report.notes =
        "distances measured to endpoint " + std::to_string(bplan.endpoint) +
        "; censored paths (neither threshold reached by t_max) count as "
        "non-hits, which the bound covers uniformly in the horizon. " +
        model_note(run_model, cfg, x0);
    report.aux.emplace_back("kappa", bplan.kappa);
    report.aux.emplace_back("n_exponent", bplan.n);
    report.aux.emplace_back("beta", beta);
    report.aux.emplace_back("endpoint", static_cast<double>(bplan.endpoint));
    (void)policy;
    return report;
}

DistributionEstimate empirical_distribution(const ModelParams& p,
                                            const SimConfig& cfg, double x0,
                                            double t_snapshot, std::uint64_t K,
                                            unsigned threads) {
    if (K < 1) throw std::invalid_argument("empirical_distribution: K >= 1");
    if (!(t_snapshot >= 0.0 && t_snapshot <= cfg.t_max))
        throw std::invalid_argument(
            "empirical_distribution: t_snapshot must lie in [0, t_max]");

    SimConfig run_cfg = cfg;
    if (t_snapshot > 0.0) run_cfg.t_max = t_snapshot;
    const HorizonResult res =
        t_snapshot > 0.0
            ? run_batch_horizon(p, run_cfg, x0, {t_snapshot}, {}, threads)
            : HorizonResult{};

    DistributionEstimate est;
    est.sample_count = cfg.n_paths;
    est.bin_edges.resize(K + 1);
    for (std::uint64_t i = 0; i <= K; ++i)
        est.bin_edges[i] = (double)i / (double)K;

    std::vector<std::uint64_t> counts(K, 0);
    const auto deposit = [&](double x) {
        std::uint64_t bin = (std::uint64_t)(x * (double)K);
        if (bin >= K) bin = K - 1;
        ++counts[bin];
    };
    if (t_snapshot > 0.0)
        for (double x : res.snapshots[0]) deposit(x);
    else
        for (std::uint64_t i = 0; i < cfg.n_paths; ++i) deposit(x0);

    est.masses.resize(K);
    for (std::uint64_t i = 0; i < K; ++i)
        est.masses[i] = (double)counts[i] / (double)cfg.n_paths;
    return est;
}

double tv_distance(const DistributionEstimate& est, const ModelParams& p) {
    if (!feller_satisfied(p))
        throw FellerViolated("tv_distance: invariant law requires the strict rate condition");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < est.bin_edges.size(); ++i) {
        const double pi_mass =
            stationary_mass(p, est.bin_edges[i], est.bin_edges[i + 1], 1e-12);
        acc += std::abs(est.masses[i] - pi_mass);
    }
    return 0.5 * acc;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("tv_distance: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return 0.5 * acc;
}

LogLinearFit fit_log_linear(const std::vector<double>& times,
                            const std::vector<double>& values, double floor) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_log_linear: size mismatch");
    LogLinearFit out;
    std::vector<double> t, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (values[i] > floor) {
            t.push_back(times[i]);
            y.push_back(std::log(values[i]));
            out.used.push_back(i);
        }
    }
    if (t.size() < 3)
        throw DegenerateFit("fit_log_linear: fewer than 3 points above the floor");

    const double n = (double)t.size();
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw DegenerateFit("fit_log_linear: degenerate time grid");
    const double slope = (n * sty - st * sy) / denom;
    out.intercept = (sy - slope * st) / n;
    out.rate = -slope;
    out.residuals.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out.residuals[i] = y[i] - (out.intercept + slope * t[i]);
    return out;
}

TvDecayFit fit_tv_decay(const ModelParams& p, const SimConfig& cfg, double x0,
                        const std::vector<double>& snapshot_times,
                        std::uint64_t K, unsigned threads) {
    if (snapshot_times.size() < 4)
        throw std::invalid_argument("fit_tv_decay: need >= 4 snapshot times");
    for (std::size_t i = 0; i + 1 < snapshot_times.size(); ++i)
        if (!(snapshot_times[i] < snapshot_times[i + 1]))
            throw std::invalid_argument("fit_tv_decay: times must increase");
    if (!(snapshot_times.front() > 0.0))
        throw std::invalid_argument("fit_tv_decay: times must be positive");
    if (!feller_satisfied(p))
        throw FellerViolated("fit_tv_decay: invariant law requires the strict rate condition");

    SimConfig run_cfg = cfg;
    run_cfg.t_max = snapshot_times.back();
    const HorizonResult res =
        run_batch_horizon(p, run_cfg, x0, snapshot_times, {}, threads);

    TvDecayFit out;
    out.snapshot_times = snapshot_times;
    out.tv_floor = 2.0 / std::sqrt((double)run_cfg.n_paths);
    out.tv_values.reserve(snapshot_times.size());

    // Invariant-law bin masses computed once and reused per snapshot.
    std::vector<double> pi_mass(K);
    for (std::uint64_t i = 0; i < K; ++i)
        pi_mass[i] = stationary_mass(p, (double)i / (double)K,
                                     (double)(i + 1) / (double)K, 1e-12);

    for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
        std::vector<std::uint64_t> counts(K, 0);
        for (double x : res.snapshots[s]) {
            std::uint64_t bin = (std::uint64_t)(x * (double)K);
            if (bin >= K) bin = K - 1;
            ++counts[bin];
        }
        double acc = 0.0;
        for (std::uint64_t i = 0; i < K; ++i)
            acc += std::abs((double)counts[i] / (double)run_cfg.n_paths -
                            pi_mass[i]);
        out.tv_values.push_back(0.5 * acc);
    }

    out.fit = fit_log_linear(snapshot_times, out.tv_values, out.tv_floor);
    out.rate = out.fit.rate;
    out.intercept = out.fit.intercept;
    return out;
}

}  // namespace wfrec
