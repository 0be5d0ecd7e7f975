#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wfrec/planner.hpp"
#include "wfrec/sde.hpp"

namespace wfrec {

struct MonteCarloEstimate {
    double mean = 0;
    double std_error = 0;
    std::uint64_t n = 0;
    double censored_fraction = 0;
    double ci99_halfwidth = 0;
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

// Outcome of checking one empirical estimate against one closed-form bound.
// `claim` states the inequality being checked in plain ASCII; `aux` carries
// check-specific extra numbers (all serialized). Every threshold applied is
// artifact policy, recorded in `notes`.
struct VerificationReport {
    std::string quantity;
    double bound_value = 0;
    MonteCarloEstimate estimate;
    Verdict verdict = Verdict::Inconclusive;
    std::string notes;
    std::string claim;
    std::vector<std::pair<std::string, double>> aux;
};

struct DistributionEstimate {
    std::vector<double> bin_edges;  // K+1 edges partitioning [0,1]
    std::vector<double> masses;     // K nonnegative, summing to 1
    std::uint64_t sample_count = 0;
};

// Verdict thresholds. censor_tolerance applies to the recurrence checks
// (exp moment, additive functional), where a censored path hides unbounded
// mass, so the default refuses to Pass with any censoring at all. The
// hitting check counts censored paths as "did not hit" (its bound is uniform
// in the horizon), and the boundary check has no stopping to censor.
struct EstimatorPolicy {
    double censor_tolerance = 0.0;
    double kurtosis_guard = 100.0;        // raw kurtosis beyond this -> Inconclusive
    double boundary_touch_tolerance = 1e-3;
};

// Mean of e^{c tau} over a TauAlpha([alpha, 1-alpha]) batch from x0 versus
// bound_exp_moment. Pass iff mean + 3 std_error <= bound and censoring is
// within tolerance.
VerificationReport verify_exp_moment(const ModelParams& p,
                                     const RecurrencePlan& plan, double x0,
                                     const SimConfig& cfg,
                                     const EstimatorPolicy& policy = {},
                                     unsigned threads = 0);

// Mean of the accumulated X_s^{-m-1} up to tau versus the AsProved bound
// (which decides the verdict); the AsStated variant is evaluated and
// reported in aux/notes only.
VerificationReport verify_additive_functional(const ModelParams& p,
                                              const RecurrencePlan& plan,
                                              double x0, const SimConfig& cfg,
                                              const EstimatorPolicy& policy = {},
                                              unsigned threads = 0);

// Fraction of paths with any clamp event over a horizon run from x0, checked
// against policy.boundary_touch_tolerance. A contrast run with the rates cut
// to 0.1*epsilon^2 (violating min(a,b) > epsilon^2/2 five-fold) is executed
// with the same config and reported in aux as contrast_touch_fraction;
// it does not affect the verdict.
VerificationReport verify_boundary_avoidance(const ModelParams& p,
                                             const SimConfig& cfg, double x0,
                                             double horizon,
                                             const EstimatorPolicy& policy = {},
                                             unsigned threads = 0);

// Probability that the distance to the plan's endpoint descends to beta
// before exceeding kappa (FirstOf(GammaBeta, TKappa) stopping; paths that
// reach t_max with neither count as "did not hit"), versus
// bound_hit_probability. x0 and beta are distances to the certified
// endpoint; for endpoint 1 the swapped model is simulated. Requires
// 0 < beta < x0 < kappa.
VerificationReport verify_hit_probability(const ModelParams& p,
                                          const BoundaryPlan& bplan, double x0,
                                          double beta, const SimConfig& cfg,
                                          const EstimatorPolicy& policy = {},
                                          unsigned threads = 0);

// Histogram of X_{t_snapshot} over K equal-width bins of [0,1] across
// cfg.n_paths paths from x0 (simulated exactly to the snapshot time).
DistributionEstimate empirical_distribution(const ModelParams& p,
                                            const SimConfig& cfg, double x0,
                                            double t_snapshot, std::uint64_t K,
                                            unsigned threads = 0);

// Total variation distance between the histogram and the invariant law's
// masses on the same bins: (1/2) sum_i |mass_i - pi(bin_i)|, pi by adaptive
// quadrature of stationary_density. Throws FellerViolated without the
// invariant law.
double tv_distance(const DistributionEstimate& est, const ModelParams& p);

// Same metric between two mass vectors on shared bins.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

// Least-squares fit of log(value) = intercept - rate * t over the points
// with value > floor. Throws DegenerateFit with fewer than 3 usable points.
struct LogLinearFit {
    double rate = 0;
    double intercept = 0;
    std::vector<double> residuals;   // per used point, log-scale
    std::vector<std::size_t> used;   // indices of the fitted points
};
LogLinearFit fit_log_linear(const std::vector<double>& times,
                            const std::vector<double>& values, double floor);

// One batch run to max(snapshot_times) recording every snapshot, TV against
// the invariant law per snapshot, then fit_log_linear with the sampling
// noise floor 2/sqrt(n_paths). Requires >= 4 increasing snapshot times.
struct TvDecayFit {
    double rate = 0;
    double intercept = 0;
    double tv_floor = 0;
    std::vector<double> snapshot_times;
    std::vector<double> tv_values;
    LogLinearFit fit;
};
TvDecayFit fit_tv_decay(const ModelParams& p, const SimConfig& cfg, double x0,
                        const std::vector<double>& snapshot_times,
                        std::uint64_t K = 200, unsigned threads = 0);

}  // namespace wfrec
