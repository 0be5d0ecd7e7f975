#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wfrec/model.hpp"

namespace wfrec {

// Time discretization of the model dynamics.
//   EulerClamp   explicit Euler; proposals leaving [clamp_eps, 1-clamp_eps]
//                are clipped to the band (each such step counts one clamp
//                event).
//   EulerReflect same proposal, reflected across the violated edge instead
//                of clipped (still counted).
//   Lamperti     advance y = (2/epsilon) asin(sqrt(x)), whose diffusion
//                coefficient is exactly 1, then map back x = sin^2(epsilon
//                y/2) and clip; the transform removes the state-dependent
//                noise amplitude and with it most of the boundary overshoot
//                of the Euler proposals.
enum class Scheme { EulerClamp, EulerReflect, Lamperti };

struct SimConfig {
    Scheme scheme = Scheme::EulerClamp;
    double dt = 1e-4;
    double t_max = 50.0;
    double clamp_eps = 1e-12;
    std::uint64_t master_seed = 20260816;
    std::uint64_t n_paths = 10000;

    // Throws ConfigError unless dt > 0, dt < t_max, 0 < clamp_eps < 1e-6,
    // n_paths >= 1.
    void validate() const;
};

// First grid time at which the state satisfies the condition:
//   TauAlpha   x in [threshold, 1-threshold]   (threshold < 1/2)
//   GammaBeta  x <= threshold
//   TKappa     x >= threshold
struct StopCondition {
    enum class Kind { TauAlpha, GammaBeta, TKappa };
    Kind kind;
    double threshold;

    bool satisfied(double x) const;
    std::string name() const;
};

// Disjunction checked at every grid point (including t = 0); the first
// condition in list order that holds fires. Empty lists are rejected by
// run_path/run_batch (use run_batch_horizon for no-stopping runs).
struct StoppingSpec {
    std::vector<StopCondition> conditions;

    static StoppingSpec tau_alpha(double alpha);
    static StoppingSpec gamma_beta(double beta);
    static StoppingSpec t_kappa(double kappa);
    static StoppingSpec first_of(std::vector<StopCondition> conditions);
};

// Integrand accumulated along the path by the left-endpoint rule
// sum f(x_k) dt over steps strictly before the stopping step.
struct Functional {
    std::string name;
    std::function<double(double)> f;
};

// f(x) = x^exponent, the workhorse integrand.
Functional power_functional(std::string name, double exponent);

struct PathRecord {
    std::uint64_t path_index = 0;
    double initial_x = 0;
    double stop_time = 0;      // == t_max when censored
    bool censored = false;     // no condition fired by t_max
    int stop_reason = -1;      // index into StoppingSpec::conditions; -1 if censored
    std::vector<double> integrals;  // one per requested functional, in order
    std::uint64_t clamp_events = 0;
    double min_x = 0;
    double max_x = 0;
    double final_x = 0;  // state at the stopping step (or at t_max)
};

// One step of the chosen scheme from x with standard normal draw z.
// Increments clamp_events when the proposal leaves [clamp_eps, 1-clamp_eps].
double step(const ModelParams& p, const SimConfig& cfg, double x, double z,
            std::uint64_t& clamp_events);

// Simulates path `path_index` from x0 until a stopping condition holds at a
// grid point or t_max is reached. The noise stream is a pure function of
// (cfg.master_seed, path_index), one draw per step, so the record is fully
// reproducible in isolation. x0 must lie in [clamp_eps, 1-clamp_eps].
// Throws ConfigError if stop.conditions is empty.
PathRecord run_path(const ModelParams& p, const SimConfig& cfg, double x0,
                    const StoppingSpec& stop,
                    const std::vector<Functional>& functionals,
                    std::uint64_t path_index = 0);

// cfg.n_paths independent paths, path i on stream (master_seed, i). Work is
// distributed over `threads` workers (0 = hardware concurrency) with records
// written by path index, so the result is identical for every thread count.
std::vector<PathRecord> run_batch(const ModelParams& p, const SimConfig& cfg,
                                  double x0, const StoppingSpec& stop,
                                  const std::vector<Functional>& functionals,
                                  unsigned threads = 0);

// Horizon run without stopping: every path is stepped to t_max; records get
// stop_time = t_max, stop_reason = -1, censored = false (nothing was being
// waited for). snapshot_times (each <= t_max) are rounded to the nearest
// grid index; snapshots[s][i] is path i's state at snapshot s.
struct HorizonResult {
    std::vector<PathRecord> records;
    std::vector<std::vector<double>> snapshots;
};
HorizonResult run_batch_horizon(const ModelParams& p, const SimConfig& cfg,
                                double x0,
                                const std::vector<double>& snapshot_times,
                                const std::vector<Functional>& functionals = {},
                                unsigned threads = 0);

// CSV dump: header then one row per record, columns
// path_index, stop_time, stop_reason, <one column per functional>,
// clamp_events, min_x, max_x, final_x. stop_reason is the fired condition's
// name or "censored" / "horizon". Doubles are written with round-trip
// precision.
std::string path_records_csv(const std::vector<PathRecord>& records,
                             const StoppingSpec& stop,
                             const std::vector<Functional>& functionals,
                             bool horizon_run = false);

}  // namespace wfrec
