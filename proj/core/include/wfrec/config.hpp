#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfrec/model.hpp"
#include "wfrec/sde.hpp"

namespace wfrec {

// Inputs consumed by the planners.
struct PlanInputs {
    double c = 1.0;
    double m_fraction = 0.5;
    double alpha_fraction = 0.5;
    double kappa_fraction = 0.5;
};

// Per-check settings for the verification commands. The boundary-sensitive
// checks (recurrence moments near an endpoint, boundary avoidance) carry
// their own scheme default: clamping Euler proposals overshoot a degenerate
// boundary at a small O(dt) rate, a discretization artifact that pins paths
// at the clamp floor where x^{-m-1} integrands explode, so those checks
// default to the variance-stabilized scheme; every other run follows
// sim.scheme.
struct VerifySettings {
    // Strictly below the default plan's alpha (0.015625 for the unit model),
    // so the entry time is not trivially zero.
    double recurrence_x0 = 0.01;
    Scheme recurrence_scheme = Scheme::Lamperti;
    // The X^{-m-1} integrand amplifies near-endpoint discretization error,
    // so the recurrence checks default to a finer step than sim.dt;
    // nonpositive means "use sim.dt".
    double recurrence_dt = 1e-5;

    double boundary_x0 = 0.5;
    double boundary_horizon = 10.0;
    Scheme boundary_scheme = Scheme::Lamperti;
    double touch_tolerance = 1e-3;

    double hit_x0 = 0.1;
    double hit_beta = 0.01;

    double stationary_x0 = 0.5;
    double stationary_t = 50.0;
    std::uint64_t bins = 200;
    double tv_tolerance = 0.05;

    double decay_x0 = 0.05;
    std::vector<double> decay_snapshots = {1.0, 2.0, 4.0, 8.0, 16.0};

    double censor_tolerance = 0.0;
    double kurtosis_guard = 100.0;
};

// What cmd_simulate runs: a plain horizon batch by default, or one of the
// stopping rules. threshold < 0 means "use the planned alpha" for tau_alpha
// (and is an error for the other rules).
struct SimulateSettings {
    double x0 = 0.5;
    std::string stop = "none";  // none | tau_alpha | gamma_beta | t_kappa
    double threshold = -1.0;
};

enum class ReportFormat { Json, Csv, Both };

struct RunConfig {
    double model_a = 1.0;
    double model_b = 1.0;
    double model_epsilon = 1.0;
    SimConfig sim;
    PlanInputs plan;
    VerifySettings verify;
    SimulateSettings simulate;
    std::size_t drift_grid_size = 1000;
    std::string out_dir = ".";
    ReportFormat format = ReportFormat::Json;

    ModelParams model() const;  // validates a, b, epsilon
};

// Flat `key = value` text: one assignment per line, dotted keys
// (e.g. model.a = 1.0), full-line comments starting with '#' or ';', blank
// lines ignored, later assignments win. Unknown keys and malformed values
// raise ConfigError.
RunConfig parse_config_text(const std::string& text);

// parse_config_text over the file's contents; missing/unreadable file raises
// ConfigError.
RunConfig parse_config_file(const std::string& path);

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // ConfigError on no match
std::string format_name(ReportFormat f);
ReportFormat format_from_name(const std::string& name);

}  // namespace wfrec
