#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "wfrec/planner.hpp"

namespace wfrec {

// Pointwise audit of a drift inequality
//   generator_apply(V) <= required_rhs(x)   for x in (0, threshold],
// on a log-spaced grid, with an independent finite-difference cross-check of
// the closed form at every grid point.
struct DriftScanReport {
    std::vector<double> grid;
    std::vector<double> closed_form;
    std::vector<double> fd_values;
    std::vector<double> required_rhs;
    std::vector<double> margins;  // required_rhs - closed_form, pointwise
    double max_rel_err = 0;       // closed form vs finite differences
    double inequality_margin = 0; // min over the grid
    bool holds = false;           // inequality_margin >= -1e-12
    std::string label;
};

// Round-off allowance on the margins; the inequalities themselves are exact.
constexpr double kDriftMarginTolerance = -1e-12;

// Acceptable relative disagreement between the closed form and its
// finite-difference cross-check along a scan.
constexpr double kFdAgreementTolerance = 1e-6;

// Inequality for the recurrence analysis at time t:
//   LowerEnd V = e^{ct} x^{-m}:  A V <= -(g_m/2) e^{ct} x^{-m-1} on (0, alpha].
// mirrored=true audits the UpperEnd function on [1-alpha, 1) instead: the
// grid is reflected, and the right-hand side uses (1-x)^{-m-1} with g_m taken
// from the same plan (min(a,b) makes it valid at both ends).
DriftScanReport scan_recurrence_drift(const ModelParams& p,
                                      const RecurrencePlan& plan,
                                      std::size_t grid_size = 1000,
                                      bool mirrored = false, double t = 0.0);

// Inequality for endpoint avoidance, in distance-to-endpoint coordinates:
//   Boundary V = d^{-n}:  A V <= -(n(n+1) epsilon^2/2) d^{-n} on (0, kappa].
// The plan's endpoint selects which end is audited (endpoint 1 scans the
// swapped model near its lower end, which is the same statement).
DriftScanReport scan_boundary_drift(const ModelParams& p,
                                    const BoundaryPlan& bplan,
                                    std::size_t grid_size = 1000);

// Two algebraic groupings of the same quantity, evaluated independently:
//   lhs: c V + B(x) V' + (epsilon^2/2) x(1-x) V''  with V = e^{ct} x^{-m}
//        and hand-written analytic derivatives,
//   rhs: the grouped closed form used by generator_apply.
// Returns (lhs, rhs, abs_err).
std::tuple<double, double, double> ito_expansion_identity(const ModelParams& p,
                                                          double m, double c,
                                                          double t, double x);

// CSV dump: x, closed_form, fd, required_rhs, margin per grid row.
std::string drift_scan_csv(const DriftScanReport& report);

}  // namespace wfrec
