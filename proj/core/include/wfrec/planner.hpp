#pragma once

#include "wfrec/model.hpp"

namespace wfrec {

// Certified parameter set for the exponential-recurrence estimate: for the
// entry time tau = inf{t >= 0 : X_t in [alpha, 1-alpha]},
//
//   E_x e^{c tau} <= C_m * c * alpha^{m+1} * (x^{-m} + (1-x)^{-m}) + 1.
//
// Validity requires (see validate_plan):
//   0 < m < 2 min(a,b)/epsilon^2 - 1
//   g_m = min(a,b) m - epsilon^2 m(m+1)/2 > 0
//   0 < alpha < g_m / (2 (c + (a+b) m)),  alpha < 1/2
//   C_m = 2 / g_m
// Plain aggregate so tests can build deliberate violations; everything the
// planner emits satisfies validate_plan.
struct RecurrencePlan {
    double c = 0;
    double m = 0;
    double alpha = 0;
    double C_m = 0;
    double g_m = 0;
};

// Certified parameter set for the endpoint-avoidance estimate. All fields are
// expressed in the distance-to-endpoint coordinate d (d = x for endpoint 0,
// d = 1-x for endpoint 1):
//   0 < kappa < (r - epsilon^2/2)/(a+b)   with r = a for endpoint 0, b for 1
//   b0 = r - (a+b) kappa > epsilon^2/2
//   0 < n <= 2 b0/epsilon^2 - 1
struct BoundaryPlan {
    double kappa = 0;
    double b0 = 0;
    double n = 0;
    int endpoint = 0;  // 0 or 1
};

// Upper end of the admissible m interval: 2 min(a,b)/epsilon^2 - 1.
double recurrence_m_max(const ModelParams& p);

// g_m for a given m.
double recurrence_margin(const ModelParams& p, double m);

// Upper end of the admissible alpha interval: g_m / (2 (c + (a+b) m)).
// The factor 2 keeps this below 1/2 automatically.
double recurrence_alpha_max(const ModelParams& p, double c, double m);

// Picks m = m_fraction * m_max and alpha = alpha_fraction * alpha_max
// (fractions strictly inside (0,1)), then fills in g_m and C_m = 2/g_m.
// Throws FellerViolated or InvalidFraction.
RecurrencePlan plan_recurrence(const ModelParams& p, double c,
                               double m_fraction = 0.5,
                               double alpha_fraction = 0.5);

// Throws std::invalid_argument if any RecurrencePlan invariant fails for p.
void validate_plan(const ModelParams& p, const RecurrencePlan& plan);

// Right-hand side C_m * c * alpha^{m+1} * (x^{-m} + (1-x)^{-m}) + 1.
double bound_exp_moment(const RecurrencePlan& plan, double x);

// Two variants of the companion bound on E_x of the accumulated X_s^{-m-1}
// up to tau. AsStated carries the factor c*alpha^{m+1}; AsProved is the
// conservative form without it:
//   AsStated:  C_m * c * alpha^{m+1} * (x^{-m} + (1-x)^{-m})
//   AsProved:  C_m * (x^{-m} + (1-x)^{-m})
// Only AsProved is certified by the planner; AsStated is evaluated for
// side-by-side reporting.
enum class FunctionalBound { AsStated, AsProved };
double bound_additive_functional(const RecurrencePlan& plan, double x,
                                 FunctionalBound variant);

// Admissible kappa upper end in distance-to-endpoint coordinates.
double boundary_kappa_max(const ModelParams& p, int endpoint);

// kappa = kappa_fraction * kappa_max, b0 = r - (a+b) kappa, and
// n = 2 b0/epsilon^2 - 1 (the closed upper end of the admissible interval,
// which gives the tightest probability bound). Throws FellerViolated or
// InvalidFraction. plan_boundary(p, 1, f) equals plan_boundary(p.swapped(), 0, f)
// field-by-field.
BoundaryPlan plan_boundary(const ModelParams& p, int endpoint,
                           double kappa_fraction = 0.5);

// Throws std::invalid_argument if any BoundaryPlan invariant fails for p.
void validate_plan(const ModelParams& p, const BoundaryPlan& plan);

// Chebyshev-type bound min(1, beta^n * d^{-n}) on the probability that the
// process started at distance d from the certified endpoint descends to
// distance beta before its distance exceeds kappa. Requires
// 0 < beta < d < 1 and beta < kappa.
double bound_hit_probability(const BoundaryPlan& plan, double d, double beta);

}  // namespace wfrec
