#include "wfrec/planner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wfrec {
namespace {

void require_fraction(double f, const char* name) {
    if (!(f > 0.0 && f < 1.0))
        throw InvalidFraction(std::string(name) + " must lie strictly in (0,1), got " +
                              std::to_string(f));
}

void require_feller(const ModelParams& p, const char* who) {
    if (!feller_satisfied(p))
        throw FellerViolated(std::string(who) + ": requires min(a,b) > epsilon^2/2 " +
                             "(margin " + std::to_string(feller_margin(p)) + ")");
}

double endpoint_rate(const ModelParams& p, int endpoint) {
    if (endpoint != 0 && endpoint != 1)
        throw std::invalid_argument("endpoint must be 0 or 1");
    return endpoint == 0 ? p.a : p.b;
}

}  // namespace

double recurrence_m_max(const ModelParams& p) {
    return 2.0 * p.min_rate() / (p.epsilon * p.epsilon) - 1.0;
}

double recurrence_margin(const ModelParams& p, double m) {
    return p.min_rate() * m - p.epsilon * p.epsilon * m * (m + 1.0) / 2.0;
}

double recurrence_alpha_max(const ModelParams& p, double c, double m) {
    return recurrence_margin(p, m) / (2.0 * (c + (p.a + p.b) * m));
}

RecurrencePlan plan_recurrence(const ModelParams& p, double c, double m_fraction,
                               double alpha_fraction) {
    require_feller(p, "plan_recurrence");
    if (!(c > 0.0)) throw std::invalid_argument("plan_recurrence: c must be > 0");
    require_fraction(m_fraction, "m_fraction");
    require_fraction(alpha_fraction, "alpha_fraction");

    RecurrencePlan plan;
    plan.c = c;
    plan.m = m_fraction * recurrence_m_max(p);
    plan.g_m = recurrence_margin(p, plan.m);
    plan.alpha = alpha_fraction * recurrence_alpha_max(p, c, plan.m);
    plan.C_m = 2.0 / plan.g_m;
    validate_plan(p, plan);
    return plan;
}

void validate_plan(const ModelParams& p, const RecurrencePlan& plan) {
    const auto fail = [](const std::string& msg) {
        throw std::invalid_argument("RecurrencePlan: " + msg);
    };
    if (!(plan.c > 0.0)) fail("c must be > 0");
    if (!(plan.m > 0.0 && plan.m < recurrence_m_max(p)))
        fail("m outside (0, 2 min(a,b)/epsilon^2 - 1)");
    if (!(plan.g_m > 0.0)) fail("g_m must be > 0");
    const double expected_g = recurrence_margin(p, plan.m);
    if (std::abs(plan.g_m - expected_g) > 1e-12 * std::max(1.0, std::abs(expected_g)))
        fail("g_m inconsistent with m");
    if (!(plan.alpha > 0.0 && plan.alpha < recurrence_alpha_max(p, plan.c, plan.m)))
        fail("alpha outside (0, g_m / (2 (c + (a+b) m)))");
    if (!(plan.alpha < 0.5)) fail("alpha must be < 1/2");
    if (std::abs(plan.C_m * plan.g_m - 2.0) > 1e-12) fail("C_m must equal 2/g_m");
}

double bound_exp_moment(const RecurrencePlan& plan, double x) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("bound_exp_moment: x must lie in (0,1)");
    return plan.C_m * plan.c * std::pow(plan.alpha, plan.m + 1.0) *
               (std::pow(x, -plan.m) + std::pow(1.0 - x, -plan.m)) +
           1.0;
}

double bound_additive_functional(const RecurrencePlan& plan, double x,
                                 FunctionalBound variant) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("bound_additive_functional: x must lie in (0,1)");
    const double ends = std::pow(x, -plan.m) + std::pow(1.0 - x, -plan.m);
    switch (variant) {
        case FunctionalBound::AsStated:
            return plan.C_m * plan.c * std::pow(plan.alpha, plan.m + 1.0) * ends;
        case FunctionalBound::AsProved:
            return plan.C_m * ends;
    }
    throw std::logic_error("bound_additive_functional: bad variant");
}

double boundary_kappa_max(const ModelParams& p, int endpoint) {
    const double r = endpoint_rate(p, endpoint);
    return (r - p.epsilon * p.epsilon / 2.0) / (p.a + p.b);
}

BoundaryPlan plan_boundary(const ModelParams& p, int endpoint,
                           double kappa_fraction) {
    const double r = endpoint_rate(p, endpoint);
    if (!(r - p.epsilon * p.epsilon / 2.0 > 0.0))
        throw FellerViolated("plan_boundary: requires endpoint rate > epsilon^2/2");
    require_fraction(kappa_fraction, "kappa_fraction");

    BoundaryPlan plan;
    plan.endpoint = endpoint;
    plan.kappa = kappa_fraction * boundary_kappa_max(p, endpoint);
    plan.b0 = r - (p.a + p.b) * plan.kappa;
    plan.n = 2.0 * plan.b0 / (p.epsilon * p.epsilon) - 1.0;
    validate_plan(p, plan);
    return plan;
}

void validate_plan(const ModelParams& p, const BoundaryPlan& plan) {
    const auto fail = [](const std::string& msg) {
        throw std::invalid_argument("BoundaryPlan: " + msg);
    };
    if (plan.endpoint != 0 && plan.endpoint != 1) fail("endpoint must be 0 or 1");
    const double r = endpoint_rate(p, plan.endpoint);
    if (!(plan.kappa > 0.0 && plan.kappa < boundary_kappa_max(p, plan.endpoint)))
        fail("kappa outside (0, (r - epsilon^2/2)/(a+b))");
    const double expected_b0 = r - (p.a + p.b) * plan.kappa;
    if (std::abs(plan.b0 - expected_b0) > 1e-12 * std::max(1.0, std::abs(expected_b0)))
        fail("b0 inconsistent with kappa");
    if (!(plan.b0 > p.epsilon * p.epsilon / 2.0)) fail("b0 must exceed epsilon^2/2");
    const double n_max = 2.0 * plan.b0 / (p.epsilon * p.epsilon) - 1.0;
    if (!(plan.n > 0.0 && plan.n <= n_max)) fail("n outside (0, 2 b0/epsilon^2 - 1]");
}

double bound_hit_probability(const BoundaryPlan& plan, double d, double beta) {
    if (!(d > 0.0 && d < 1.0))
        throw std::domain_error("bound_hit_probability: d must lie in (0,1)");
    if (!(beta > 0.0 && beta < d))
        throw std::invalid_argument("bound_hit_probability: requires 0 < beta < d");
    if (!(beta < plan.kappa))
        throw std::invalid_argument("bound_hit_probability: requires beta < kappa");
    const double value = std::pow(beta, plan.n) * std::pow(d, -plan.n);
    return value < 1.0 ? value : 1.0;
}

}  // namespace wfrec
