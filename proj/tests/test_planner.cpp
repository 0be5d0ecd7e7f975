#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "wfrec/errors.hpp"
#include "wfrec/planner.hpp"

using namespace wfrec;

namespace {
ModelParams unit_model() { return ModelParams(1.0, 1.0, 1.0); }
}  // namespace

TEST_CASE("recurrence plan: worked defaults") {
    // a=b=1, eps=1, c=1: m_max = 1, m = 1/2, g = 1/2 - 3/8 = 1/8, C = 16,
    // alpha_max = (1/8) / (2 (1 + 2*(1/2))) = 1/32, alpha = 1/64.
    const RecurrencePlan plan = plan_recurrence(unit_model(), 1.0);
    CHECK(plan.m == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(plan.g_m == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(plan.C_m == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(plan.alpha == doctest::Approx(0.015625).epsilon(1e-15));
    CHECK(plan.c == 1.0);
    CHECK_NOTHROW(validate_plan(unit_model(), plan));

    CHECK(recurrence_m_max(unit_model()) == doctest::Approx(1.0));
    CHECK(recurrence_margin(unit_model(), 0.5) == doctest::Approx(0.125));
    CHECK(recurrence_alpha_max(unit_model(), 1.0, 0.5) ==
          doctest::Approx(0.03125).epsilon(1e-15));
}

TEST_CASE("recurrence plan: second worked example") {
    // a=2, b=3, eps=1, c=1/2: m_max = 3, m = 3/2, q = 15/8,
    // g = 2(3/2) - 15/8 = 9/8, C = 16/9, alpha_max = (9/8)/(2(1/2 + 15/2))
    // = 9/128, alpha = 9/256.
    const ModelParams p(2.0, 3.0, 1.0);
    const RecurrencePlan plan = plan_recurrence(p, 0.5);
    CHECK(plan.m == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(plan.g_m == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(plan.C_m == doctest::Approx(1.7777777777777777).epsilon(1e-15));
    CHECK(plan.alpha == doctest::Approx(0.03515625).epsilon(1e-15));
    CHECK_NOTHROW(validate_plan(p, plan));
}

TEST_CASE("planner rejects bad inputs") {
    CHECK_THROWS_AS(plan_recurrence(ModelParams(0.5, 1.0, 1.0), 1.0),
                    FellerViolated);
    CHECK_THROWS_AS(plan_recurrence(unit_model(), 1.0, 0.0, 0.5),
                    InvalidFraction);
    CHECK_THROWS_AS(plan_recurrence(unit_model(), 1.0, 1.0, 0.5),
                    InvalidFraction);
    CHECK_THROWS_AS(plan_recurrence(unit_model(), 1.0, 0.5, 0.0),
                    InvalidFraction);
    CHECK_THROWS_AS(plan_recurrence(unit_model(), 1.0, 0.5, 1.0),
                    InvalidFraction);
    CHECK_THROWS_AS(plan_recurrence(unit_model(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(plan_boundary(unit_model(), 2), std::invalid_argument);
    CHECK_THROWS_AS(plan_boundary(ModelParams(0.5, 1.0, 1.0), 0),
                    FellerViolated);
    CHECK_THROWS_AS(plan_boundary(unit_model(), 0, 0.0), InvalidFraction);
}

TEST_CASE("validate_plan catches each violated invariant") {
    const ModelParams p = unit_model();
    const RecurrencePlan good = plan_recurrence(p, 1.0);
    RecurrencePlan bad = good;
    bad.m = 1.5;  // above m_max = 1
    CHECK_THROWS_AS(validate_plan(p, bad), std::invalid_argument);
    bad = good;
    bad.alpha = 0.04;  // above alpha_max = 1/32
    CHECK_THROWS_AS(validate_plan(p, bad), std::invalid_argument);
    bad = good;
    bad.C_m = 15.0;  // inconsistent with 2/g_m
    CHECK_THROWS_AS(validate_plan(p, bad), std::invalid_argument);
    bad = good;
    bad.g_m = 0.2;  // inconsistent with min(a,b) m - e2 m(m+1)/2
    CHECK_THROWS_AS(validate_plan(p, bad), std::invalid_argument);

    const BoundaryPlan bgood = plan_boundary(p, 0);
    BoundaryPlan bbad = bgood;
    bbad.n = 0.75;  // above 2 b0/e2 - 1 = 1/2
    CHECK_THROWS_AS(validate_plan(p, bbad), std::invalid_argument);
    bbad = bgood;
    bbad.kappa = 0.3;  // above kappa_max = 1/4
    CHECK_THROWS_AS(validate_plan(p, bbad), std::invalid_argument);
}

TEST_CASE("alpha shrinks as the exponential rate grows") {
    const ModelParams p = unit_model();
    const double a1 = recurrence_alpha_max(p, 0.5, 0.5);
    const double a2 = recurrence_alpha_max(p, 1.0, 0.5);
    const double a3 = recurrence_alpha_max(p, 4.0, 0.5);
    CHECK(a1 > a2);
    CHECK(a2 > a3);
    CHECK(a3 > 0.0);
}

TEST_CASE("boundary plan: worked defaults and symmetry") {
    // a=b=1, eps=1, endpoint 0: kappa_max = (1 - 1/2)/2 = 1/4, kappa = 1/8,
    // b0 = 1 - 2/8 = 3/4, n = 2(3/4) - 1 = 1/2.
    const BoundaryPlan plan = plan_boundary(unit_model(), 0);
    CHECK(plan.kappa == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(plan.b0 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(plan.n == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(plan.endpoint == 0);
    CHECK(boundary_kappa_max(unit_model(), 0) == doctest::Approx(0.25));
    CHECK_NOTHROW(validate_plan(unit_model(), plan));

    // Endpoint 1 of p is endpoint 0 of the swapped model, field by field.
    const ModelParams p(2.0, 3.0, 1.2);
    const BoundaryPlan e1 = plan_boundary(p, 1, 0.3);
    const BoundaryPlan e0s = plan_boundary(p.swapped(), 0, 0.3);
    CHECK(e1.kappa == e0s.kappa);
    CHECK(e1.b0 == e0s.b0);
    CHECK(e1.n == e0s.n);
    CHECK(e1.endpoint == 1);
    CHECK(e0s.endpoint == 0);
}

TEST_CASE("bound values: frozen oracles") {
    const RecurrencePlan plan = plan_recurrence(unit_model(), 1.0);
    // 16 * 1 * (1/64)^{3/2} * (0.01^{-1/2} + 0.99^{-1/2}) + 1
    CHECK(bound_exp_moment(plan, 0.01) ==
          doctest::Approx(1.3439074317268503).epsilon(1e-15));
    CHECK(bound_additive_functional(plan, 0.01, FunctionalBound::AsProved) ==
          doctest::Approx(176.08060504414740).epsilon(1e-15));
    CHECK(bound_additive_functional(plan, 0.01, FunctionalBound::AsStated) ==
          doctest::Approx(0.34390743172685038).epsilon(1e-15));
    // The stated variant is the proved one scaled by c alpha^{m+1}.
    const double ratio =
        bound_additive_functional(plan, 0.3, FunctionalBound::AsStated) /
        bound_additive_functional(plan, 0.3, FunctionalBound::AsProved);
    CHECK(ratio == doctest::Approx(plan.c * std::pow(plan.alpha, plan.m + 1.0))
                       .epsilon(1e-14));
    CHECK_THROWS_AS(bound_exp_moment(plan, 0.0), std::domain_error);
    CHECK_THROWS_AS(bound_exp_moment(plan, 1.0), std::domain_error);
}

TEST_CASE("hitting bound: frozen oracle and guards") {
    const BoundaryPlan plan = plan_boundary(unit_model(), 0);
    // (beta/d)^n = (0.01/0.1)^{1/2} = 10^{-1/2}.
    CHECK(bound_hit_probability(plan, 0.1, 0.01) ==
          doctest::Approx(0.31622776601683794).epsilon(1e-15));
    // Valid arguments keep beta < d, so the bound stays below 1.
    CHECK(bound_hit_probability(plan, 0.0101, 0.01) < 1.0);
    CHECK(bound_hit_probability(plan, 0.011, 0.01) ==
          doctest::Approx(std::pow(0.01 / 0.011, 0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(bound_hit_probability(plan, 0.01, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(bound_hit_probability(plan, 0.1, 0.2),
                    std::invalid_argument);  // beta >= kappa
    CHECK_THROWS_AS(bound_hit_probability(plan, 1.5, 0.01), std::domain_error);
}

TEST_CASE("fuzzed draws satisfy every plan invariant") {
    std::mt19937_64 rng(20260816);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int checked = 0;
    while (checked < 1000) {
        const double a = 0.1 + 4.9 * unif(rng);
        const double b = 0.1 + 4.9 * unif(rng);
        const double eps = 0.1 + 1.9 * unif(rng);
        const ModelParams p(a, b, eps);
        if (!feller_satisfied(p)) continue;
        const double c = 0.1 + 3.0 * unif(rng);
        const double mf = 0.05 + 0.9 * unif(rng);
        const double af = 0.05 + 0.9 * unif(rng);
        const double kf = 0.05 + 0.9 * unif(rng);

        const RecurrencePlan plan = plan_recurrence(p, c, mf, af);
        CHECK_NOTHROW(validate_plan(p, plan));
        CHECK(plan.alpha < 0.5);
        CHECK(plan.alpha > 0.0);
        CHECK(plan.g_m > 0.0);
        CHECK(plan.C_m * plan.g_m == doctest::Approx(2.0).epsilon(1e-12));

        for (int endpoint : {0, 1}) {
            const BoundaryPlan bp = plan_boundary(p, endpoint, kf);
            CHECK_NOTHROW(validate_plan(p, bp));
            CHECK(bp.kappa > 0.0);
            CHECK(bp.kappa < 1.0);
            CHECK(bp.b0 > eps * eps / 2.0);
            CHECK(bp.n > 0.0);
        }
        ++checked;
    }
}
