#include "wfrec/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wfrec/quadrature.hpp"

namespace wfrec {
namespace {

void require_interior(double x, const char* who) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error(std::string(who) + ": x must lie in (0,1), got " +
                                std::to_string(x));
}

// dt-coefficient of d(e^{ct} d^{-m}) where d is the distance to the lower
// endpoint of a model with rates (a, b). Grouped as
//   e^{ct} d^{-m-1} [ -ma + e2 m(m+1)/2 + (c + m(a+b) - e2 m(m+1)/2) d ].
// UpperEnd reuses this with (b, a) and d = 1-x, which makes the two ends
// bit-identical under the swap by construction.
inline double lower_end_form(double a, double b, double eps, double m, double c,
                             double t, double d) {
    const double e2 = eps * eps;
    const double q = e2 * m * (m + 1.0) / 2.0;
    return std::exp(c * t) * std::pow(d, -m - 1.0) *
           (-m * a + q + (c + m * (a + b) - q) * d);
}

}  // namespace

ModelParams::ModelParams(double a_, double b_, double epsilon_)
    : a(a_), b(b_), epsilon(epsilon_) {
    if (!(a > 0.0) || !(b > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument(
            "ModelParams: a, b, epsilon must all be > 0 (got a=" + std::to_string(a_) +
            ", b=" + std::to_string(b_) + ", epsilon=" + std::to_string(epsilon_) + ")");
}

LyapunovSpec::LyapunovSpec(LyapunovKind kind_, double m_or_n_, double c_)
    : kind(kind_), m_or_n(m_or_n_), c(c_) {
    if (!(m_or_n >= 0.0))
        throw std::invalid_argument("LyapunovSpec: exponent must be >= 0");
    if (!(c >= 0.0)) throw std::invalid_argument("LyapunovSpec: c must be >= 0");
    if (kind == LyapunovKind::Boundary && c != 0.0)
        throw std::invalid_argument("LyapunovSpec: Boundary kind requires c = 0");
}

bool feller_satisfied(const ModelParams& p) { return feller_margin(p) > 0.0; }

double feller_margin(const ModelParams& p) {
    return p.min_rate() - p.epsilon * p.epsilon / 2.0;
}

double drift(const ModelParams& p, double x) { return p.a - (p.a + p.b) * x; }

double diffusion(const ModelParams& p, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("diffusion: x must lie in [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return p.epsilon * std::sqrt(x * (1.0 - x));
}

double lyapunov_value(const LyapunovSpec& spec, double t, double x) {
    require_interior(x, "lyapunov_value");
    switch (spec.kind) {
        case LyapunovKind::LowerEnd:
            return std::exp(spec.c * t) * std::pow(x, -spec.m_or_n);
        case LyapunovKind::UpperEnd:
            return std::exp(spec.c * t) * std::pow(1.0 - x, -spec.m_or_n);
        case LyapunovKind::Boundary:
            return std::pow(x, -spec.m_or_n);
    }
    throw std::logic_error("lyapunov_value: bad kind");
}

double generator_apply(const ModelParams& p, const LyapunovSpec& spec, double t,
                       double x) {
    require_interior(x, "generator_apply");
    switch (spec.kind) {
        case LyapunovKind::LowerEnd:
            return lower_end_form(p.a, p.b, p.epsilon, spec.m_or_n, spec.c, t, x);
        case LyapunovKind::UpperEnd:
            return lower_end_form(p.b, p.a, p.epsilon, spec.m_or_n, spec.c, t,
                                  1.0 - x);
        case LyapunovKind::Boundary: {
            const double n = spec.m_or_n;
            const double e2 = p.epsilon * p.epsilon;
            return -n * drift(p, x) * std::pow(x, -n - 1.0) +
                   (n * (n + 1.0) * e2 / 2.0) * x * (1.0 - x) * std::pow(x, -n - 2.0);
        }
    }
    throw std::logic_error("generator_apply: bad kind");
}

double generator_apply_fd(const ModelParams& p, const LyapunovSpec& spec, double t,
                          double x, double h) {
    require_interior(x, "generator_apply_fd");
    if (!(h > 0.0)) throw std::domain_error("generator_apply_fd: h must be > 0");
    if (!(x - h > 0.0 && x + h < 1.0))
        throw std::domain_error("generator_apply_fd: stencil leaves (0,1)");

    const long double mn = spec.m_or_n;
    const long double c = spec.c;
    const bool upper = spec.kind == LyapunovKind::UpperEnd;
    const bool timed = spec.kind != LyapunovKind::Boundary;
    const auto value = [&](long double tt, long double xx) -> long double {
        const long double d = upper ? 1.0L - xx : xx;
        const long double core = std::pow(d, -mn);
        return timed ? std::exp(c * tt) * core : core;
    };

    const long double hl = h;
    const long double xl = x;
    const long double tl = t;
    const long double v0 = value(tl, xl);
    const long double vxp = value(tl, xl + hl);
    const long double vxm = value(tl, xl - hl);
    const long double vt =
        (value(tl + hl, xl) - value(tl - hl, xl)) / (2.0L * hl);
    const long double vx = (vxp - vxm) / (2.0L * hl);
    const long double vxx = (vxp - 2.0L * v0 + vxm) / (hl * hl);

    const long double bx = (long double)p.a - ((long double)p.a + p.b) * xl;
    const long double e2 = (long double)p.epsilon * p.epsilon;
    return (double)(vt + bx * vx + (e2 / 2.0L) * xl * (1.0L - xl) * vxx);
}

double stationary_density(const ModelParams& p, double x) {
    if (!feller_satisfied(p))
        throw FellerViolated("stationary_density: min(a,b) <= epsilon^2/2");
    require_interior(x, "stationary_density");
    const double e2 = p.epsilon * p.epsilon;
    const double pa = 2.0 * p.a / e2;
    const double qb = 2.0 * p.b / e2;
    const double log_beta =
        std::lgamma(pa) + std::lgamma(qb) - std::lgamma(pa + qb);
    return std::exp((pa - 1.0) * std::log(x) + (qb - 1.0) * std::log1p(-x) -
                    log_beta);
}

double stationary_mass(const ModelParams& p, double lo, double hi,
                       double abs_tol) {
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
        throw std::domain_error("stationary_mass: need 0 <= lo < hi <= 1");
    return integrate([&](double x) { return stationary_density(p, x); }, lo, hi,
                     abs_tol);
}

}  // namespace wfrec
