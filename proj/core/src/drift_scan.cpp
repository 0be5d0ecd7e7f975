#include "wfrec/drift_scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wfrec {
namespace {

// Scan grids start one decade above the default numerical floor (clamp_eps
// 1e-12), where the audited functions are steepest.
constexpr double kScanFloor = 1e-11;

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * (double)i / (double)(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

// Step for the finite-difference cross-check: h must stay well inside (0,1)
// on grids reaching 1e-11, and (h/d)^2 must keep the truncation error below
// the 1e-6 agreement target.
double fd_step(double d) {
    const double room = std::min(d, 1.0 - d);
    return std::min(1e-5, 3e-4 * room);
}

double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

DriftScanReport scan_common(const ModelParams& model, const LyapunovSpec& spec,
                            double threshold, std::size_t grid_size, double t,
                            double rhs_coeff, double rhs_exponent,
                            std::string label) {
    DriftScanReport rep;
    rep.label = std::move(label);
    rep.grid = log_grid(kScanFloor, threshold, grid_size);
    rep.closed_form.reserve(grid_size);
    rep.fd_values.reserve(grid_size);
    rep.required_rhs.reserve(grid_size);
    rep.margins.reserve(grid_size);

    const double ect = std::exp(spec.c * t);
    bool first = true;
    for (double d : rep.grid) {
        const double closed = generator_apply(model, spec, t, d);
        const double fd = generator_apply_fd(model, spec, t, d, fd_step(d));
        const double rhs = rhs_coeff * ect * std::pow(d, rhs_exponent);
        const double margin = rhs - closed;
        rep.closed_form.push_back(closed);
        rep.fd_values.push_back(fd);
        rep.required_rhs.push_back(rhs);
        rep.margins.push_back(margin);
        rep.max_rel_err = std::max(rep.max_rel_err, rel_err(closed, fd));
        if (first || margin < rep.inequality_margin) rep.inequality_margin = margin;
        first = false;
    }
    rep.holds = rep.inequality_margin >= kDriftMarginTolerance;
    return rep;
}

}  // namespace

DriftScanReport scan_recurrence_drift(const ModelParams& p,
                                      const RecurrencePlan& plan,
                                      std::size_t grid_size, bool mirrored,
                                      double t) {
    // Shape only: the scan is the auditor, so deliberately inadmissible
    // plans must be evaluated (and flagged via holds=false), not rejected.
    if (!(plan.m > 0.0 && plan.c >= 0.0 && plan.g_m > 0.0))
        throw std::invalid_argument("scan_recurrence_drift: need m > 0, c >= 0, g_m > 0");
    if (!(plan.alpha > kScanFloor && plan.alpha < 0.5))
        throw std::invalid_argument("scan_recurrence_drift: alpha outside (1e-11, 1/2)");
    // The mirrored audit (upper-end function near 1) is evaluated in the
    // distance coordinate d = 1-x, where it is literally the lower-end audit
    // of the swapped model; this avoids forming 1-x at d ~ 1e-11.
    const ModelParams model = mirrored ? p.swapped() : p;
    const LyapunovSpec spec(LyapunovKind::LowerEnd, plan.m, plan.c);
    return scan_common(model, spec, plan.alpha, grid_size, t,
                       -0.5 * plan.g_m, -plan.m - 1.0,
                       mirrored ? "recurrence_upper_end" : "recurrence_lower_end");
}

DriftScanReport scan_boundary_drift(const ModelParams& p,
                                    const BoundaryPlan& bplan,
                                    std::size_t grid_size) {
    if (bplan.endpoint != 0 && bplan.endpoint != 1)
        throw std::invalid_argument("scan_boundary_drift: endpoint must be 0 or 1");
    if (!(bplan.n > 0.0))
        throw std::invalid_argument("scan_boundary_drift: need n > 0");
    if (!(bplan.kappa > kScanFloor && bplan.kappa < 1.0))
        throw std::invalid_argument("scan_boundary_drift: kappa outside (1e-11, 1)");
    const ModelParams model = bplan.endpoint == 0 ? p : p.swapped();
    const LyapunovSpec spec(LyapunovKind::Boundary, bplan.n, 0.0);
    const double e2 = p.epsilon * p.epsilon;
    return scan_common(model, spec, bplan.kappa, grid_size, 0.0,
                       -bplan.n * (bplan.n + 1.0) * e2 / 2.0, -bplan.n,
                       bplan.endpoint == 0 ? "boundary_endpoint0"
                                           : "boundary_endpoint1");
}

std::tuple<double, double, double> ito_expansion_identity(const ModelParams& p,
                                                          double m, double c,
                                                          double t, double x) {
    const LyapunovSpec spec(LyapunovKind::LowerEnd, m, c);
    const double e2 = p.epsilon * p.epsilon;
    const double ect = std::exp(c * t);
    // Raw generator with hand-written derivatives of V = e^{ct} x^{-m}.
    const double lhs =
        ect * (c * std::pow(x, -m) - drift(p, x) * m * std::pow(x, -m - 1.0) +
               (e2 / 2.0) * x * (1.0 - x) * m * (m + 1.0) * std::pow(x, -m - 2.0));
    const double rhs = generator_apply(p, spec, t, x);
    return {lhs, rhs, std::abs(lhs - rhs)};
}

std::string drift_scan_csv(const DriftScanReport& report) {
    std::string out = "x,closed_form,fd,required_rhs,margin\n";
    char buf[200];
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      report.grid[i], report.closed_form[i], report.fd_values[i],
                      report.required_rhs[i], report.margins[i]);
        out += buf;
    }
    return out;
}

}  // namespace wfrec
