#pragma once

#include <functional>

namespace wfrec {

// Adaptive Gauss-Legendre quadrature: 15-point rule with interval bisection.
// Subdivides until the two-half estimate agrees with the whole-interval
// estimate within the local share of abs_tol. Integrands are evaluated on the
// open interval only (endpoints are never sampled), so mildly singular
// derivatives at the endpoints are fine.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10, int max_depth = 48);

}  // namespace wfrec
