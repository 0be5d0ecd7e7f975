#pragma once

#include "wfrec/errors.hpp"

namespace wfrec {

// Diffusion on (0,1):
//
//   dX_t = [a - (a+b) X_t] dt + epsilon * sqrt(X_t (1 - X_t)) dW_t
//
// a pulls toward 1, b pulls toward 0, epsilon scales the noise. The process
// stays inside (0,1) whenever min(a,b) > epsilon^2/2 (strict).
struct ModelParams {
    double a;
    double b;
    double epsilon;

    ModelParams(double a_, double b_, double epsilon_);

    double min_rate() const { return a < b ? a : b; }

    // Same dynamics viewed through x -> 1-x: the roles of the rates swap.
    ModelParams swapped() const { return ModelParams(b, a, epsilon); }
};

// Test functions used by the drift analysis:
//   LowerEnd   V(t,x) = e^{ct} x^{-m}         (blows up at 0)
//   UpperEnd   V(t,x) = e^{ct} (1-x)^{-m}     (blows up at 1)
//   Boundary   V(x)   = x^{-n}                (time-independent, c = 0)
enum class LyapunovKind { LowerEnd, UpperEnd, Boundary };

struct LyapunovSpec {
    LyapunovKind kind;
    double m_or_n;  // exponent, > 0 (0 allowed for LowerEnd/UpperEnd degenerate checks)
    double c;       // exponential rate, >= 0; must be 0 for Boundary

    LyapunovSpec(LyapunovKind kind_, double m_or_n_, double c_);
};

// Strict inequality min(a,b) > epsilon^2/2.
bool feller_satisfied(const ModelParams& p);

// min(a,b) - epsilon^2/2 (positive iff the condition holds).
double feller_margin(const ModelParams& p);

// B(x) = a - (a+b) x.
double drift(const ModelParams& p, double x);

// epsilon * sqrt(x (1-x)); exactly 0 at both endpoints. Throws
// std::domain_error outside [0,1].
double diffusion(const ModelParams& p, double x);

// V itself, for oracles and scans.
double lyapunov_value(const LyapunovSpec& spec, double t, double x);

// Generator with the time derivative included,
//   A V = dV/dt + B(x) V' + (epsilon^2/2) x(1-x) V'',
// evaluated through the grouped closed forms:
//   LowerEnd: e^{ct} x^{-m-1} [ -ma + e2 m(m+1)/2 + (c + m(a+b) - e2 m(m+1)/2) x ]
//   UpperEnd: the LowerEnd form at distance 1-x with a and b swapped
//   Boundary: -n B(x) x^{-n-1} + (n(n+1) e2/2) x(1-x) x^{-n-2}
// where e2 = epsilon^2. Throws std::domain_error at x in {0,1}.
double generator_apply(const ModelParams& p, const LyapunovSpec& spec, double t,
                       double x);

// Independent check of generator_apply: central finite differences for
// dV/dt, V', V'' assembled into the same A V. The stencil is evaluated in
// extended precision internally so that the h^-2 round-off amplification
// stays far below the h^2 truncation error at the default h = 1e-5.
// Requires the x-stencil to stay inside (0,1).
double generator_apply_fd(const ModelParams& p, const LyapunovSpec& spec, double t,
                          double x, double h = 1e-5);

// Density of the invariant law on (0,1):
//   pi(x) = x^{p-1} (1-x)^{q-1} / Beta(p,q),  p = 2a/epsilon^2, q = 2b/epsilon^2,
// obtained by solving the stationary forward equation
// 0 = -(B pi)' + (epsilon^2/2)(x(1-x) pi)''. Requires feller_satisfied
// (throws FellerViolated otherwise) and 0 < x < 1 (std::domain_error).
double stationary_density(const ModelParams& p, double x);

// Integral of stationary_density over [lo, hi] by adaptive quadrature.
double stationary_mass(const ModelParams& p, double lo, double hi,
                       double abs_tol = 1e-12);

}  // namespace wfrec
