#include "wfrec/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace wfrec {
namespace {

struct Node {
    double x, w;
};

// 15-point Gauss-Legendre rule on [-1, 1] (exact for polynomials up to
// degree 29).
constexpr Node kGl15[15] = {
    {-0.98799251802048538, 0.030753241996118647},
    {-0.93727339240070595, 0.070366047488108069},
    {-0.84820658341042721, 0.10715922046717177},
    {-0.72441773136017007, 0.13957067792615391},
    {-0.57097217260853883, 0.16626920581699378},
    {-0.39415134707756339, 0.18616100001556188},
    {-0.20119409399743451, 0.19843148532711125},
    {0, 0.2025782419255609},
    {0.20119409399743451, 0.19843148532711125},
    {0.39415134707756339, 0.18616100001556188},
    {0.57097217260853883, 0.16626920581699378},
    {0.72441773136017007, 0.13957067792615391},
    {0.84820658341042721, 0.10715922046717177},
    {0.93727339240070595, 0.070366047488108069},
    {0.98799251802048538, 0.030753241996118647},
};

double gl15(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (const Node& n : kGl15) acc += n.w * f(mid + half * n.x);
    return acc * half;
}

double adapt(const std::function<double(double)>& f, double lo, double hi,
             double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double left = gl15(f, lo, mid);
    const double right = gl15(f, mid, hi);
    const double two = left + right;
    if (std::abs(two - whole) <= tol || depth <= 0) return two;
    return adapt(f, lo, mid, left, 0.5 * tol, depth - 1) +
           adapt(f, mid, hi, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol, int max_depth) {
    if (!(lo < hi)) throw std::invalid_argument("integrate: requires lo < hi");
    if (!(abs_tol > 0)) throw std::invalid_argument("integrate: abs_tol must be > 0");
    return adapt(f, lo, hi, gl15(f, lo, hi), abs_tol, max_depth);
}

}  // namespace wfrec
