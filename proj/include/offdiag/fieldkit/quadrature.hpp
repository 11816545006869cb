#pragma once

#include <functional>

#include "offdiag/fieldkit/grid.hpp"
#include "offdiag/fieldkit/jet.hpp"

namespace offdiag {

/// F(x1, x2, t) = integral of f from t0 to t along every (x1, x2) line.
/// Composite Simpson when the t axis has an odd node count, trapezoid
/// otherwise. F vanishes on the first t node.
Field3 cumulative_time_integral(const Field3& f, const Grid3& grid, double t0);

/// Same rule applied to a single sampled line.
std::vector<double> cumulative_integral_1d(const std::vector<double>& f, double h);

/// Composite 8-point Gauss-Legendre integral of a scalar function.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels);

/// Jet of G(x1, x2, t) = integral_{t0}^{t} g(x1, x2, s) ds from jets of the
/// integrand. Derivatives with a t component come from g directly, pure
/// spatial derivatives are integrated under the integral sign.
Jet time_integral_jet(const std::function<Jet(double s, int order)>& integrand, double t0, double t, int order);

}  // namespace offdiag
