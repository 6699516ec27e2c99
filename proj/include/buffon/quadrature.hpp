#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace buffon {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod over [breaks.front(), breaks.back()], one panel per
/// pair of consecutive break points. `rel_tol` is the per-panel target handed
/// to the Kronrod recursion. Throws QuadratureError when the summed
/// error estimate exceeds `abs_tol`.
template <typename F>
QuadratureResult integrate_piecewise(F &&f, std::vector<double> breaks, double abs_tol,
                                     unsigned max_depth = 10, double rel_tol = 1e-11) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    if (!(hi > lo))
      continue;
    double err = 0.0;
    total.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, lo, hi, max_depth, rel_tol, &err);
    total.error += err;
  }
  if (!(total.error <= abs_tol))
    throw QuadratureError("adaptive quadrature did not converge", total.error);
  return total;
}

} // namespace buffon
