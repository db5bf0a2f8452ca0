// SPDX-License-Identifier: Apache-2.0
#ifndef RBTC_QUADRATURE_HPP
#define RBTC_QUADRATURE_HPP

#include <functional>

namespace rbtc {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // achieved absolute error estimate
  bool converged = false;
  int subdivisions = 0;
};

// Adaptive Gauss-Kronrod (7-15) integration of f over the finite interval
// [a, b].  Bisects the interval with the largest Kronrod error estimate
// until the summed estimate falls below abs_tol or max_subdiv splits have
// been spent; the achieved estimate is reported either way.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double abs_tol = 1e-10, int max_subdiv = 200);

}  // namespace rbtc

#endif  // RBTC_QUADRATURE_HPP
