// SPDX-License-Identifier: Apache-2.0
#ifndef RBTC_OPTIMIZE_HPP
#define RBTC_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace rbtc {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct NelderMeadOptions {
  int max_iterations = 2000;
  double tolerance = 1e-10;   // convergence on simplex diameter
  double initial_step = 0.30; // per-coordinate offset of the start simplex
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex minimization with the standard reflection / expansion /
// contraction / shrink coefficients (1, 2, 0.5, 0.5).  Non-finite objective
// values are treated as +infinity, so hard feasibility walls are handled by
// returning +infinity from `f` rather than throwing.
NelderMeadResult nelder_mead(const ObjectiveFn& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

// Central finite-difference Hessian with per-coordinate step
// h_j = 1e-4 * max(1, |x_j|).  Returned row-major, symmetrized.
std::vector<double> fd_hessian(const ObjectiveFn& f,
                               const std::vector<double>& x);

// Eigenvalues of a symmetric matrix (row-major, dimension n <= 4) by the
// cyclic Jacobi method, ascending.
std::vector<double> sym_eigenvalues(const std::vector<double>& a, int n);

// Inverse of a small (n <= 4) matrix by Gauss-Jordan with partial pivoting.
// Throws std::runtime_error when the matrix is numerically singular.
std::vector<double> invert_matrix(const std::vector<double>& a, int n);

}  // namespace rbtc

#endif  // RBTC_OPTIMIZE_HPP
