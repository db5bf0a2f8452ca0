// SPDX-License-Identifier: Apache-2.0
#include "rbtc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rbtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const ObjectiveFn& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isnan(v) ? kInf : v;
}

}  // namespace

NelderMeadResult nelder_mead(const ObjectiveFn& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += options.initial_step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = guarded(f, pts[i]);

  std::vector<std::size_t> order(n + 1);
  NelderMeadResult result;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter,
                            std::fabs(pts[i][j] - pts[best][j]));
      }
    }
    if (diameter < options.tolerance) {
      result.converged = true;
      break;
    }

    // Centroid of all points but the worst.
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> y(n);
      for (std::size_t j = 0; j < n; ++j) {
        y[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
      }
      return y;
    };

    const std::vector<double> reflected = blend(-1.0);
    const double fr = guarded(f, reflected);
    if (fr < fv[best]) {
      const std::vector<double> expanded = blend(-2.0);
      const double fe = guarded(f, expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        fv[worst] = fe;
      } else {
        pts[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second_worst]) {
      pts[worst] = reflected;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const std::vector<double> contracted = blend(outside ? -0.5 : 0.5);
    const double fc = guarded(f, contracted);
    if (fc < std::min(fr, fv[worst])) {
      pts[worst] = contracted;
      fv[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      }
      fv[i] = guarded(f, pts[i]);
    }
  }

  const std::size_t argmin = static_cast<std::size_t>(
      std::min_element(fv.begin(), fv.end()) - fv.begin());
  result.x = pts[argmin];
  result.fx = fv[argmin];
  result.iterations = iter;
  return result;
}

std::vector<double> fd_hessian(const ObjectiveFn& f,
                               const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> h(n);
  for (std::size_t j = 0; j < n; ++j) {
    h[j] = 1e-4 * std::max(1.0, std::fabs(x[j]));
  }
  std::vector<double> hess(n * n, 0.0);
  const double f0 = f(x);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      std::vector<double> y = x;
      double value;
      if (i == j) {
        y[i] = x[i] + h[i];
        const double fp = f(y);
        y[i] = x[i] - h[i];
        const double fm = f(y);
        value = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
      } else {
        y[i] = x[i] + h[i];
        y[j] = x[j] + h[j];
        const double fpp = f(y);
        y[j] = x[j] - h[j];
        const double fpm = f(y);
        y[i] = x[i] - h[i];
        y[j] = x[j] + h[j];
        const double fmp = f(y);
        y[j] = x[j] - h[j];
        const double fmm = f(y);
        value = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      }
      hess[i * n + j] = value;
      hess[j * n + i] = value;
    }
  }
  return hess;
}

std::vector<double> sym_eigenvalues(const std::vector<double>& a, int n) {
  std::vector<double> m = a;
  auto at = [&](int i, int j) -> double& { return m[i * n + j]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off < 1e-30) break;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (at(i, j) == 0.0) continue;
        const double theta = (at(j, j) - at(i, i)) / (2.0 * at(i, j));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) +
                          std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mik = at(i, k);
          const double mjk = at(j, k);
          at(i, k) = c * mik - s * mjk;
          at(j, k) = s * mik + c * mjk;
        }
        for (int k = 0; k < n; ++k) {
          const double mki = at(k, i);
          const double mkj = at(k, j);
          at(k, i) = c * mki - s * mkj;
          at(k, j) = s * mki + c * mkj;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> invert_matrix(const std::vector<double>& a, int n) {
  std::vector<double> m = a;
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(m[r * n + col]) > std::fabs(m[pivot * n + col])) {
        pivot = r;
      }
    }
    if (std::fabs(m[pivot * n + col]) < 1e-300) {
      throw std::runtime_error("invert_matrix: numerically singular");
    }
    if (pivot != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(m[pivot * n + k], m[col * n + k]);
        std::swap(inv[pivot * n + k], inv[col * n + k]);
      }
    }
    const double d = m[col * n + col];
    for (int k = 0; k < n; ++k) {
      m[col * n + k] /= d;
      inv[col * n + k] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = m[r * n + col];
      if (factor == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        m[r * n + k] -= factor * m[col * n + k];
        inv[r * n + k] -= factor * inv[col * n + k];
      }
    }
  }
  return inv;
}

}  // namespace rbtc
