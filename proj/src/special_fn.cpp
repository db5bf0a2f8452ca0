/*
 * Copyright 2026 the rbtc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "rbtc/special_fn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rbtc {

namespace {

constexpr double kNegInvE = -0.36787944117144233;  // -1/e
constexpr int kMaxHalley = 50;

// Series around the branch point z = -1/e in q = +-sqrt(2(ez + 1)):
// w = -1 + q - q^2/3 + 11 q^3/72 - 43 q^4/540 + 769 q^5/17280.
// The sign of q selects the branch (+ principal, - lower).
double branch_point_series(double z, bool principal) {
  double eta = 2.0 * (1.0 + std::exp(1.0) * z);
  if (eta < 0.0) eta = 0.0;  // rounding can push z a hair below -1/e
  double q = std::sqrt(eta);
  if (!principal) q = -q;
  return -1.0 +
         q * (1.0 +
              q * (-1.0 / 3.0 +
                   q * (11.0 / 72.0 +
                        q * (-43.0 / 540.0 + q * (769.0 / 17280.0)))));
}

double initial_guess(double z, WBranch branch) {
  if (branch == WBranch::MinusOne) {
    if (z < -0.25) return branch_point_series(z, false);
    // Asymptotic near 0-: w ~ log(-z) - log(-log(-z)).
    double l = std::log(-z);
    return l - std::log(-l);
  }
  if (z < -0.25) return branch_point_series(z, true);
  if (z < 0.5) {
    // Maclaurin w = z - z^2 + 3/2 z^3 - ...
    return z * (1.0 + z * (-1.0 + z * 1.5));
  }
  if (z < 3.0) return 0.85 * std::log1p(z);
  double l = std::log(z);
  return l - std::log(l);
}

}  // namespace

double lambert_w(double z, WBranch branch) {
  if (std::isnan(z)) throw std::domain_error("lambert_w: z is NaN");
  if (z < kNegInvE) {
    // Tolerate rounding residue just below the branch point.
    if (z > kNegInvE - 1e-15) return -1.0;
    throw std::domain_error("lambert_w: z < -1/e (z = " + std::to_string(z) +
                            ")");
  }
  if (branch == WBranch::MinusOne && z >= 0.0) {
    throw std::domain_error(
        "lambert_w: lower branch requires -1/e <= z < 0");
  }
  if (z == 0.0) return 0.0;

  const bool principal = branch == WBranch::Principal;
  double w = initial_guess(z, branch);
  // So close to the branch point that Halley's denominator degenerates;
  // the series value is already accurate to better than 1e-12 there.
  if (std::fabs(1.0 + std::exp(1.0) * z) < 1e-12) {
    return branch_point_series(z, principal);
  }

  const double tol = 1e-14 * std::max(std::fabs(z), 1e-300);
  for (int iter = 0; iter < kMaxHalley; ++iter) {
    double ew = std::exp(w);
    double f = w * ew - z;
    if (std::fabs(f) <= tol) break;
    double wp1 = w + 1.0;
    double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    double step = f / denom;
    double next = w - step;
    // Keep iterates on the correct side of w = -1.
    if (principal) {
      if (next < -1.0) next = -1.0 + 0.5 * (w + 1.0);
    } else {
      if (next > -1.0) next = -1.0 + 0.5 * (w + 1.0);
    }
    if (next == w) break;
    w = next;
  }
  return w;
}

double log1mexp(double a) {
  if (!(a < 0.0)) {
    throw std::domain_error("log1mexp: argument must be negative");
  }
  constexpr double kLog2 = 0.6931471805599453;
  if (a > -kLog2) return std::log(-std::expm1(a));
  return std::log1p(-std::exp(a));
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  const double x = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(x * j * j);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  double q = 2.0 * sum;
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return q;
}

}  // namespace rbtc
