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
#ifndef RBTC_DISTRIBUTION_HPP
#define RBTC_DISTRIBUTION_HPP

namespace rbtc {

// Record-based transmuted Chen distribution on x > 0.  Writing
// t = x^kappa and s = omega * (1 - e^t) <= 0, the cdf is
//   F(x) = 1 - e^s + p * s * e^s,
// the mixture of the first upper record (weight 1-p) and the second upper
// record (weight p) of a Chen(omega, kappa) sequence.
struct RbtcParams {
  double omega;  // Chen scale-like parameter, > 0
  double kappa;  // Chen shape parameter, > 0
  double p;      // second-record mixture weight, in [0, 1]
  // Estimators require p strictly inside (0, 1); the endpoints are allowed
  // here so the Chen (p = 0) and pure second-record (p = 1) reductions can
  // be evaluated directly.
  RbtcParams(double omega_, double kappa_, double p_);
};

double cdf(const RbtcParams& params, double x);
double pdf(const RbtcParams& params, double x);
double log_pdf(const RbtcParams& params, double x);
double survival(const RbtcParams& params, double x);
double hazard(const RbtcParams& params, double x);

// Stable log F and log S companions used by the distance estimators.
double log_cdf(const RbtcParams& params, double x);
double log_survival(const RbtcParams& params, double x);

// Inverse cdf.  Solved in closed form through the lower real branch of the
// Lambert W function; the W argument (u - 1) / (p * e^(1/p)) always lies in
// (-1/e, 0) because 1/p + log p >= 1 on (0, 1].  When that argument
// underflows the log-domain asymptotic is used, and for p < 1e-12 the Chen
// inverse is the correct degenerate limit.  Requires 0 < u < 1.
double quantile(const RbtcParams& params, double u);
double median(const RbtcParams& params);

struct MomentSeriesConfig {
  int max_terms = 40;            // truncation cap for the series diagnostic
  double term_tolerance = 1e-10; // Cauchy criterion on trailing terms
  double quadrature_abs_tol = 1e-10;
  int max_subdiv = 400;
};

struct MomentResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

// r-th raw moment E[X^r] by adaptive quadrature after the substitution
// t = x^kappa, which removes the power-law kink at the origin:
//   E[X^r] = int_0^T t^(r/kappa) * omega * e^(omega(1-e^t)+t)
//            * (1 - p - p*omega*(1 - e^t)) dt,
// with T chosen so the omitted tail mass is below 1e-14.
MomentResult raw_moment(const RbtcParams& params, int r,
                        const MomentSeriesConfig& config = {});

struct MomentSeriesResult {
  double value = 0.0;           // real part of the truncated series
  double imag_magnitude = 0.0;  // size of any imaginary residue
  int terms_used = 0;
  bool converged = false;       // Cauchy criterion met before max_terms
  double quadrature_value = 0.0;
  double ratio = 0.0;           // series value / quadrature value
};

// Diagnostic evaluation of the closed-form moment series
//   E[X^r] = e^omega * sum_i C(r - kappa, i) * (-log omega)^(r-kappa-i)
//            * [(1 - p*omega - p) * J(i, 0) + p * J(i, 1)],
//   J(i, m) = int_omega^inf (log t)^i e^(-t) t^m dt,
// evaluated with complex arithmetic (principal-branch powers) because
// (-log omega) is negative whenever omega > 1.  The series is truncated by
// a Cauchy criterion; `converged` is false when the terms fail to decay,
// and `ratio` compares the truncated value against the quadrature moment.
MomentSeriesResult moment_series(const RbtcParams& params, int r,
                                 const MomentSeriesConfig& config = {});

}  // namespace rbtc

#endif  // RBTC_DISTRIBUTION_HPP
