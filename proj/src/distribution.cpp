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
#include "rbtc/distribution.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "rbtc/quadrature.hpp"
#include "rbtc/special_fn.hpp"

namespace rbtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this exponent the A*e^t term dominates the density factor by ~1e13
// and the direct 1 - p - p*s form starts to lose digits.
constexpr double kLogFactorSwitch = 30.0;
// exp overflows just above 709.78.
constexpr double kExpOverflow = 700.0;

double check_x(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("rbtc: support is x > 0 (got x = " +
                            std::to_string(x) + ")");
  }
  return x;
}

// s = omega * (1 - e^t) for t = x^kappa, routed through expm1 for small t
// and through exp(t + log omega) when e^t alone would overflow; -inf when
// omega * e^t exceeds the double range.
double s_of_t(const RbtcParams& params, double t) {
  if (t <= kExpOverflow) return -params.omega * std::expm1(t);
  const double wet = std::exp(t + std::log(params.omega));
  return params.omega - wet;
}

double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Solves w + log(-w) = L for w <= -1 by Newton from the asymptotic start
// w0 = L - log(-L).  Used only deep in the left tail (L < -700) where the
// iteration is very well conditioned.
double lower_branch_from_log(double L) {
  double w = L - std::log(-L);
  for (int i = 0; i < 32; ++i) {
    const double g = w + std::log(-w) - L;
    const double gp = 1.0 + 1.0 / w;
    const double step = g / gp;
    w -= step;
    if (std::fabs(step) < 1e-15 * std::fabs(w)) break;
  }
  return w;
}

}  // namespace

RbtcParams::RbtcParams(double omega_, double kappa_, double p_)
    : omega(omega_), kappa(kappa_), p(p_) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::domain_error("rbtc: omega must be positive and finite");
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::domain_error("rbtc: kappa must be positive and finite");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("rbtc: p must lie in [0, 1]");
  }
}

double cdf(const RbtcParams& params, double x) {
  check_x(x);
  const double t = std::pow(x, params.kappa);
  const double s = s_of_t(params, t);
  if (s == -kInf) return 1.0;
  return -std::expm1(s) + params.p * s * std::exp(s);
}

double survival(const RbtcParams& params, double x) {
  const double ls = log_survival(params, x);
  return ls == -kInf ? 0.0 : std::exp(ls);
}

double log_survival(const RbtcParams& params, double x) {
  check_x(x);
  const double t = std::pow(x, params.kappa);
  const double s = s_of_t(params, t);
  if (s == -kInf) return -kInf;
  return s + std::log1p(-params.p * s);
}

double log_cdf(const RbtcParams& params, double x) {
  check_x(x);
  const double t = std::pow(x, params.kappa);
  const double s = s_of_t(params, t);
  if (s == -kInf) return 0.0;
  if (s < -37.0) {
    // F is within ~1e-16 of 1; go through the survival side.
    return log1mexp(s + std::log1p(-params.p * s));
  }
  // F = e^s * (e^-s - 1 + p s); the bracket is >= -s(1-p) >= 0.
  const double bracket = std::expm1(-s) + params.p * s;
  if (bracket <= 0.0) return -kInf;
  return s + std::log(bracket);
}

double log_pdf(const RbtcParams& params, double x) {
  check_x(x);
  const double t = std::pow(x, params.kappa);
  const double lead = std::log(params.omega) + std::log(params.kappa) +
                      (params.kappa - 1.0) * std::log(x);
  if (t <= kLogFactorSwitch) {
    const double s = -params.omega * std::expm1(t);
    const double factor = 1.0 - params.p - params.p * s;
    if (!(factor > 0.0)) return -kInf;
    return lead + s + t + std::log(factor);
  }
  // Large t: the factor is A e^t + B with A = p*omega, B = 1 - p - p*omega.
  const double st = t + s_of_t(params, t);  // s + t, -inf on overflow
  double log_factor;
  if (params.p == 0.0) {
    log_factor = 0.0;
  } else {
    const double a = params.p * params.omega;
    const double b = 1.0 - params.p - a;
    const double la = t + std::log(a);
    if (b > 0.0) {
      log_factor = logaddexp(la, std::log(b));
    } else {
      // |b| < a, so the correction stays inside log1p's domain.
      log_factor = la + std::log1p(b * std::exp(-t) / a);
    }
  }
  if (st == -kInf) return -kInf;
  return lead + st + log_factor;
}

double pdf(const RbtcParams& params, double x) {
  check_x(x);
  const double t = std::pow(x, params.kappa);
  if (t <= kExpOverflow) {
    const double s = -params.omega * std::expm1(t);
    const double factor = 1.0 - params.p - params.p * s;
    const double st = s + t;
    if (std::isfinite(s) && std::isfinite(factor) && st > -kExpOverflow) {
      return params.omega * params.kappa * std::pow(x, params.kappa - 1.0) *
             std::exp(st) * factor;
    }
  }
  const double lp = log_pdf(params, x);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

double hazard(const RbtcParams& params, double x) {
  check_x(x);
  const double t = std::pow(x, params.kappa);
  const double chen_part =
      params.omega * params.kappa * std::pow(x, params.kappa - 1.0);
  if (t > kExpOverflow) return kInf;
  const double et = std::exp(t);
  // (1 - p - p s) / (1 - p s) = (B + A e^t) / (C + A e^t).
  const double a = params.p * params.omega;
  const double num = 1.0 - params.p - a + a * et;
  const double den = 1.0 - a + a * et;
  double ratio = num / den;
  if (!std::isfinite(num) || !std::isfinite(den)) ratio = 1.0;
  return chen_part * et * ratio;
}

double quantile(const RbtcParams& params, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("rbtc: quantile requires 0 < u < 1");
  }
  const double p = params.p;
  double s;
  if (p < 1e-12) {
    // Degenerate limit: the W argument underflows and the distribution is
    // Chen to within the round-trip tolerance.
    s = std::log1p(-u);
  } else {
    // (s - 1/p) e^(s - 1/p) = (u - 1) / (p e^(1/p)); the right side stays
    // inside (-1/e, 0) because 1/p + log p >= 1 on (0, 1].
    const double L = std::log1p(-u) - std::log(p) - 1.0 / p;
    if (L > -kExpOverflow) {
      const double z = -std::exp(L);
      const double v = lambert_w(z, WBranch::MinusOne);
      s = v + 1.0 / p;
    } else {
      // Reconstruct s = log1p(-u) - log(p * (-w)) from the log-domain
      // solve; the product p * (-w) is ~1, so no cancellation.
      const double w = lower_branch_from_log(L);
      s = std::log1p(-u) - std::log(p * (-w));
    }
    if (s > 0.0) s = 0.0;
  }
  const double t = std::log1p(-s / params.omega);
  return std::pow(t, 1.0 / params.kappa);
}

double median(const RbtcParams& params) { return quantile(params, 0.5); }

namespace {

// Exponent t_max such that the tail mass above x = t_max^(1/kappa) is below
// 1e-14: solve s + log1p(-p s) = log(1e-14) by two fixed-point sweeps.
double upper_cutoff_t(const RbtcParams& params) {
  const double target = std::log(1e-14);
  double s = target;
  for (int i = 0; i < 3; ++i) s = target - std::log1p(-params.p * s);
  return std::log1p(-s / params.omega);
}

}  // namespace

MomentResult raw_moment(const RbtcParams& params, int r,
                        const MomentSeriesConfig& config) {
  if (r < 1) throw std::invalid_argument("raw_moment: order must be >= 1");
  const double rk = static_cast<double>(r) / params.kappa;
  const double t_max = upper_cutoff_t(params);
  const double omega = params.omega;
  const double p = params.p;
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double s = -omega * std::expm1(t);
    return std::pow(t, rk) * omega * std::exp(s + t) *
           (1.0 - p - p * s);
  };
  const QuadResult q = integrate(integrand, 0.0, t_max,
                                 config.quadrature_abs_tol, config.max_subdiv);
  MomentResult out;
  out.value = q.value;
  out.error_estimate = q.error;
  out.converged =
      q.error <= std::max(config.quadrature_abs_tol,
                          1e-12 * std::fabs(q.value));
  return out;
}

namespace {

// J(i, m) = int_omega^inf (log t)^i e^-t t^m dt.  The upper limit grows
// with i so the truncated tail stays below ~1e-300 of the integrand scale.
double tail_log_integral(double omega, int i, int m,
                         const MomentSeriesConfig& config) {
  const double upper = omega + 60.0 + 8.0 * i;
  auto integrand = [&](double t) {
    return std::pow(std::log(t), i) * std::exp(-t) * std::pow(t, m);
  };
  return integrate(integrand, omega, upper, config.quadrature_abs_tol,
                   config.max_subdiv)
      .value;
}

}  // namespace

MomentSeriesResult moment_series(const RbtcParams& params, int r,
                                 const MomentSeriesConfig& config) {
  if (r < 1) {
    throw std::invalid_argument("moment_series: order must be >= 1");
  }
  if (std::fabs(params.omega - 1.0) < 1e-12) {
    throw std::invalid_argument(
        "moment_series: undefined at omega = 1 (log omega vanishes)");
  }
  using cd = std::complex<double>;
  const double omega = params.omega;
  const double p = params.p;
  const double nu = static_cast<double>(r) - params.kappa;
  const double a = -std::log(omega);  // negative when omega > 1

  MomentSeriesResult out;
  cd sum = 0.0;
  double binom = 1.0;  // C(nu, i), updated multiplicatively
  int small_streak = 0;
  int i = 0;
  for (; i < config.max_terms; ++i) {
    if (i > 0) binom *= (nu - (i - 1)) / static_cast<double>(i);
    cd term = 0.0;
    if (binom != 0.0) {
      const cd power = std::pow(cd(a, 0.0), cd(nu - i, 0.0));
      const double j0 = tail_log_integral(omega, i, 0, config);
      const double j1 = tail_log_integral(omega, i, 1, config);
      term = binom * power *
             cd((1.0 - p * omega - p) * j0 + p * j1, 0.0);
    }
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
      ++i;  // the running sum left the representable range: diverged
      break;
    }
    const double scale = std::max(1.0, std::abs(sum));
    if (std::abs(term) < config.term_tolerance * scale) {
      ++small_streak;
      if (small_streak >= 2) {
        ++i;
        out.converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
  }
  const cd value = std::exp(omega) * sum;
  out.value = value.real();
  out.imag_magnitude = std::fabs(value.imag());
  out.terms_used = i;
  const MomentResult quad = raw_moment(params, r, config);
  out.quadrature_value = quad.value;
  out.ratio = quad.value != 0.0
                  ? out.value / quad.value
                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace rbtc
