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
#include "rbtc/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rbtc/quadrature.hpp"
#include "rbtc/special_fn.hpp"

namespace rbtc {

namespace {

constexpr double kClampLo = 1e-15;
constexpr double kClampHi = 1.0 - 1e-15;

}  // namespace

GofReport gof_report(const CdfFn& cdf, const DataSample& data,
                     double neg2_loglik) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("gof_report: empty sample");
  const double dn = static_cast<double>(n);

  std::vector<double> f(n);
  GofReport out;
  for (std::size_t i = 0; i < n; ++i) {
    double v = cdf(data.sorted()[i]);
    if (std::isnan(v)) {
      throw std::invalid_argument("gof_report: cdf returned NaN");
    }
    if (v <= 0.0 || v >= 1.0) {
      out.clamped = true;
      v = std::clamp(v, kClampLo, kClampHi);
    }
    f[i] = v;
  }
  // Fitted cdf values at order statistics must be nondecreasing.
  for (std::size_t i = 1; i < n; ++i) f[i] = std::max(f[i], f[i - 1]);

  double ks = 0.0;
  double ad = 0.0;
  double cvm = 1.0 / (12.0 * dn);
  for (std::size_t i = 0; i < n; ++i) {
    const double rank = static_cast<double>(i + 1);
    ks = std::max(ks, rank / dn - f[i]);
    ks = std::max(ks, f[i] - (rank - 1.0) / dn);
    ad += (2.0 * rank - 1.0) *
          (std::log(f[i]) + std::log1p(-f[n - 1 - i]));
    const double resid = f[i] - (2.0 * rank - 1.0) / (2.0 * dn);
    cvm += resid * resid;
  }
  out.ks = ks;
  out.ad = -dn - ad / dn;
  out.cvm = cvm;
  out.p_ks = ks_pvalue(out.ks, n);
  out.p_ad = ad_pvalue(out.ad);
  out.p_cvm = cvm_pvalue(out.cvm);
  out.neg2_loglik = neg2_loglik;
  return out;
}

double ks_pvalue(double ks, std::size_t n) {
  if (ks <= 0.0) return 1.0;
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_sf((sn + 0.12 + 0.11 / sn) * ks);
}

double ad_pvalue(double a2) {
  if (a2 <= 0.0) return 1.0;
  // Two-branch polynomial fit to the asymptotic A^2 distribution; accurate
  // to a few units in the fourth decimal, which is ample for reporting.
  double cdf_val;
  if (a2 < 2.0) {
    cdf_val = std::exp(-1.2337141 / a2) / std::sqrt(a2) *
              (2.00012 +
               (0.247105 -
                (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * a2) * a2) *
                                 a2) *
                    a2) *
                   a2);
  } else {
    cdf_val = std::exp(-std::exp(
        1.0776 -
        (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * a2) * a2) *
                                  a2) *
                       a2) *
            a2));
  }
  const double p = 1.0 - cdf_val;
  return std::clamp(p, 0.0, 1.0);
}

double cvm_asymptotic_cdf(double z) {
  if (z <= 0.0) return 0.0;
  if (z > 40.0) return 1.0;
  // V(z) = 1/(pi sqrt(z)) * sum_j g_j sqrt(4j+1) exp(-a_j) K_{1/4}(a_j),
  // a_j = (4j+1)^2/(16 z), with positive coefficients
  // g_j = Gamma(j + 1/2) / (Gamma(1/2) j!).
  const double pi = 3.14159265358979323846;
  double sum = 0.0;
  double g = 1.0;  // g_0
  for (int j = 0; j < 24; ++j) {
    if (j > 0) g *= (static_cast<double>(j) - 0.5) / static_cast<double>(j);
    const double fourj1 = 4.0 * j + 1.0;
    const double a = fourj1 * fourj1 / (16.0 * z);
    if (a > 650.0) break;  // e^-2a underflows: the tail is gone
    // K_{1/4}(a) = int_0^inf e^(-a cosh t) cosh(t/4) dt, truncated where
    // the exponent falls ~60 e-folds below its peak.
    const double t_max = std::acosh(std::min((a + 60.0) / a, 1e280));
    auto integrand = [&](double t) {
      return std::exp(-a * (std::cosh(t) - 1.0)) * std::cosh(0.25 * t);
    };
    const double k14 =
        integrate(integrand, 0.0, t_max, 1e-12, 300).value;
    // e^(-a) of the series combines with the e^(+a) factored out of the
    // integrand into the e^(-2a) here.
    const double term = g * std::sqrt(fourj1) * std::exp(-2.0 * a) * k14;
    sum += term;
    if (term < 1e-14 * std::max(sum, 1e-30) && j > 2) break;
  }
  const double v = sum / (pi * std::sqrt(z));
  return std::clamp(v, 0.0, 1.0);
}

double cvm_pvalue(double w2) {
  return std::clamp(1.0 - cvm_asymptotic_cdf(w2), 0.0, 1.0);
}

}  // namespace rbtc
