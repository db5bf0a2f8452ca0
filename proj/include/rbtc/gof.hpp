// SPDX-License-Identifier: Apache-2.0
#ifndef RBTC_GOF_HPP
#define RBTC_GOF_HPP

#include <functional>
#include <limits>

#include "rbtc/data_sample.hpp"

namespace rbtc {

using CdfFn = std::function<double(double)>;

struct GofReport {
  double ks = 0.0;   // Kolmogorov-Smirnov sup distance
  double ad = 0.0;   // Anderson-Darling A^2
  double cvm = 0.0;  // Cramer-von Mises W^2
  double p_ks = 0.0;
  double p_ad = 0.0;
  double p_cvm = 0.0;
  double neg2_loglik = std::numeric_limits<double>::quiet_NaN();
  bool clamped = false;  // some F(x_(i)) hit 0 or 1 and was nudged inside
};

// Evaluates the three edf statistics of `data` against the fitted cdf and
// attaches approximate p-values.  The cdf values are clamped to
// [1e-15, 1 - 1e-15] before the log-based statistics; `clamped` records
// whether that fired.  `neg2_loglik` is passed through for reporting.
GofReport gof_report(const CdfFn& cdf, const DataSample& data,
                     double neg2_loglik =
                         std::numeric_limits<double>::quiet_NaN());

// P-value of the Kolmogorov-Smirnov statistic through the finite-n scaling
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) * ks fed into the Kolmogorov limit law.
double ks_pvalue(double ks, std::size_t n);

// P-value of A^2 from the two-branch polynomial approximation to the
// asymptotic Anderson-Darling distribution (switch at z = 2).
double ad_pvalue(double a2);

// Asymptotic Cramer-von Mises cdf V(z), a Bessel-K_{1/4} series with
// all-positive terms; K_{1/4} is evaluated by adaptive quadrature of its
// cosh integral representation.  cvm_pvalue(z) = 1 - V(z).
double cvm_asymptotic_cdf(double z);
double cvm_pvalue(double w2);

}  // namespace rbtc

#endif  // RBTC_GOF_HPP
