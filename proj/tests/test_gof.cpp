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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rbtc/datasets.hpp"
#include "rbtc/distribution.hpp"
#include "rbtc/gof.hpp"
#include "rbtc/special_fn.hpp"

namespace {

// Straightforward long-double transcription of the three edf statistics,
// kept separate from the library implementation on purpose.
struct RefStats {
  double ks;
  double ad;
  double cvm;
};

RefStats reference_stats(std::vector<double> f) {
  std::sort(f.begin(), f.end());
  const std::size_t n = f.size();
  long double ks = 0.0L;
  long double ad = 0.0L;
  long double cvm = 1.0L / (12.0L * n);
  for (std::size_t i = 0; i < n; ++i) {
    const long double fi = f[i];
    ks = std::max<long double>(
        ks, std::max<long double>((i + 1.0L) / n - fi, fi - (1.0L * i) / n));
    ad += (2.0L * i + 1.0L) *
          (std::log(static_cast<long double>(fi)) + std::log(static_cast<long double>(1.0L - f[n - 1 - i])));
    const long double d = fi - (2.0L * i + 1.0L) / (2.0L * n);
    cvm += d * d;
  }
  ad = -static_cast<long double>(n) - ad / n;
  return {static_cast<double>(ks), static_cast<double>(ad),
          static_cast<double>(cvm)};
}

}  // namespace

TEST_CASE("statistics match a direct transcription on random data") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xs(37);
    for (double& x : xs) x = unif(gen);
    const rbtc::GofReport rep_out = rbtc::gof_report(
        [](double x) { return x; }, rbtc::DataSample(xs));
    const RefStats ref = reference_stats(xs);
    CHECK(rep_out.ks == doctest::Approx(ref.ks).epsilon(1e-13));
    CHECK(rep_out.ad == doctest::Approx(ref.ad).epsilon(1e-12));
    CHECK(rep_out.cvm == doctest::Approx(ref.cvm).epsilon(1e-12));
    CHECK_FALSE(rep_out.clamped);
    CHECK(rep_out.p_ks >= 0.0);
    CHECK(rep_out.p_ks <= 1.0);
  }
}

TEST_CASE("published statistics at the published parameter points") {
  // Evaluating at the rounded parameter estimates printed in the reference
  // comparison must reproduce the printed statistics; no fitting involved.
  const rbtc::DataSample fail = rbtc::load_data("builtin:failure_time");
  const rbtc::RbtcParams fit_fail(0.0837, 0.5628, 0.4424);
  const rbtc::GofReport rf = rbtc::gof_report(
      [&](double x) { return rbtc::cdf(fit_fail, x); }, fail);
  CHECK(std::abs(rf.ks - 0.1477) < 0.002);
  CHECK(std::abs(rf.ad - 0.6191) < 0.01);
  CHECK(std::abs(rf.cvm - 0.0642) < 0.002);
  CHECK(std::abs(rf.p_ks - 0.7217) < 0.05);
  CHECK(std::abs(rf.p_ad - 0.6280) < 0.05);
  CHECK(std::abs(rf.p_cvm - 0.7933) < 0.05);

  const rbtc::DataSample iron = rbtc::load_data("builtin:iron_sheet");
  const rbtc::RbtcParams fit_iron(36.2939, 1.8817, 0.4872);
  const rbtc::GofReport ri = rbtc::gof_report(
      [&](double x) { return rbtc::cdf(fit_iron, x); }, iron);
  CHECK(std::abs(ri.ks - 0.1039) < 0.002);
  CHECK(std::abs(ri.ad - 0.5971) < 0.01);
  CHECK(std::abs(ri.cvm - 0.0909) < 0.002);
  CHECK(std::abs(ri.p_ks - 0.6531) < 0.05);
  CHECK(std::abs(ri.p_ad - 0.6499) < 0.05);
  CHECK(std::abs(ri.p_cvm - 0.6334) < 0.05);
}

TEST_CASE("ks p-value matches the kolmogorov limit with finite-n scaling") {
  const double ks = 0.1477;
  const std::size_t n = 20;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double lambda = (root_n + 0.12 + 0.11 / root_n) * ks;
  CHECK(rbtc::ks_pvalue(ks, n) ==
        doctest::Approx(rbtc::kolmogorov_sf(lambda)).epsilon(1e-14));
  CHECK(rbtc::ks_pvalue(0.0, 50) == 1.0);
  CHECK(rbtc::ks_pvalue(0.99, 50) < 1e-12);
}

TEST_CASE("anderson-darling p-value branches join continuously") {
  // The approximation switches polynomial at A^2 = 2; both branches should
  // agree there to a few parts in a thousand and the curve must decrease.
  const double left = rbtc::ad_pvalue(2.0 - 1e-9);
  const double right = rbtc::ad_pvalue(2.0 + 1e-9);
  CHECK(std::abs(left - right) < 5e-3);
  double prev = 1.0;
  for (double a2 = 0.05; a2 < 8.0; a2 += 0.05) {
    const double p = rbtc::ad_pvalue(a2);
    CHECK(p <= prev + 5e-3);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
  // Spot anchors: P(A^2 > 2.492) ~ 0.05 and P(A^2 > 3.857) ~ 0.01 are the
  // classic upper-tail quantiles of the asymptotic distribution.
  CHECK(rbtc::ad_pvalue(2.492) == doctest::Approx(0.05).epsilon(0.08));
  CHECK(rbtc::ad_pvalue(3.857) == doctest::Approx(0.01).epsilon(0.15));
}

TEST_CASE("cramer-von mises asymptotic cdf") {
  // Classic upper-tail quantiles: P(W^2 > 0.461) ~ 0.05, P(W^2 > 0.743)
  // ~ 0.01 for the asymptotic distribution.
  CHECK(rbtc::cvm_pvalue(0.461) == doctest::Approx(0.05).epsilon(0.05));
  CHECK(rbtc::cvm_pvalue(0.743) == doctest::Approx(0.01).epsilon(0.10));
  // cdf is monotone, 0 at the origin side, 1 far right.
  double prev = 0.0;
  for (double z = 0.02; z < 5.0; z += 0.02) {
    const double v = rbtc::cvm_asymptotic_cdf(z);
    CHECK(v >= prev - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
    prev = v;
  }
  CHECK(rbtc::cvm_asymptotic_cdf(45.0) == 1.0);
  CHECK(rbtc::cvm_pvalue(45.0) == 0.0);
  // Deep left tail, frozen from a 40-digit Bessel-series evaluation.
  CHECK(rbtc::cvm_asymptotic_cdf(0.01) ==
        doctest::Approx(5.86443280987e-6).epsilon(1e-9));
}

TEST_CASE("clamping fires when the cdf saturates") {
  // A fitted cdf that sends the largest observation to exactly 1 triggers
  // the log-statistic guard; the flag must report it.
  const std::vector<double> xs{0.2, 0.4, 0.6, 0.8, 1.0};
  const rbtc::GofReport report = rbtc::gof_report(
      [](double x) { return std::min(1.0, 1.25 * x); },
      rbtc::DataSample(xs));
  CHECK(report.clamped);
  CHECK(std::isfinite(report.ad));
}

TEST_CASE("non-monotone or undefined cdf values are rejected") {
  const std::vector<double> xs{0.2, 0.4, 0.6};
  CHECK_THROWS_AS(
      rbtc::gof_report([](double) { return std::nan(""); },
                       rbtc::DataSample(xs)),
      std::invalid_argument);
}

TEST_CASE("neg2 loglik passes through unchanged") {
  const std::vector<double> xs{0.2, 0.4, 0.6};
  const rbtc::GofReport report =
      rbtc::gof_report([](double x) { return x; }, rbtc::DataSample(xs),
                       123.5);
  CHECK(report.neg2_loglik == 123.5);
}
