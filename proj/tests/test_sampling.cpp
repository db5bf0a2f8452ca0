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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "rbtc/sampling.hpp"

namespace {

const rbtc::RbtcParams kCaseI(2.0, 1.0, 0.5);
const rbtc::RbtcParams kCaseII(0.9, 0.9, 0.9);
const rbtc::RbtcParams kCaseIII(1.5, 0.5, 0.3);
const rbtc::RbtcParams kCaseIV(2.2, 0.7, 0.2);

// KS distance whose exceedance probability is alpha = 0.001 at sample
// size n, solved from the Kolmogorov limit with the finite-n scaling.
double ks_critical(std::size_t n, double alpha) {
  double lo = 0.5;
  double hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::kolmogorov_sf(mid) > alpha ? lo : hi) = mid;
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  return 0.5 * (lo + hi) / (root_n + 0.12 + 0.11 / root_n);
}

}  // namespace

TEST_CASE("rng stream is deterministic and stays inside (0, 1)") {
  rbtc::RngStream a(42, 7);
  rbtc::RngStream b(42, 7);
  rbtc::RngStream c(42, 8);
  bool any_differs = false;
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double ua = a.next_uniform();
    const double ub = b.next_uniform();
    const double uc = c.next_uniform();
    CHECK(ua == ub);
    any_differs = any_differs || ua != uc;
    CHECK(ua > 0.0);
    CHECK(ua < 1.0);
    sum += ua;
  }
  CHECK(any_differs);
  // Mean of 1e5 uniforms: 0.5 within 4 sigma = 4 / (sqrt(12) * sqrt(1e5)).
  CHECK(std::abs(sum / 100000.0 - 0.5) < 4.0 / std::sqrt(12.0 * 100000.0));
}

TEST_CASE("tuned envelope constants are stable") {
  // Frozen from a fine-grid + golden-section maximization of f/g performed
  // when the proposal tuner was written; they guard against regressions in
  // the envelope search.
  CHECK(rbtc::tune_proposal(kCaseI).k ==
        doctest::Approx(1.644078).epsilon(1e-4));
  CHECK(rbtc::tune_proposal(kCaseII).k ==
        doctest::Approx(2.422985).epsilon(1e-4));
  CHECK(rbtc::tune_proposal(kCaseIII).k ==
        doctest::Approx(1.471460).epsilon(1e-4));
  CHECK(rbtc::tune_proposal(kCaseIV).k ==
        doctest::Approx(1.300987).epsilon(1e-4));
}

TEST_CASE("tuned proposal satisfies the envelope inequality") {
  for (const auto& pr : {kCaseI, kCaseII, kCaseIII, kCaseIV}) {
    const rbtc::ArProposal proposal = rbtc::tune_proposal(pr);
    CHECK(rbtc::envelope_requirement(pr, proposal) <=
          proposal.k * (1.0 + 1e-9));
  }
}

TEST_CASE("proposal shapes that break the envelope are rejected") {
  // A proposal with a steeper origin exponent than the target density makes
  // f/g diverge as x -> 0+, so no finite envelope constant exists.
  CHECK_THROWS_AS(rbtc::make_proposal(kCaseI, 2.0, 2.0), std::runtime_error);
}

TEST_CASE("acceptance rate matches one over the envelope constant") {
  for (const auto& pr : {kCaseI, kCaseIII}) {
    const rbtc::ArProposal proposal = rbtc::tune_proposal(pr);
    const double accept_p = 1.0 / proposal.k;
    // Request enough accepted draws that ~1e5 proposals get consumed.
    const std::size_t n = static_cast<std::size_t>(1e5 * accept_p);
    rbtc::RngStream rng(99, 1);
    const rbtc::ArSample s = rbtc::sample_ar_stats(pr, proposal, rng, n);
    REQUIRE(s.values.size() == n);
    REQUIRE(s.proposals >= n);
    const double rate = static_cast<double>(n) /
                        static_cast<double>(s.proposals);
    const double se = std::sqrt(accept_p * (1.0 - accept_p) /
                                static_cast<double>(s.proposals));
    CHECK(std::abs(rate - accept_p) <= 3.0 * se);
  }
}

TEST_CASE("inverse sampler is the quantile of the raw stream") {
  rbtc::RngStream rng(5, 3);
  const std::vector<double> draws = rbtc::sample_inverse(kCaseIV, rng, 500);
  rbtc::RngStream replay(5, 3);
  for (double x : draws) {
    CHECK(x == rbtc::quantile(kCaseIV, replay.next_uniform()));
  }
}

TEST_CASE("record mixture consumes three uniforms per draw") {
  rbtc::RngStream rng(11, 2);
  const std::vector<double> draws =
      rbtc::sample_record_mixture(kCaseIII, rng, 300);
  rbtc::RngStream replay(11, 2);
  for (double x : draws) {
    const double branch = replay.next_uniform();
    const double e1 = -std::log(replay.next_uniform());
    const double e2 = -std::log(replay.next_uniform());
    const double e = branch < kCaseIII.p ? e1 + e2 : e1;
    const double expect =
        std::pow(std::log1p(e / kCaseIII.omega), 1.0 / kCaseIII.kappa);
    CHECK(x == expect);
  }
}

TEST_CASE("the three samplers draw from the same distribution") {
  const std::size_t n = 10000;
  for (const auto& pr : {kCaseI, kCaseII}) {
    const rbtc::ArProposal proposal = rbtc::tune_proposal(pr);
    rbtc::RngStream r1(17, 1);
    rbtc::RngStream r2(17, 2);
    rbtc::RngStream r3(17, 3);
    const std::vector<double> ar = rbtc::sample_ar(pr, proposal, r1, n);
    const std::vector<double> inv = rbtc::sample_inverse(pr, r2, n);
    const std::vector<double> mix = rbtc::sample_record_mixture(pr, r3, n);
    CHECK(oracle::two_sample_ks(ar, inv).p_value > 0.001);
    CHECK(oracle::two_sample_ks(inv, mix).p_value > 0.001);
    CHECK(oracle::two_sample_ks(ar, mix).p_value > 0.001);
  }
}

TEST_CASE("samples match the cdf by one-sample ks") {
  const std::size_t n = 10000;
  const double crit = ks_critical(n, 0.001);
  rbtc::RngStream rng(23, 4);
  std::vector<double> draws = rbtc::sample_record_mixture(kCaseII, rng, n);
  std::sort(draws.begin(), draws.end());
  const double d = oracle::one_sample_ks(
      draws, [&](double x) { return rbtc::cdf(kCaseII, x); });
  CHECK(d < crit);

  // Degenerate weights collapse to the pure first- and second-record laws.
  for (double p : {0.0, 1.0}) {
    const rbtc::RbtcParams pr(1.3, 0.8, p);
    rbtc::RngStream r(23, 5 + static_cast<std::uint64_t>(p));
    std::vector<double> xs = rbtc::sample_record_mixture(pr, r, n);
    std::sort(xs.begin(), xs.end());
    const double dp = oracle::one_sample_ks(
        xs, [&](double x) { return rbtc::cdf(pr, x); });
    CHECK(dp < crit);
  }
}

TEST_CASE("samplers validate the request") {
  rbtc::RngStream rng(1, 1);
  CHECK(rbtc::sample_inverse(kCaseI, rng, 0).empty());
  const std::vector<double> one = rbtc::sample_inverse(kCaseI, rng, 1);
  CHECK(one.size() == 1);
  CHECK(one[0] > 0.0);
}
