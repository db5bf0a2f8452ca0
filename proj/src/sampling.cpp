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
#include "rbtc/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace rbtc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      key_(mix64(mix64(seed) ^ (stream_id * kGolden + 1))) {}

double RngStream::next_uniform() {
  const std::uint64_t r = mix64(key_ + (++counter_) * kGolden);
  return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

double log_weibull_pdf(double theta, double varpi, double x) {
  return std::log(theta) + std::log(varpi) + (varpi - 1.0) * std::log(x) -
         theta * std::pow(x, varpi);
}

// log(f/g) at x; -inf where f vanishes.
double log_ratio(const RbtcParams& params, double theta, double varpi,
                 double x) {
  return log_pdf(params, x) - log_weibull_pdf(theta, varpi, x);
}

}  // namespace

ArProposal make_proposal(const RbtcParams& params, double theta,
                         double varpi) {
  if (!(theta > 0.0) || !(varpi > 0.0)) {
    throw std::domain_error("make_proposal: Weibull parameters must be > 0");
  }
  // Scan log x over a wide log-spaced grid centered on the distribution
  // body, then sharpen the best bracket by golden-section search.
  const double x_lo = 1e-8;
  const double x_hi = quantile(params, 1.0 - 1e-12) * 4.0 + 10.0;
  const int grid_n = 400;
  const double l_lo = std::log(x_lo);
  const double l_hi = std::log(x_hi);
  double best = -1e308;
  int best_i = 0;
  for (int i = 0; i <= grid_n; ++i) {
    const double x =
        std::exp(l_lo + (l_hi - l_lo) * i / static_cast<double>(grid_n));
    const double r = log_ratio(params, theta, varpi, x);
    if (r > best) {
      best = r;
      best_i = i;
    }
  }
  if (best_i == 0 || best_i == grid_n) {
    throw std::runtime_error(
        "make_proposal: density ratio peaks at the support edge; "
        "no finite envelope for these proposal parameters");
  }
  auto at = [&](int i) {
    return l_lo + (l_hi - l_lo) * i / static_cast<double>(grid_n);
  };
  double a = at(best_i - 1);
  double b = at(best_i + 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = log_ratio(params, theta, varpi, std::exp(c));
  double fd = log_ratio(params, theta, varpi, std::exp(d));
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = log_ratio(params, theta, varpi, std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = log_ratio(params, theta, varpi, std::exp(d));
    }
  }
  const double peak = std::max(std::max(fc, fd), best);
  ArProposal out;
  out.theta = theta;
  out.varpi = varpi;
  out.k = std::exp(peak) * (1.0 + 1e-6);
  if (!std::isfinite(out.k)) {
    throw std::runtime_error("make_proposal: envelope constant overflowed");
  }
  return out;
}

ArProposal tune_proposal(const RbtcParams& params) {
  return make_proposal(params, params.omega, params.kappa);
}

double envelope_requirement(const RbtcParams& params,
                            const ArProposal& proposal) {
  const ArProposal fresh =
      make_proposal(params, proposal.theta, proposal.varpi);
  return fresh.k;
}

ArSample sample_ar_stats(const RbtcParams& params, const ArProposal& proposal,
                         RngStream& rng, std::size_t n) {
  if (!(proposal.k > 0.0) || !std::isfinite(proposal.k)) {
    throw std::domain_error("sample_ar: envelope constant must be finite");
  }
  const double log_k = std::log(proposal.k);
  ArSample out;
  out.values.reserve(n);
  while (out.values.size() < n) {
    const double u1 = rng.next_uniform();
    const double u2 = rng.next_uniform();
    ++out.proposals;
    // Weibull inverse transform: y = (-log(1 - u) / theta)^(1/varpi).
    const double y =
        std::pow(-std::log1p(-u1) / proposal.theta, 1.0 / proposal.varpi);
    const double lr = log_ratio(params, proposal.theta, proposal.varpi, y);
    if (std::log(u2) <= lr - log_k) out.values.push_back(y);
  }
  return out;
}

std::vector<double> sample_ar(const RbtcParams& params,
                              const ArProposal& proposal, RngStream& rng,
                              std::size_t n) {
  return sample_ar_stats(params, proposal, rng, n).values;
}

std::vector<double> sample_inverse(const RbtcParams& params, RngStream& rng,
                                   std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(quantile(params, rng.next_uniform()));
  }
  return out;
}

std::vector<double> sample_record_mixture(const RbtcParams& params,
                                          RngStream& rng, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  const double inv_kappa = 1.0 / params.kappa;
  for (std::size_t i = 0; i < n; ++i) {
    const double u_branch = rng.next_uniform();
    const double e1 = -std::log(rng.next_uniform());
    const double e2 = -std::log(rng.next_uniform());
    const double e = u_branch < params.p ? e1 + e2 : e1;
    out.push_back(std::pow(std::log1p(e / params.omega), inv_kappa));
  }
  return out;
}

}  // namespace rbtc
