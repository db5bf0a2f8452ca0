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
#ifndef RBTC_SAMPLING_HPP
#define RBTC_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "rbtc/distribution.hpp"

namespace rbtc {

// Counter-based uniform stream (SplitMix64 finalizer over key + counter).
// Streams with distinct (seed, stream_id) pairs are statistically
// independent, and a stream's output depends only on its own draw count,
// which is what makes the simulation study reproducible across any number
// of worker threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  // Strictly inside (0, 1): the 53-bit mantissa is offset by half an ulp.
  double next_uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Weibull(theta, varpi) proposal for the accept-reject sampler, with
// density g(x) = theta * varpi * x^(varpi-1) * exp(-theta * x^varpi) and
// envelope constant k >= sup_x f(x) / g(x).
struct ArProposal {
  double theta = 1.0;  // Weibull rate
  double varpi = 1.0;  // Weibull shape
  double k = 1.0;      // envelope constant
};

// Builds a proposal with the given Weibull parameters, locating
// sup f/g on a log-spaced grid refined by golden-section search and
// inflating it by a 1e-6 relative slack.  Throws std::runtime_error when
// the ratio diverges at either end of the support (no finite envelope).
ArProposal make_proposal(const RbtcParams& params, double theta,
                         double varpi);

// Default tuning: matching the proposal to the Chen core
// (theta, varpi) = (omega, kappa) keeps f/g bounded on both tails for
// every feasible parameter point.
ArProposal tune_proposal(const RbtcParams& params);

// Largest value of f/g * (1 + 1e-6) found under `proposal`; a proposal is
// valid for `params` when this does not exceed proposal.k.
double envelope_requirement(const RbtcParams& params,
                            const ArProposal& proposal);

struct ArSample {
  std::vector<double> values;
  std::uint64_t proposals = 0;  // candidates consumed, for rate checks
};

// Accept-reject sampler: candidate y ~ Weibull(theta, varpi) via inverse
// transform, accepted when u <= f(y) / (k * g(y)).  Two uniforms per
// proposal round.
ArSample sample_ar_stats(const RbtcParams& params, const ArProposal& proposal,
                         RngStream& rng, std::size_t n);
std::vector<double> sample_ar(const RbtcParams& params,
                              const ArProposal& proposal, RngStream& rng,
                              std::size_t n);

// Inverse-cdf sampler; one uniform per draw.
std::vector<double> sample_inverse(const RbtcParams& params, RngStream& rng,
                                   std::size_t n);

// Exact record-mixture sampler: with probability 1-p invert the first upper
// record cdf at E1, otherwise the second at E1 + E2, where the E are unit
// exponentials.  For the Chen base both inversions collapse to
// x = (log(1 + E / omega))^(1/kappa).  Consumes exactly three uniforms per
// draw (branch choice, E1, E2) whichever branch is taken.
std::vector<double> sample_record_mixture(const RbtcParams& params,
                                          RngStream& rng, std::size_t n);

}  // namespace rbtc

#endif  // RBTC_SAMPLING_HPP
