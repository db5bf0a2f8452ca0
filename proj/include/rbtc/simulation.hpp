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
#ifndef RBTC_SIMULATION_HPP
#define RBTC_SIMULATION_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rbtc/distribution.hpp"
#include "rbtc/estimation.hpp"

namespace rbtc {

enum class SamplerKind { AR, Inverse, RecordMixture };

const char* sampler_name(SamplerKind kind);

struct SimCase {
  RbtcParams truth;
  std::string label;  // e.g. "(2,1,0.5)"
  SimCase(RbtcParams truth_, std::string label_ = "");
};

struct SimConfig {
  std::vector<SimCase> cases;
  std::vector<int> sample_sizes{25, 100, 1000};
  int replications = 1000;
  std::vector<EstimatorKind> estimators{EstimatorKind::MLE};
  std::uint64_t seed = 42;
  SamplerKind sampler = SamplerKind::RecordMixture;
  int workers = 1;  // 0 = hardware concurrency
  // Study protocol: each replication's search starts at the scenario's true
  // parameter point with no perturbed restarts, and runs a lighter search
  // than the data-analysis default (the study performs thousands of fits).
  FitOptions fit_options{.max_iterations = 800, .tolerance = 1e-8,
                         .restarts = 0};
};

struct CellStats {
  double bias = 0.0;
  double mse = 0.0;
  double mre = 0.0;  // mean |theta_hat - theta| / theta
};

struct SimCell {
  std::string case_label;
  int n = 0;
  EstimatorKind estimator = EstimatorKind::MLE;
  std::array<CellStats, 3> stats;  // omega, kappa, p
  int replications_used = 0;
  int failures = 0;      // non-converged or non-finite fits, excluded
  bool flagged = false;  // failures exceed 20% of replications
};

struct SimStudyResult {
  std::vector<SimCell> cells;
  std::uint64_t seed = 0;
  SamplerKind sampler = SamplerKind::RecordMixture;
  int replications = 0;
};

// Runs the full (case x n x estimator) grid.  One sample is drawn per
// (case, n, replication) and shared by every estimator; the stream id is
// the replication index, so results are bit-identical for any worker
// count.  Failed fits are excluded from the averages and counted.
SimStudyResult run_study(const SimConfig& config);

enum class TableFormat { Csv, Markdown };

// Wide summary table, rows ordered (case, estimator, n), nine value
// columns (bias / mse / mre for each parameter) after the key columns.
// The markdown flavor renders one block per estimator.
std::string emit_table(const SimStudyResult& result, TableFormat format);

// Long-format study CSV with columns
//   case,n,estimator,param,bias,mse,mre,failures
// written with round-trippable precision, and its parser.
std::string write_study_csv(const SimStudyResult& result);
SimStudyResult parse_study_csv(const std::string& text);

// Study configuration as `key = value` lines (# comments allowed):
//   cases        semicolon-separated omega,kappa,p triples
//   sample_sizes / replications / estimators / seed / sampler / workers
// Unknown keys or malformed values throw std::invalid_argument naming the
// line.
SimConfig parse_sim_config(const std::string& text);
SimConfig load_sim_config(const std::string& path);

}  // namespace rbtc

#endif  // RBTC_SIMULATION_HPP
