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
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbtc/sampling.hpp"
#include "rbtc/simulation.hpp"

using json = nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI binary (path injected at compile time) and captures stdout.
// stderr is merged in when the test wants to inspect diagnostics.
CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(RBTC_CLI_PATH) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.out.append(buf, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::filesystem::path scratch_file(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("rbtc_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("fit reproduces the failure-time analysis through the CLI") {
  const CliResult r = run_cli(
      "fit --data builtin:failure_time --model rbtc --format json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["model"] == "RBTC");
  CHECK(j["converged"] == true);
  CHECK(std::fabs(j["neg2_loglik"].get<double>() - 95.8601) < 0.05);
  CHECK(std::fabs(j["params"]["omega"].get<double>() - 0.0837) < 0.01);
  CHECK(std::fabs(j["params"]["kappa"].get<double>() - 0.5628) < 0.01);
  CHECK(std::fabs(j["params"]["p"].get<double>() - 0.4424) < 0.01);
  CHECK(std::fabs(j["gof"]["ks"].get<double>() - 0.1477) < 0.002);
  REQUIRE(j.contains("std_errors"));
  CHECK(j["std_errors"]["omega"].get<double>() > 0.0);
}

TEST_CASE("gof honours pinned parameters instead of fitting") {
  const CliResult r = run_cli(
      "gof --data builtin:failure_time --model rbtc "
      "--params 0.0837,0.5628,0.4424 --format json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["params"]["omega"].get<double>() == 0.0837);
  CHECK(j["params"]["kappa"].get<double>() == 0.5628);
  CHECK(j["params"]["p"].get<double>() == 0.4424);
  CHECK(std::fabs(j["gof"]["ks"].get<double>() - 0.1477) < 0.002);
  CHECK(std::fabs(j["gof"]["p_ks"].get<double>() - 0.7217) < 0.05);
}

TEST_CASE("sample output is deterministic and matches the library") {
  const std::string args = "sample --omega 2 --kappa 1 --p 0.5 --n 5 --seed 7";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> lines = lines_of(a.out);
  REQUIRE(lines.size() == 5);

  rbtc::RngStream rng(7, 0);
  const std::vector<double> expect =
      rbtc::sample_record_mixture(rbtc::RbtcParams(2.0, 1.0, 0.5), rng, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    // %.17g output round trips doubles exactly.
    CHECK(std::stod(lines[i]) == expect[i]);
  }
}

TEST_CASE("sample accepts every sampler") {
  for (const char* sampler : {"ar", "inverse", "mixture"}) {
    const CliResult r = run_cli(
        std::string("sample --omega 2 --kappa 1 --p 0.5 --n 3 --seed 1 "
                    "--sampler ") +
        sampler);
    CHECK(r.exit_code == 0);
    const std::vector<std::string> lines = lines_of(r.out);
    CHECK(lines.size() == 3);
    for (const std::string& line : lines) CHECK(std::stod(line) > 0.0);
  }
}

TEST_CASE("table prints an x grid with increasing cdf") {
  const CliResult r = run_cli(
      "table --omega 2 --kappa 1 --p 0.5 --points 5 --format csv");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "x,pdf,cdf,survival,hazard");
  double prev_cdf = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(row, tok, ',')) vals.push_back(std::stod(tok));
    REQUIRE(vals.size() == 5);
    CHECK(vals[2] > prev_cdf);
    prev_cdf = vals[2];
    // Grid values print at six significant digits.
    CHECK(vals[2] + vals[3] == doctest::Approx(1.0).epsilon(2e-6));
  }
}

TEST_CASE("table prints requested quantiles at full precision") {
  const CliResult r = run_cli(
      "table --omega 2 --kappa 1 --p 0.5 --quantiles 0.25,0.5,0.75 "
      "--format csv");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "u,quantile");
  std::istringstream row(lines[2]);
  std::string u_tok, q_tok;
  std::getline(row, u_tok, ',');
  std::getline(row, q_tok, ',');
  CHECK(std::stod(u_tok) == 0.5);
  CHECK(std::stod(q_tok) ==
        doctest::Approx(0.45304604006063727582).epsilon(1e-14));
}

TEST_CASE("compare ranks the record-based model first on the failure data") {
  const CliResult r = run_cli(
      "compare --data builtin:failure_time --format csv");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 9);  // header + eight models
  CHECK(lines[0].rfind("model,", 0) == 0);
  CHECK(lines[1].rfind("RBTC,", 0) == 0);
}

TEST_CASE("simulate runs a config file and writes a parsable study CSV") {
  const std::filesystem::path cfg = scratch_file("study.cfg");
  const std::filesystem::path out = scratch_file("study.csv");
  {
    std::ofstream f(cfg);
    f << "cases = 2, 1, 0.5\n"
      << "sample_sizes = 25\n"
      << "replications = 8\n"
      << "estimators = mle\n"
      << "seed = 11\n"
      << "workers = 2\n";
  }
  const CliResult r = run_cli("simulate --config " + cfg.string() +
                              " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("## MLE") != std::string::npos);

  std::ifstream in(out);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  const rbtc::SimStudyResult study = rbtc::parse_study_csv(buf.str());
  REQUIRE(study.cells.size() == 1);
  CHECK(study.seed == 11);
  CHECK(study.replications == 8);
  CHECK(study.cells[0].n == 25);
  CHECK(study.cells[0].case_label == "(2,1,0.5)");
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST_CASE("fit writes to a file when asked") {
  const std::filesystem::path out = scratch_file("fit.json");
  const CliResult r = run_cli(
      "fit --data builtin:iron_sheet --model c --format json --out " +
      out.string());
  REQUIRE(r.exit_code == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  const json j = json::parse(in);
  CHECK(j["model"] == "C");
  CHECK(std::fabs(j["neg2_loglik"].get<double>() - -112.1180) < 0.05);
  std::filesystem::remove(out);
}

TEST_CASE("bad invocations exit nonzero with a diagnostic") {
  const CliResult unknown_model = run_cli(
      "fit --data builtin:failure_time --model nope", true);
  CHECK(unknown_model.exit_code == 1);
  CHECK(unknown_model.out.find("error:") != std::string::npos);

  const CliResult missing_data = run_cli("fit --model rbtc", true);
  CHECK(missing_data.exit_code != 0);

  const CliResult bad_file = run_cli("fit --data /nonexistent.txt", true);
  CHECK(bad_file.exit_code == 1);
  CHECK(bad_file.out.find("error:") != std::string::npos);

  const CliResult bad_params = run_cli(
      "gof --data builtin:failure_time --model rbtc --params 1,2", true);
  CHECK(bad_params.exit_code == 1);

  const CliResult bad_sampler = run_cli(
      "sample --omega 2 --kappa 1 --p 0.5 --n 3 --sampler pcg", true);
  CHECK(bad_sampler.exit_code == 1);
}

TEST_CASE("shipped example configs parse and describe runnable studies") {
  const rbtc::SimConfig desk =
      rbtc::load_sim_config(RBTC_CONFIG_DIR "/case1_desk.cfg");
  REQUIRE(desk.cases.size() == 1);
  CHECK(desk.cases[0].label == "(2,1,0.5)");
  CHECK(desk.sample_sizes == std::vector<int>{25, 100, 1000});
  CHECK(desk.replications == 1000);
  REQUIRE(desk.estimators.size() == 1);
  CHECK(desk.estimators[0] == rbtc::EstimatorKind::MLE);
  CHECK(desk.seed == 42);
  CHECK(desk.sampler == rbtc::SamplerKind::RecordMixture);
  CHECK(desk.workers == 4);

  const rbtc::SimConfig sweep =
      rbtc::load_sim_config(RBTC_CONFIG_DIR "/nine_estimators.cfg");
  REQUIRE(sweep.cases.size() == 4);
  CHECK(sweep.cases[3].label == "(2.2,0.7,0.2)");
  CHECK(sweep.sample_sizes.size() == 6);
  CHECK(sweep.estimators.size() == rbtc::all_estimators().size());
  CHECK(sweep.workers == 0);
}
