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
#include "rbtc/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "rbtc/sampling.hpp"

namespace rbtc {

namespace {

std::uint64_t mix_cell(std::uint64_t seed, std::size_t case_idx,
                       std::size_t size_idx) {
  // Distinct base seed per (case, n) cell; the replication index then
  // selects the stream within the cell.
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL *
                            (case_idx * 1000003ULL + size_idx + 1ULL));
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  return z;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_label_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct RepOutcome {
  bool ok = false;
  std::array<double, 3> err{};
};

const char* kParamNames[3] = {"omega", "kappa", "p"};

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, int line_no) {
  const std::string t = trim(tok);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": malformed number '" + t + "'");
  }
  return v;
}

long parse_long(const std::string& tok, int line_no) {
  const std::string t = trim(tok);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": malformed integer '" + t + "'");
  }
  return v;
}

}  // namespace

const char* sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::AR: return "ar";
    case SamplerKind::Inverse: return "inverse";
    case SamplerKind::RecordMixture: return "mixture";
  }
  return "?";
}

SimCase::SimCase(RbtcParams truth_, std::string label_)
    : truth(truth_), label(std::move(label_)) {
  if (label.empty()) {
    label = "(" + format_label_number(truth.omega) + "," +
            format_label_number(truth.kappa) + "," +
            format_label_number(truth.p) + ")";
  }
}

SimStudyResult run_study(const SimConfig& config) {
  if (config.cases.empty()) {
    throw std::invalid_argument("run_study: no cases configured");
  }
  if (config.estimators.empty()) {
    throw std::invalid_argument("run_study: no estimators configured");
  }
  if (config.replications < 1) {
    throw std::invalid_argument("run_study: replications must be >= 1");
  }
  for (int n : config.sample_sizes) {
    if (n < 4) {
      throw std::invalid_argument("run_study: sample sizes must be >= 4");
    }
  }
  int workers = config.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }

  SimStudyResult result;
  result.seed = config.seed;
  result.sampler = config.sampler;
  result.replications = config.replications;

  const int R = config.replications;
  const int E = static_cast<int>(config.estimators.size());

  for (std::size_t ci = 0; ci < config.cases.size(); ++ci) {
    const SimCase& scase = config.cases[ci];
    // The AR proposal depends only on the scenario, not the replication.
    ArProposal proposal;
    if (config.sampler == SamplerKind::AR) {
      proposal = tune_proposal(scase.truth);
    }
    for (std::size_t si = 0; si < config.sample_sizes.size(); ++si) {
      const int n = config.sample_sizes[si];
      const std::uint64_t cell_seed = mix_cell(config.seed, ci, si);

      std::vector<std::vector<RepOutcome>> slots(
          R, std::vector<RepOutcome>(E));
      std::atomic<int> next_rep{0};
      auto worker = [&]() {
        for (;;) {
          const int rep = next_rep.fetch_add(1);
          if (rep >= R) return;
          RngStream rng(cell_seed, static_cast<std::uint64_t>(rep));
          std::vector<double> xs;
          switch (config.sampler) {
            case SamplerKind::AR:
              xs = sample_ar(scase.truth, proposal, rng,
                             static_cast<std::size_t>(n));
              break;
            case SamplerKind::Inverse:
              xs = sample_inverse(scase.truth, rng,
                                  static_cast<std::size_t>(n));
              break;
            case SamplerKind::RecordMixture:
              xs = sample_record_mixture(scase.truth, rng,
                                         static_cast<std::size_t>(n));
              break;
          }
          try {
            const DataSample ds(std::move(xs));
            for (int e = 0; e < E; ++e) {
              try {
                const FitResult fr = fit_from(config.estimators[e], ds,
                                              scase.truth,
                                              config.fit_options);
                const bool finite = std::isfinite(fr.params.omega) &&
                                    std::isfinite(fr.params.kappa) &&
                                    std::isfinite(fr.params.p);
                if (fr.converged && finite) {
                  slots[rep][e].ok = true;
                  slots[rep][e].err = {
                      fr.params.omega - scase.truth.omega,
                      fr.params.kappa - scase.truth.kappa,
                      fr.params.p - scase.truth.p};
                }
              } catch (const std::exception&) {
                // counted as a failure below
              }
            }
          } catch (const std::exception&) {
            // sample rejected wholesale (cannot happen for these samplers,
            // but a failed replication must not take the study down)
          }
        }
      };

      std::vector<std::thread> pool;
      const int nthreads = std::min(workers, R);
      pool.reserve(nthreads);
      for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();

      // Aggregate in replication order so the result is independent of
      // thread scheduling.
      const double truths[3] = {scase.truth.omega, scase.truth.kappa,
                                scase.truth.p};
      for (int e = 0; e < E; ++e) {
        SimCell cell;
        cell.case_label = scase.label;
        cell.n = n;
        cell.estimator = config.estimators[e];
        int used = 0;
        std::array<double, 3> sum_err{};
        std::array<double, 3> sum_sq{};
        std::array<double, 3> sum_abs{};
        for (int rep = 0; rep < R; ++rep) {
          const RepOutcome& ro = slots[rep][e];
          if (!ro.ok) continue;
          ++used;
          for (int j = 0; j < 3; ++j) {
            sum_err[j] += ro.err[j];
            sum_sq[j] += ro.err[j] * ro.err[j];
            sum_abs[j] += std::fabs(ro.err[j]);
          }
        }
        cell.replications_used = used;
        cell.failures = R - used;
        cell.flagged = cell.failures > R / 5.0;
        if (used > 0) {
          for (int j = 0; j < 3; ++j) {
            cell.stats[j].bias = sum_err[j] / used;
            cell.stats[j].mse = sum_sq[j] / used;
            cell.stats[j].mre = sum_abs[j] / used / truths[j];
          }
        }
        result.cells.push_back(cell);
      }
    }
  }
  return result;
}

std::string emit_table(const SimStudyResult& result, TableFormat format) {
  if (format == TableFormat::Csv) {
    std::string out =
        "case,estimator,n,failures,"
        "bias_omega,bias_kappa,bias_p,"
        "mse_omega,mse_kappa,mse_p,"
        "mre_omega,mre_kappa,mre_p\n";
    // Rows ordered (case, estimator, n): collect in that order.
    std::vector<const SimCell*> ordered;
    for (const SimCell& cell : result.cells) ordered.push_back(&cell);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SimCell* a, const SimCell* b) {
                       if (a->case_label != b->case_label) {
                         return a->case_label < b->case_label;
                       }
                       if (a->estimator != b->estimator) {
                         return static_cast<int>(a->estimator) <
                                static_cast<int>(b->estimator);
                       }
                       return a->n < b->n;
                     });
    for (const SimCell* cell : ordered) {
      out += csv_quote(cell->case_label);
      out += ',';
      out += estimator_name(cell->estimator);
      out += ',' + std::to_string(cell->n);
      out += ',' + std::to_string(cell->failures);
      for (int j = 0; j < 3; ++j) out += ',' + format_double(cell->stats[j].bias);
      for (int j = 0; j < 3; ++j) out += ',' + format_double(cell->stats[j].mse);
      for (int j = 0; j < 3; ++j) out += ',' + format_double(cell->stats[j].mre);
      out += '\n';
    }
    return out;
  }

  // Markdown: one block per estimator, rows (case, n).
  std::string out;
  for (EstimatorKind kind : all_estimators()) {
    std::vector<const SimCell*> rows;
    for (const SimCell& cell : result.cells) {
      if (cell.estimator == kind) rows.push_back(&cell);
    }
    if (rows.empty()) continue;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SimCell* a, const SimCell* b) {
                       if (a->case_label != b->case_label) {
                         return a->case_label < b->case_label;
                       }
                       return a->n < b->n;
                     });
    std::string name = estimator_name(kind);
    for (char& c : name) c = std::toupper(static_cast<unsigned char>(c));
    out += "## " + name + "\n\n";
    out +=
        "| case | n | bias(omega) | bias(kappa) | bias(p) "
        "| mse(omega) | mse(kappa) | mse(p) "
        "| mre(omega) | mre(kappa) | mre(p) | failures |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    char buf[64];
    for (const SimCell* cell : rows) {
      out += "| " + cell->case_label + " | " + std::to_string(cell->n);
      for (int block = 0; block < 3; ++block) {
        for (int j = 0; j < 3; ++j) {
          const CellStats& st = cell->stats[j];
          const double v = block == 0 ? st.bias : block == 1 ? st.mse : st.mre;
          std::snprintf(buf, sizeof buf, " | %.5f", v);
          out += buf;
        }
      }
      out += " | " + std::to_string(cell->failures);
      if (cell->flagged) out += " (!)";
      out += " |\n";
    }
    out += '\n';
  }
  return out;
}

std::string write_study_csv(const SimStudyResult& result) {
  std::string out = "# seed=" + std::to_string(result.seed) +
                    " sampler=" + sampler_name(result.sampler) +
                    " replications=" + std::to_string(result.replications) +
                    "\n";
  out += "case,n,estimator,param,bias,mse,mre,failures\n";
  for (const SimCell& cell : result.cells) {
    for (int j = 0; j < 3; ++j) {
      out += csv_quote(cell.case_label);
      out += ',' + std::to_string(cell.n);
      out += ',';
      out += estimator_name(cell.estimator);
      out += ',';
      out += kParamNames[j];
      out += ',' + format_double(cell.stats[j].bias);
      out += ',' + format_double(cell.stats[j].mse);
      out += ',' + format_double(cell.stats[j].mre);
      out += ',' + std::to_string(cell.failures);
      out += '\n';
    }
  }
  return out;
}

namespace {

// Minimal CSV field splitter with double-quote escaping.
std::vector<std::string> split_csv_row(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) {
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": unterminated quote");
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

SimStudyResult parse_study_csv(const std::string& text) {
  SimStudyResult result;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  SimCell cell;
  int params_seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Optional metadata line.
      std::istringstream meta(line.substr(1));
      std::string kv;
      while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "seed") result.seed = std::stoull(value);
        if (key == "replications") result.replications = std::stoi(value);
        if (key == "sampler") {
          if (value == "ar") result.sampler = SamplerKind::AR;
          if (value == "inverse") result.sampler = SamplerKind::Inverse;
          if (value == "mixture") result.sampler = SamplerKind::RecordMixture;
        }
      }
      continue;
    }
    const std::vector<std::string> fields = split_csv_row(line, line_no);
    if (!header_seen) {
      if (fields.size() != 8 || fields[0] != "case") {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected study CSV header");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 8) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected 8 fields");
    }
    const int param_idx = params_seen;
    if (fields[3] != kParamNames[param_idx]) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected param '" +
                                  kParamNames[param_idx] + "'");
    }
    if (param_idx == 0) {
      cell = SimCell{};
      cell.case_label = fields[0];
      cell.n = static_cast<int>(parse_long(fields[1], line_no));
      const auto kind = estimator_from_name(fields[2]);
      if (!kind) {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": unknown estimator '" + fields[2] +
                                    "'");
      }
      cell.estimator = *kind;
      cell.failures = static_cast<int>(parse_long(fields[7], line_no));
    }
    cell.stats[param_idx].bias = parse_double(fields[4], line_no);
    cell.stats[param_idx].mse = parse_double(fields[5], line_no);
    cell.stats[param_idx].mre = parse_double(fields[6], line_no);
    ++params_seen;
    if (params_seen == 3) {
      cell.replications_used =
          result.replications > 0 ? result.replications - cell.failures : 0;
      cell.flagged = result.replications > 0 &&
                     cell.failures > result.replications / 5.0;
      result.cells.push_back(cell);
      params_seen = 0;
    }
  }
  if (params_seen != 0) {
    throw std::invalid_argument("study CSV truncated mid-cell");
  }
  return result;
}

SimConfig parse_sim_config(const std::string& text) {
  SimConfig config;
  config.cases.clear();
  bool cases_set = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "cases") {
      for (const std::string& triple : split(value, ';')) {
        const std::vector<std::string> parts = split(triple, ',');
        if (parts.size() != 3) {
          throw std::invalid_argument(
              "line " + std::to_string(line_no) +
              ": case must be omega,kappa,p (got '" + trim(triple) + "')");
        }
        config.cases.emplace_back(RbtcParams(parse_double(parts[0], line_no),
                                             parse_double(parts[1], line_no),
                                             parse_double(parts[2], line_no)));
      }
      cases_set = true;
    } else if (key == "sample_sizes") {
      config.sample_sizes.clear();
      for (const std::string& tok : split(value, ',')) {
        config.sample_sizes.push_back(
            static_cast<int>(parse_long(tok, line_no)));
      }
    } else if (key == "replications") {
      config.replications = static_cast<int>(parse_long(value, line_no));
    } else if (key == "estimators") {
      config.estimators.clear();
      if (trim(value) == "all") {
        config.estimators = all_estimators();
      } else {
        for (const std::string& tok : split(value, ',')) {
          const auto kind = estimator_from_name(trim(tok));
          if (!kind) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown estimator '" + trim(tok) +
                                        "'");
          }
          config.estimators.push_back(*kind);
        }
      }
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_long(value, line_no));
    } else if (key == "sampler") {
      if (value == "ar") {
        config.sampler = SamplerKind::AR;
      } else if (value == "inverse") {
        config.sampler = SamplerKind::Inverse;
      } else if (value == "mixture") {
        config.sampler = SamplerKind::RecordMixture;
      } else {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": sampler must be ar, inverse or "
                                    "mixture");
      }
    } else if (key == "workers") {
      config.workers = static_cast<int>(parse_long(value, line_no));
    } else if (key == "fit_max_iterations") {
      config.fit_options.max_iterations =
          static_cast<int>(parse_long(value, line_no));
    } else if (key == "fit_tolerance") {
      config.fit_options.tolerance = parse_double(value, line_no);
    } else if (key == "fit_restarts") {
      config.fit_options.restarts =
          static_cast<int>(parse_long(value, line_no));
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  if (!cases_set) {
    throw std::invalid_argument("config must define at least one case");
  }
  return config;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_sim_config(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace rbtc
