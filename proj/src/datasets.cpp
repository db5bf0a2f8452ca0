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
#include "rbtc/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rbtc {

DataSample::DataSample(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("DataSample: empty sample");
  }
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(
          "DataSample: all values must be positive and finite");
    }
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

namespace {

const Dataset kFailureTime = {
    "failure_time",
    "time between failures of a piece of repairable equipment (20 runs)",
    {0.0014, 0.0623, 1.3826, 2.0130, 2.5274, 2.8221, 3.1544,
     4.9835, 5.5462, 5.8196, 5.8714, 7.4710, 7.5080, 7.6667,
     8.6122, 9.0442, 9.1153, 9.6477, 10.1547, 10.7582}};

const Dataset kIronSheet = {
    "iron_sheet",
    "hole diameter deviations in drilled iron sheets, mm (50 sheets)",
    {0.04, 0.02, 0.06, 0.12, 0.14, 0.08, 0.22, 0.12, 0.08, 0.26,
     0.24, 0.04, 0.14, 0.16, 0.08, 0.26, 0.32, 0.28, 0.14, 0.16,
     0.24, 0.22, 0.12, 0.18, 0.24, 0.32, 0.16, 0.14, 0.08, 0.16,
     0.24, 0.16, 0.32, 0.18, 0.24, 0.22, 0.16, 0.12, 0.24, 0.06,
     0.02, 0.18, 0.22, 0.14, 0.06, 0.04, 0.14, 0.26, 0.18, 0.16}};

}  // namespace

const Dataset& builtin_dataset(std::string_view name) {
  if (name == kFailureTime.name) return kFailureTime;
  if (name == kIronSheet.name) return kIronSheet;
  throw std::invalid_argument("unknown builtin dataset '" +
                              std::string(name) +
                              "' (available: failure_time, iron_sheet)");
}

std::vector<std::string> builtin_dataset_names() {
  return {kFailureTime.name, kIronSheet.name};
}

DataSample ingest_text(std::string_view text) {
  std::vector<double> values;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // Commas count as separators alongside whitespace.
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": malformed value '" + tok + "'");
      }
      if (!(v > 0.0)) {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": values must be > 0 (got '" + tok +
                                    "')");
      }
      values.push_back(v);
    }
  }
  if (values.empty()) {
    throw std::invalid_argument("no data values found in input");
  }
  return DataSample(std::move(values));
}

DataSample ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open data file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ingest_text(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

DataSample load_data(const std::string& source) {
  constexpr std::string_view kPrefix = "builtin:";
  if (source.rfind(kPrefix, 0) == 0) {
    return DataSample(builtin_dataset(source.substr(kPrefix.size())).values);
  }
  return ingest_file(source);
}

}  // namespace rbtc
