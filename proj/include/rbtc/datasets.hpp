// SPDX-License-Identifier: Apache-2.0
#ifndef RBTC_DATASETS_HPP
#define RBTC_DATASETS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "rbtc/data_sample.hpp"

namespace rbtc {

struct Dataset {
  std::string name;
  std::string description;
  std::vector<double> values;
};

// Bundled benchmark datasets: "failure_time" (20 component failure times)
// and "iron_sheet" (50 hole-diameter deviations, mm).  Throws
// std::invalid_argument for unknown names.
const Dataset& builtin_dataset(std::string_view name);
std::vector<std::string> builtin_dataset_names();

// Parses whitespace- or comma-separated decimals; '#' starts a comment that
// runs to end of line.  Malformed tokens and nonpositive values are
// rejected with the 1-based line number in the message.
DataSample ingest_text(std::string_view text);
DataSample ingest_file(const std::string& path);

// "builtin:NAME" or a filesystem path.
DataSample load_data(const std::string& source);

}  // namespace rbtc

#endif  // RBTC_DATASETS_HPP
