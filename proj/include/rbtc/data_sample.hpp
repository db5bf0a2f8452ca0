// SPDX-License-Identifier: Apache-2.0
#ifndef RBTC_DATA_SAMPLE_HPP
#define RBTC_DATA_SAMPLE_HPP

#include <cstddef>
#include <vector>

namespace rbtc {

// Immutable positive-valued sample with cached order statistics.
class DataSample {
 public:
  // Throws std::invalid_argument on an empty vector or any value <= 0
  // (the supported lifetime models live on x > 0).
  explicit DataSample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

}  // namespace rbtc

#endif  // RBTC_DATA_SAMPLE_HPP
