#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "spinegrade/errors.hpp"

namespace sg::core {

// Subject-level partition; all FSUs of a subject stay in one set.
struct DatasetSplit {
  std::set<std::string> train;
  std::set<std::string> val;
  std::set<std::string> test;
  std::int64_t seed = 0;
  double test_fraction = 0.20;
  double val_fraction_of_remainder = 0.20;

  std::size_t total() const { return train.size() + val.size() + test.size(); }
};

// Deterministic split: seeded shuffle, then ceil(0.20*N) test, then
// ceil(0.20*remaining) val, rest train.
DatasetSplit make_split(const std::vector<std::string>& subject_ids, std::int64_t seed);

// Stable hex digest of the partition (order-independent within each set).
std::string split_hash(const DatasetSplit& split);

}  // namespace sg::core
