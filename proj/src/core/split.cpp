#include "spinegrade/core/split.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "spinegrade/rng.hpp"

namespace sg::core {

DatasetSplit make_split(const std::vector<std::string>& subject_ids, std::int64_t seed) {
  if (subject_ids.size() < 5)
    throw ValidationError("make_split: need at least 5 subjects, got " +
                          std::to_string(subject_ids.size()));
  std::vector<std::string> sorted = subject_ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("make_split: duplicate subject ids");

  std::vector<std::string> shuffled = subject_ids;
  Rng rng(mix_key(0x5EEDBA5Eu, static_cast<std::uint64_t>(seed)));
  rng.shuffle(shuffled);

  DatasetSplit split;
  split.seed = seed;
  const std::size_t n = shuffled.size();
  const std::size_t n_test =
      static_cast<std::size_t>(std::ceil(split.test_fraction * static_cast<double>(n)));
  const std::size_t n_val = static_cast<std::size_t>(
      std::ceil(split.val_fraction_of_remainder * static_cast<double>(n - n_test)));

  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_test) {
      split.test.insert(shuffled[i]);
    } else if (i < n_test + n_val) {
      split.val.insert(shuffled[i]);
    } else {
      split.train.insert(shuffled[i]);
    }
  }
  return split;
}

std::string split_hash(const DatasetSplit& split) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const char* tag, const std::set<std::string>& ids) {
    h = fnv1a(tag, std::strlen(tag), h);
    for (const auto& id : ids) {
      h = fnv1a(id, h);
      h = fnv1a("|", 1, h);
    }
  };
  feed("train:", split.train);
  feed("val:", split.val);
  feed("test:", split.test);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace sg::core
