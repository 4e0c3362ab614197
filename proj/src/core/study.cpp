#include "spinegrade/core/study.hpp"

namespace sg::core {

std::string to_string(Sex s) {
  switch (s) {
    case Sex::F: return "F";
    case Sex::M: return "M";
    default: return "unknown";
  }
}

Sex sex_from_string(const std::string& s) {
  if (s == "F") return Sex::F;
  if (s == "M") return Sex::M;
  if (s == "unknown") return Sex::unknown;
  throw ValidationError("sex: unrecognized value '" + s + "'");
}

std::string to_string(DiscLevel level) {
  switch (level) {
    case DiscLevel::L5_S1: return "L5-S1";
    case DiscLevel::L4_L5: return "L4-L5";
    case DiscLevel::L3_L4: return "L3-L4";
    case DiscLevel::L2_L3: return "L2-L3";
    default: return "L1-L2";
  }
}

DiscLevel level_from_string(const std::string& s) {
  for (DiscLevel level : kAllLevels) {
    if (to_string(level) == s) return level;
  }
  throw ValidationError("disc level: unrecognized value '" + s + "'");
}

std::string LabelScheme::structure_name(int label) {
  static const char* names[kNumClasses] = {"background", "S1",    "L5",    "L4",
                                           "L3",         "L2",    "L1",    "L5-S1",
                                           "L4-L5",      "L3-L4", "L2-L3", "L1-L2"};
  if (label < 0 || label >= kNumClasses)
    throw ValidationError("label " + std::to_string(label) + " out of range 0..11");
  return names[label];
}

void Study::validate() const {
  if (subject_id.empty()) throw ValidationError("subject_id: must be nonempty");
  if (volume.s < 1) throw ValidationError("volume: S must be >= 1");
  if (volume.h < 32) throw ValidationError("volume: H must be >= 32");
  if (volume.w < 32) throw ValidationError("volume: W must be >= 32");
  if (volume.data.size() != static_cast<std::size_t>(volume.s) * volume.h * volume.w)
    throw ValidationError("volume: data size does not match shape");
  if (pixel_spacing_mm[0] <= 0 || pixel_spacing_mm[1] <= 0)
    throw ValidationError("pixel_spacing_mm: must be strictly positive");
  if (slice_thickness_mm <= 0)
    throw ValidationError("slice_thickness_mm: must be strictly positive");
  if (mask) {
    if (mask->s != volume.s || mask->h != volume.h || mask->w != volume.w)
      throw ValidationError("mask: shape differs from volume");
    if (mask->data.size() != volume.data.size())
      throw ValidationError("mask: data size does not match shape");
    for (std::uint8_t v : mask->data) {
      if (v >= LabelScheme::kNumClasses) throw ValidationError("mask label out of range 0..11");
    }
  }
  if (grades) {
    for (DiscLevel level : kAllLevels) {
      auto it = grades->find(level);
      if (it == grades->end())
        throw ValidationError("grades: missing level " + to_string(level));
      if (it->second < 2 || it->second > 5)
        throw ValidationError("grades: level " + to_string(level) + " value " +
                              std::to_string(it->second) + " outside {2,3,4,5}");
    }
    if (grades->size() != kAllLevels.size())
      throw ValidationError("grades: must cover exactly the 5 disc levels");
  }
}

}  // namespace sg::core
