#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinegrade/errors.hpp"
#include "spinegrade/image.hpp"

namespace sg::core {

enum class Sex { F, M, unknown };

std::string to_string(Sex s);
Sex sex_from_string(const std::string& s);

// The five lumbar disc levels, bottom-up.
enum class DiscLevel { L5_S1 = 0, L4_L5 = 1, L3_L4 = 2, L2_L3 = 3, L1_L2 = 4 };

inline constexpr std::array<DiscLevel, 5> kAllLevels = {
    DiscLevel::L5_S1, DiscLevel::L4_L5, DiscLevel::L3_L4, DiscLevel::L2_L3, DiscLevel::L1_L2};

std::string to_string(DiscLevel level);
DiscLevel level_from_string(const std::string& s);

// Fixed 12-class label convention: 0 = background, 1..6 = vertebral bodies
// bottom-up (S1, L5, L4, L3, L2, L1), 7..11 = discs bottom-up (L5-S1 .. L1-L2).
struct LabelScheme {
  static constexpr int kNumClasses = 12;
  static constexpr int kFirstVb = 1;
  static constexpr int kLastVb = 6;
  static constexpr int kFirstDisc = 7;
  static constexpr int kLastDisc = 11;

  static constexpr bool is_vb(int label) { return label >= kFirstVb && label <= kLastVb; }
  static constexpr bool is_disc(int label) { return label >= kFirstDisc && label <= kLastDisc; }

  static constexpr int disc_label(DiscLevel level) { return kFirstDisc + static_cast<int>(level); }

  static DiscLevel level_of_disc(int disc) {
    if (!is_disc(disc)) throw ValidationError("label " + std::to_string(disc) + " is not a disc");
    return static_cast<DiscLevel>(disc - kFirstDisc);
  }

  // A disc label d is adjacent to VB labels d-6 (below) and d-5 (above).
  static std::pair<int, int> adjacent_vbs(int disc) {
    if (!is_disc(disc)) throw ValidationError("label " + std::to_string(disc) + " is not a disc");
    return {disc - 6, disc - 5};
  }

  static std::string structure_name(int label);
};

// Dense 3-D scalar volume, slice-major then row-major: index (s*H + r)*W + c.
template <typename T>
struct VolumeT {
  int s = 0, h = 0, w = 0;
  std::vector<T> data;

  VolumeT() = default;
  VolumeT(int s_, int h_, int w_, T fill = T(0))
      : s(s_), h(h_), w(w_), data(static_cast<std::size_t>(s_) * h_ * w_, fill) {}

  std::size_t size() const { return data.size(); }

  T& at(int si, int r, int c) {
    return data[(static_cast<std::size_t>(si) * h + r) * w + c];
  }
  T at(int si, int r, int c) const {
    return data[(static_cast<std::size_t>(si) * h + r) * w + c];
  }

  Eigen::Map<ImageT<T>> slice(int si) {
    return Eigen::Map<ImageT<T>>(data.data() + static_cast<std::size_t>(si) * h * w, h, w);
  }
  Eigen::Map<const ImageT<T>> slice(int si) const {
    return Eigen::Map<const ImageT<T>>(data.data() + static_cast<std::size_t>(si) * h * w, h, w);
  }
};

using Volume = VolumeT<float>;
using MaskVolume = VolumeT<std::uint8_t>;

using Grades = std::map<DiscLevel, int>;

// One subject: sagittal volume, optional 12-class mask, optional per-disc grades.
struct Study {
  std::string subject_id;
  Sex sex = Sex::unknown;
  Volume volume;
  std::array<double, 2> pixel_spacing_mm = {0.5, 0.5};
  double slice_thickness_mm = 4.0;
  std::optional<MaskVolume> mask;
  std::optional<Grades> grades;

  int mid_sagittal_index() const { return volume.s / 2; }

  // Throws ValidationError naming the offending field.
  void validate() const;
};

}  // namespace sg::core
