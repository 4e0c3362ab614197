#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinegrade/core/study.hpp"

namespace sg::locate {

struct PixelBox {
  int row_min = 0, col_min = 0, row_max = 0, col_max = 0;  // inclusive

  int height() const { return row_max - row_min + 1; }
  int width() const { return col_max - col_min + 1; }
  bool contains(const PixelBox& other) const {
    return row_min <= other.row_min && col_min <= other.col_min && row_max >= other.row_max &&
           col_max >= other.col_max;
  }
  bool operator==(const PixelBox&) const = default;
};

struct StructureBox {
  int label = 0;
  PixelBox box;
  int slice_index = 0;
  long area_px = 0;
};

struct FSURegion {
  core::DiscLevel level = core::DiscLevel::L5_S1;
  int disc_label = 0;
  std::pair<int, int> vb_labels = {0, 0};
  PixelBox box;        // union of disc + both VB boxes, expanded and clamped
  PixelBox disc_box;   // tight disc box, kept for containment checks
  int slice_index = 0;
};

struct FSUStack {
  core::DiscLevel level = core::DiscLevel::L5_S1;
  int n = 0;
  core::Volume pixels;  // n x 224 x 224, values in [0, 1]
  std::optional<int> grade;
  std::string subject_id;
  core::Sex sex = core::Sex::unknown;
  PixelBox source_box;

  static constexpr int kSize = 224;
};

// Largest 8-connected component per nonzero label (ties: smaller row_min,
// then smaller col_min) with its tight bounding box. Absent labels are
// simply omitted; result is sorted by label.
std::vector<StructureBox> component_boxes(const MaskImage& mask, int slice_index = 0);

struct FsuExtraction {
  std::vector<FSURegion> regions;       // sorted bottom-up (L5-S1 first)
  std::vector<std::string> diagnostics;  // levels skipped and why
};

// Builds one FSU per disc whose two adjacent VBs are present: union box of
// the three structures expanded by margin_frac of its own height/width per
// side, clamped to the image. Throws when no FSU is extractable at all.
FsuExtraction extract_fsus(const MaskImage& mask, double margin_frac = 0.10,
                           int slice_index = 0);

// The n slices centred on floor(S/2); for even n the extra slice goes toward
// the lower index.
std::vector<int> slice_indices(int total_slices, int n);

// Crop fsu.box from the chosen slices, bilinear-resample each to 224x224,
// clip stack intensities to its [0.5, 99.5] percentiles and min-max
// normalize to [0,1] (constant stacks become all 0.5).
FSUStack crop_resample(const core::Study& study, const FSURegion& fsu, int n);

// Fraction of adjacent bottom-up structure pairs whose vertical order is
// violated in the mask (0 when anatomy is ordered, 1 when fully scrambled).
double anatomical_order_violations(const MaskImage& mask);

// FSU directory format: pixels.raw (f32le, slice-major) + fsu.json.
void save_fsu(const FSUStack& stack, const std::filesystem::path& directory);
FSUStack load_fsu(const std::filesystem::path& directory);
std::vector<std::filesystem::path> find_fsu_dirs(const std::filesystem::path& root);

}  // namespace sg::locate
