#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinegrade/core/study.hpp"

namespace sg::core {

// On-disk study layout (fixed, bit-exact round trip):
//   study.json   - subject_id, sex, shape [S,H,W], dtype "f32le",
//                  pixel_spacing_mm [row, col], slice_thickness_mm
//   volume.raw   - little-endian float32, index (s*H + r)*W + c
//   mask.raw     - optional uint8, same ordering
//   grades.json  - optional {"L1-L2": 2..5, ...}
void save_study(const Study& study, const std::filesystem::path& directory);

Study load_study(const std::filesystem::path& directory);

// Subdirectories of `root` that contain a study.json, sorted by name.
std::vector<std::filesystem::path> find_study_dirs(const std::filesystem::path& root);

}  // namespace sg::core
