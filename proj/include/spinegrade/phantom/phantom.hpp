#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spinegrade/core/study.hpp"

namespace sg::phantom {

// Disc appearance per grade (index = grade - 2). Degeneration shows as lower
// T2 signal, more heterogeneous texture, and (for grade 5) a collapsed disc.
struct GradeSignalModel {
  std::array<double, 4> mean_intensity = {0.85, 0.65, 0.47, 0.30};
  std::array<double, 4> heterogeneity = {0.02, 0.06, 0.11, 0.17};
  std::array<double, 4> height_factor = {1.0, 1.0, 0.90, 0.65};

  void validate() const;
};

struct PhantomConfig {
  int n_subjects = 1;
  int slices = 9;
  int height = 512;
  int width = 512;
  std::array<double, 4> grade_distribution = {0.25, 0.25, 0.25, 0.25};
  double noise_sigma = 0.02;       // additive Gaussian, fraction of dynamic range
  double geometry_jitter = 0.05;   // fractional perturbation of positions/sizes
  std::int64_t seed = 0;
  GradeSignalModel signal;

  void validate() const;
};

// Synthetic sagittal spine studies with exact masks and grades. Deterministic
// given the config; subject k depends only on (seed, k).
std::vector<core::Study> generate_phantom(const PhantomConfig& config);

core::Study generate_subject(const PhantomConfig& config, int subject_index);

// Mean / population std of the disc's pixels on the mid-sagittal slice.
std::pair<double, double> disc_stats(const core::Study& study, core::DiscLevel level);

// Threshold classifier on (disc mean, disc std) against the signal model;
// recovers the generating grade exactly on clean phantoms.
int grade_oracle(const core::Study& study, core::DiscLevel level,
                 const GradeSignalModel& model = {});

}  // namespace sg::phantom
