#include "spinegrade/phantom/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinegrade/rng.hpp"

namespace sg::phantom {

using core::DiscLevel;
using core::LabelScheme;
using core::Study;

void GradeSignalModel::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(mean_intensity[i] > mean_intensity[i + 1]))
      throw ValidationError("signal model: mean_intensity must strictly decrease grade 2->5");
    if (!(heterogeneity[i] < heterogeneity[i + 1]))
      throw ValidationError("signal model: heterogeneity must strictly increase grade 2->5");
  }
  for (double f : height_factor) {
    if (f <= 0 || f > 1) throw ValidationError("signal model: height_factor outside (0,1]");
  }
}

void PhantomConfig::validate() const {
  if (n_subjects < 1) throw ValidationError("phantom: n_subjects must be positive");
  if (slices < 1) throw ValidationError("phantom: slices must be >= 1");
  if (height < 256) throw ValidationError("phantom: height must be >= 256 to place structures");
  if (width < 64) throw ValidationError("phantom: width too small to place structures");
  const double sum = std::accumulate(grade_distribution.begin(), grade_distribution.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("phantom: grade_distribution must sum to 1");
  for (double p : grade_distribution) {
    if (p < 0) throw ValidationError("phantom: grade_distribution entries must be nonnegative");
  }
  if (noise_sigma < 0) throw ValidationError("phantom: noise_sigma must be nonnegative");
  if (geometry_jitter < 0 || geometry_jitter > 0.2)
    throw ValidationError("phantom: geometry_jitter outside [0, 0.2]");
  signal.validate();
}

namespace {

constexpr double kBgBase = 0.10;
constexpr double kBgGradient = 0.05;
constexpr double kVbIntensity = 0.45;
constexpr double kVbTexture = 0.02;

// One vertical structure of the column, sized at the mid-sagittal slice.
struct StructureSpec {
  int label = 0;
  double height = 0;     // rows
  double width = 0;      // cols
  double col_center = 0;
  double intensity = 0;
  double texture_amp = 0;
  std::uint64_t texture_seed = 0;
};

struct SubjectLayout {
  std::vector<StructureSpec> stack;  // bottom-up: S1, L5-S1, L5, ..., L1-L2, L1
  double bottom_row = 0;             // float row of the column base (mid slice)
  core::Grades grades;
  core::Sex sex = core::Sex::unknown;
};

// Smooth zero-centred texture field: a small cosine mixture.
struct TextureField {
  std::array<double, 3> amp, fr, fc, phase;

  explicit TextureField(std::uint64_t seed) {
    Rng rng(seed);
    for (int k = 0; k < 3; ++k) {
      amp[k] = rng.uniform(0.5, 1.0);
      const double wavelength = rng.uniform(4.0, 12.0);
      const double angle = rng.uniform(0.0, M_PI);
      fr[k] = std::cos(angle) / wavelength;
      fc[k] = std::sin(angle) / wavelength;
      phase[k] = rng.uniform(0.0, 2.0 * M_PI);
    }
  }

  double operator()(double r, double c) const {
    double v = 0;
    for (int k = 0; k < 3; ++k)
      v += amp[k] * std::cos(2.0 * M_PI * (fr[k] * r + fc[k] * c) + phase[k]);
    return v;
  }
};

SubjectLayout make_layout(const PhantomConfig& cfg, int subject_index) {
  Rng rng(mix_key(0x9AA770u, static_cast<std::uint64_t>(cfg.seed), subject_index));
  const double j = cfg.geometry_jitter;
  const double H = cfg.height, W = cfg.width;

  SubjectLayout layout;
  layout.sex = rng.bernoulli(0.5) ? core::Sex::F : core::Sex::M;

  for (DiscLevel level : core::kAllLevels) {
    const int grade = 2 + static_cast<int>(rng.categorical(
                              {cfg.grade_distribution[0], cfg.grade_distribution[1],
                               cfg.grade_distribution[2], cfg.grade_distribution[3]}));
    layout.grades[level] = grade;
  }

  const double vb_h = 0.095 * H;
  const double disc_h = 0.042 * H;
  const double vb_w = 0.26 * W;
  const double disc_w = 0.30 * W;

  auto jittered = [&](double v) { return v * rng.uniform(1.0 - j, 1.0 + j); };

  // Interleaved stack, bottom-up: VB, disc, VB, disc, ..., VB.
  for (int i = 0; i < 11; ++i) {
    StructureSpec s;
    if (i % 2 == 0) {
      const int vb_label = LabelScheme::kFirstVb + i / 2;
      s.label = vb_label;
      s.height = jittered(vb_h);
      s.width = jittered(vb_w);
      s.intensity = kVbIntensity;
      s.texture_amp = kVbTexture;
    } else {
      const DiscLevel level = static_cast<DiscLevel>(i / 2);
      const int grade = layout.grades.at(level);
      s.label = LabelScheme::disc_label(level);
      s.height = jittered(disc_h) * cfg.signal.height_factor[grade - 2];
      s.width = jittered(disc_w);
      s.intensity = cfg.signal.mean_intensity[grade - 2];
      s.texture_amp = cfg.signal.heterogeneity[grade - 2];
    }
    s.col_center = W * 0.5 + rng.uniform(-1.0, 1.0) * 0.5 * j * W;
    s.texture_seed = rng.next_u64();
    layout.stack.push_back(s);
  }

  const double total_h = std::accumulate(layout.stack.begin(), layout.stack.end(), 0.0,
                                         [](double a, const StructureSpec& s) { return a + s.height; });
  const double slack = H - total_h;
  if (slack < 4) throw ValidationError("phantom: shape too small to place structures");
  // Column base sits near the bottom with jittered slack below it.
  layout.bottom_row = H - 1 - slack * rng.uniform(0.3, 0.7);
  return layout;
}

// Fill one slice in place; `scale` shrinks the column about its centre
// (circular cross-section model for off-centre sagittal slices).
void render_slice(const PhantomConfig& cfg, const SubjectLayout& layout, double scale,
                  Eigen::Map<ImageT<float>> plane, Eigen::Map<ImageT<std::uint8_t>> mask) {
  const int H = cfg.height, W = cfg.width;

  for (int r = 0; r < H; ++r) {
    const float bg = static_cast<float>(kBgBase + kBgGradient * r / H);
    for (int c = 0; c < W; ++c) {
      plane(r, c) = bg;
      mask(r, c) = 0;
    }
  }

  // Scaled float boundaries, bottom-up, abutting exactly.
  const double total_h = std::accumulate(layout.stack.begin(), layout.stack.end(), 0.0,
                                         [](double a, const StructureSpec& s) { return a + s.height; });
  const double column_center = layout.bottom_row - 0.5 * total_h;
  const double bottom = column_center + 0.5 * total_h * scale;

  double z = bottom;  // current float lower boundary (inclusive-ish)
  for (const auto& s : layout.stack) {
    const double h = s.height * scale;
    const double z_top = z - h;
    const int row_lo = static_cast<int>(std::floor(z_top)) + 1;  // top row (smaller index)
    const int row_hi = static_cast<int>(std::floor(z));          // bottom row
    z = z_top;
    if (row_hi < row_lo) continue;  // degenerate after scaling; not hit for valid configs

    const double rc = 0.5 * (row_lo + row_hi);
    const double half_h = 0.5 * (row_hi - row_lo) + 0.49;
    const double half_w = 0.5 * s.width * scale;
    const double fade = 0.5 + 0.5 * scale;
    const TextureField texture(s.texture_seed);

    // First pass over the structure's rows: gather texture stats for exact
    // normalization, then draw.
    const int c_lo = std::max(0, static_cast<int>(std::floor(s.col_center - half_w)));
    const int c_hi = std::min(W - 1, static_cast<int>(std::ceil(s.col_center + half_w)));

    auto inside = [&](int r, int c) {
      const double dr = (r - rc) / half_h;
      const double dc = (c - s.col_center) / half_w;
      if (LabelScheme::is_disc(s.label)) {
        // superellipse, squarish so extreme rows keep width
        return std::pow(std::abs(dc), 4.0) + std::pow(std::abs(dr), 4.0) <= 1.0;
      }
      // VB: rounded rectangle via p-norm with higher exponent
      return std::pow(std::abs(dc), 6.0) + std::pow(std::abs(dr), 6.0) <= 1.0;
    };

    double sum = 0, sum2 = 0;
    int count = 0;
    for (int r = std::max(0, row_lo); r <= std::min(H - 1, row_hi); ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        if (!inside(r, c)) continue;
        const double t = texture(r, c);
        sum += t;
        sum2 += t * t;
        ++count;
      }
    }
    if (count == 0) continue;
    const double mean = sum / count;
    const double var = std::max(sum2 / count - mean * mean, 1e-12);
    const double inv_std = 1.0 / std::sqrt(var);

    for (int r = std::max(0, row_lo); r <= std::min(H - 1, row_hi); ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        if (!inside(r, c)) continue;
        const double t = (texture(r, c) - mean) * inv_std;
        const double value = s.intensity + s.texture_amp * t;
        const double bg = kBgBase + kBgGradient * static_cast<double>(r) / H;
        plane(r, c) = static_cast<float>(bg + (value - bg) * fade);
        mask(r, c) = static_cast<std::uint8_t>(s.label);
      }
    }
  }
}

}  // namespace

Study generate_subject(const PhantomConfig& cfg, int subject_index) {
  const SubjectLayout layout = make_layout(cfg, subject_index);

  Study study;
  char idbuf[32];
  std::snprintf(idbuf, sizeof(idbuf), "phantom-%04d", subject_index);
  study.subject_id = idbuf;
  study.sex = layout.sex;
  study.grades = layout.grades;
  study.volume = core::Volume(cfg.slices, cfg.height, cfg.width);
  study.mask = core::MaskVolume(cfg.slices, cfg.height, cfg.width);

  const int mid = cfg.slices / 2;
  const double radius = 0.75 * std::max(1, cfg.slices);
  for (int s = 0; s < cfg.slices; ++s) {
    const double d = (s - mid) / radius;
    const double scale = std::sqrt(std::max(0.2, 1.0 - d * d));
    render_slice(cfg, layout, scale, study.volume.slice(s), study.mask->slice(s));
  }

  if (cfg.noise_sigma > 0) {
    Rng noise(mix_key(0x4015Eu, static_cast<std::uint64_t>(cfg.seed), subject_index));
    for (auto& v : study.volume.data)
      v += static_cast<float>(noise.normal(0.0, cfg.noise_sigma));
  }

  study.validate();
  return study;
}

std::vector<Study> generate_phantom(const PhantomConfig& cfg) {
  cfg.validate();
  std::vector<Study> studies;
  studies.reserve(cfg.n_subjects);
  for (int i = 0; i < cfg.n_subjects; ++i) studies.push_back(generate_subject(cfg, i));
  return studies;
}

std::pair<double, double> disc_stats(const Study& study, DiscLevel level) {
  if (!study.mask) throw ValidationError("disc_stats: study has no mask");
  const int label = LabelScheme::disc_label(level);
  const int mid = study.mid_sagittal_index();
  const auto mask = study.mask->slice(mid);
  const auto plane = study.volume.slice(mid);
  double sum = 0, sum2 = 0;
  long count = 0;
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) != label) continue;
      const double v = plane(r, c);
      sum += v;
      sum2 += v * v;
      ++count;
    }
  }
  if (count == 0)
    throw ValidationError("disc region absent: " + core::to_string(level));
  const double mean = sum / count;
  const double var = std::max(0.0, sum2 / count - mean * mean);
  return {mean, std::sqrt(var)};
}

int grade_oracle(const Study& study, DiscLevel level, const GradeSignalModel& model) {
  const auto [mean, sd] = disc_stats(study, level);
  // Nearest centroid on (mean, std); scales weight the mean more strongly
  // since intensity separates grades further than texture does.
  constexpr double kMeanScale = 0.10;
  constexpr double kStdScale = 0.15;
  int best = 2;
  double best_score = std::numeric_limits<double>::infinity();
  for (int g = 2; g <= 5; ++g) {
    const double dm = (mean - model.mean_intensity[g - 2]) / kMeanScale;
    const double ds = (sd - model.heterogeneity[g - 2]) / kStdScale;
    const double score = dm * dm + ds * ds;
    if (score < best_score) {
      best_score = score;
      best = g;
    }
  }
  return best;
}

}  // namespace sg::phantom
