#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinegrade/core/study.hpp"

namespace sg::metrics {

// Rows = true class, cols = predicted class.
struct ConfusionMatrix {
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::string> class_names;

  explicit ConfusionMatrix(int k = 0) : counts(Eigen::Matrix<long, -1, -1>::Zero(k, k)) {}

  int k() const { return static_cast<int>(counts.rows()); }
  long total() const { return counts.sum(); }
};

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels, int k);

// Macro-average of per-class recall, percent scale. Classes with zero true
// samples are excluded from the mean.
double balanced_accuracy(const ConfusionMatrix& cm);

enum class KappaWeighting { none, linear, quadratic };

KappaWeighting kappa_weighting_from_string(const std::string& s);
std::string to_string(KappaWeighting w);

// Chance-corrected agreement, percent scale; optionally weighted for ordinal
// labels. Throws ValidationError when chance agreement is degenerate.
double cohens_kappa(const ConfusionMatrix& cm, KappaWeighting weighting = KappaWeighting::none);

// Lin's concordance correlation on raw values, population (1/N) moments,
// percent scale.
double lins_ccc(const std::vector<double>& true_values,
                const std::vector<double>& predicted_values);

// Mean per-class IoU between two label masks, percent scale. Classes absent
// from both masks are skipped.
double miou(const MaskImage& pred_mask, const MaskImage& true_mask, int k);

// Streaming per-class intersection/union over many mask pairs.
class IouAccumulator {
 public:
  explicit IouAccumulator(int k) : inter_(k, 0), uni_(k, 0) {}
  void add(const MaskImage& pred_mask, const MaskImage& true_mask);
  double miou_percent() const;

 private:
  std::vector<long> inter_, uni_;
};

// One graded sample with truth; the unit the subgroup report works on.
struct GradedSample {
  int true_grade = 0;  // 2..5
  int pred_grade = 0;  // 2..5
  core::Sex sex = core::Sex::unknown;
  core::DiscLevel level = core::DiscLevel::L5_S1;
};

struct SubgroupMetrics {
  long n = 0;
  std::optional<double> balanced_accuracy;  // recall for per-grade subgroups
  std::optional<double> kappa;
  std::optional<double> ccc;
  std::string note;  // "insufficient n" / "undefined kappa" when applicable
};

struct MetricsReport {
  double balanced_accuracy = 0;
  double cohens_kappa = 0;
  double lins_ccc = 0;
  std::optional<double> miou;
  long n_samples = 0;
  // grouping name ("sex", "level", "grade") -> subgroup name -> metrics
  std::map<std::string, std::map<std::string, SubgroupMetrics>> subgroups;
};

// Overall BA/kappa/CCC plus per-sex, per-level and per-grade breakdowns.
// Per-grade subgroups report the class recall and a one-vs-rest kappa.
MetricsReport subgroup_report(const std::vector<GradedSample>& samples,
                              KappaWeighting weighting = KappaWeighting::none);

struct SeedAggregate {
  std::vector<double> values;
  double mean = 0;
  double std_dev = 0;         // sample std, n-1 denominator
  double standard_error = 0;  // std / sqrt(n)
};

SeedAggregate aggregate_seeds(const std::vector<double>& values);

// Table style used in reports: one decimal, e.g. "81.7±0.6".
std::string format_mean_std(double mean, double std_dev);

}  // namespace sg::metrics
