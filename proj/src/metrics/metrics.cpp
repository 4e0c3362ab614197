#include "spinegrade/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sg::metrics {

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels, int k) {
  if (true_labels.size() != predicted_labels.size())
    throw ValidationError("confusion: label vectors differ in length");
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    const int t = true_labels[i], p = predicted_labels[i];
    if (t < 0 || t >= k || p < 0 || p >= k)
      throw ValidationError("confusion: label out of range 0.." + std::to_string(k - 1));
    ++cm.counts(t, p);
  }
  return cm;
}

double balanced_accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ValidationError("balanced_accuracy: no samples");
  double sum = 0;
  int classes = 0;
  for (int i = 0; i < cm.k(); ++i) {
    const long row = cm.counts.row(i).sum();
    if (row == 0) continue;
    sum += static_cast<double>(cm.counts(i, i)) / static_cast<double>(row);
    ++classes;
  }
  if (classes == 0) throw ValidationError("balanced_accuracy: all rows empty");
  return 100.0 * sum / classes;
}

KappaWeighting kappa_weighting_from_string(const std::string& s) {
  if (s == "none") return KappaWeighting::none;
  if (s == "linear") return KappaWeighting::linear;
  if (s == "quadratic") return KappaWeighting::quadratic;
  throw ConfigError("kappa weighting: unrecognized value '" + s + "'");
}

std::string to_string(KappaWeighting w) {
  switch (w) {
    case KappaWeighting::none: return "none";
    case KappaWeighting::linear: return "linear";
    default: return "quadratic";
  }
}

double cohens_kappa(const ConfusionMatrix& cm, KappaWeighting weighting) {
  const long n = cm.total();
  if (n == 0) throw ValidationError("cohens_kappa: no samples");
  const int k = cm.k();

  auto weight = [&](int i, int j) -> double {
    if (i == j) return 0.0;
    if (weighting == KappaWeighting::none) return 1.0;
    const double d = static_cast<double>(std::abs(i - j)) / std::max(1, k - 1);
    return weighting == KappaWeighting::linear ? d : d * d;
  };

  Eigen::VectorXd row_marginal(k), col_marginal(k);
  for (int i = 0; i < k; ++i) {
    row_marginal(i) = static_cast<double>(cm.counts.row(i).sum());
    col_marginal(i) = static_cast<double>(cm.counts.col(i).sum());
  }

  double observed = 0, expected = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double w = weight(i, j);
      observed += w * static_cast<double>(cm.counts(i, j));
      expected += w * row_marginal(i) * col_marginal(j) / static_cast<double>(n);
    }
  }
  if (expected <= 0)
    throw ValidationError("undefined kappa: degenerate chance agreement (p_e = 1)");
  return 100.0 * (1.0 - observed / expected);
}

double lins_ccc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("lins_ccc: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("lins_ccc: need at least 2 values");

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += (x[i] - mx) * (x[i] - mx);
    sy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  sx /= static_cast<double>(n);
  sy /= static_cast<double>(n);
  sxy /= static_cast<double>(n);

  const double denom = sx + sy + (mx - my) * (mx - my);
  if (denom == 0) {
    if (x == y) return 100.0;  // both constant with the same value
    throw ValidationError("lins_ccc: zero denominator on non-identical sequences");
  }
  return 100.0 * 2.0 * sxy / denom;
}

void IouAccumulator::add(const MaskImage& pred_mask, const MaskImage& true_mask) {
  if (pred_mask.rows() != true_mask.rows() || pred_mask.cols() != true_mask.cols())
    throw ValidationError("miou: mask shape mismatch");
  const int k = static_cast<int>(inter_.size());
  for (Eigen::Index i = 0; i < pred_mask.size(); ++i) {
    const int p = pred_mask.data()[i], t = true_mask.data()[i];
    if (p >= k || t >= k) throw ValidationError("miou: label out of range");
    if (p == t) {
      ++inter_[p];
      ++uni_[p];
    } else {
      ++uni_[p];
      ++uni_[t];
    }
  }
}

double IouAccumulator::miou_percent() const {
  double sum = 0;
  int classes = 0;
  for (std::size_t c = 0; c < uni_.size(); ++c) {
    if (uni_[c] == 0) continue;  // absent from both
    sum += static_cast<double>(inter_[c]) / static_cast<double>(uni_[c]);
    ++classes;
  }
  if (classes == 0) throw ValidationError("miou: empty masks");
  return 100.0 * sum / classes;
}

double miou(const MaskImage& pred_mask, const MaskImage& true_mask, int k) {
  IouAccumulator acc(k);
  acc.add(pred_mask, true_mask);
  return acc.miou_percent();
}

namespace {

constexpr int kGradeClasses = 4;  // grades 2..5 as class indices 0..3

SubgroupMetrics full_metrics(const std::vector<GradedSample>& samples, KappaWeighting weighting) {
  SubgroupMetrics m;
  m.n = static_cast<long>(samples.size());
  if (m.n < 2) {
    m.note = "insufficient n";
    return m;
  }
  std::vector<int> t, p;
  std::vector<double> td, pd;
  for (const auto& s : samples) {
    t.push_back(s.true_grade - 2);
    p.push_back(s.pred_grade - 2);
    td.push_back(s.true_grade);
    pd.push_back(s.pred_grade);
  }
  const auto cm = confusion(t, p, kGradeClasses);
  m.balanced_accuracy = balanced_accuracy(cm);
  try {
    m.kappa = cohens_kappa(cm, weighting);
  } catch (const ValidationError&) {
    m.note = "undefined kappa";
  }
  m.ccc = lins_ccc(td, pd);
  return m;
}

SubgroupMetrics grade_metrics(const std::vector<GradedSample>& all, int grade,
                              KappaWeighting weighting) {
  SubgroupMetrics m;
  long correct = 0;
  std::vector<int> t_bin, p_bin;
  for (const auto& s : all) {
    t_bin.push_back(s.true_grade == grade ? 1 : 0);
    p_bin.push_back(s.pred_grade == grade ? 1 : 0);
    if (s.true_grade == grade) {
      ++m.n;
      if (s.pred_grade == grade) ++correct;
    }
  }
  if (m.n < 2) {
    m.note = "insufficient n";
    return m;
  }
  m.balanced_accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(m.n);
  try {
    m.kappa = cohens_kappa(confusion(t_bin, p_bin, 2), weighting);
  } catch (const ValidationError&) {
    m.note = "undefined kappa";
  }
  return m;
}

}  // namespace

MetricsReport subgroup_report(const std::vector<GradedSample>& samples,
                              KappaWeighting weighting) {
  if (samples.empty()) throw ValidationError("subgroup_report: no samples");

  MetricsReport report;
  report.n_samples = static_cast<long>(samples.size());
  const auto overall = full_metrics(samples, weighting);
  report.balanced_accuracy = overall.balanced_accuracy.value_or(0);
  report.cohens_kappa = overall.kappa.value_or(0);
  report.lins_ccc = overall.ccc.value_or(0);

  for (core::Sex sex : {core::Sex::F, core::Sex::M}) {
    std::vector<GradedSample> sub;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(sub),
                 [&](const GradedSample& s) { return s.sex == sex; });
    if (sub.empty()) continue;
    report.subgroups["sex"][core::to_string(sex)] = full_metrics(sub, weighting);
  }

  for (core::DiscLevel level : core::kAllLevels) {
    std::vector<GradedSample> sub;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(sub),
                 [&](const GradedSample& s) { return s.level == level; });
    if (sub.empty()) continue;
    report.subgroups["level"][core::to_string(level)] = full_metrics(sub, weighting);
  }

  for (int grade = 2; grade <= 5; ++grade) {
    const bool present = std::any_of(samples.begin(), samples.end(),
                                     [&](const GradedSample& s) { return s.true_grade == grade; });
    if (!present) continue;
    report.subgroups["grade"]["PG" + std::to_string(grade)] =
        grade_metrics(samples, grade, weighting);
  }

  return report;
}

SeedAggregate aggregate_seeds(const std::vector<double>& values) {
  if (values.size() < 2) throw ValidationError("aggregate_seeds: need at least 2 values");
  SeedAggregate agg;
  agg.values = values;
  const double n = static_cast<double>(values.size());
  for (double v : values) agg.mean += v;
  agg.mean /= n;
  double ss = 0;
  for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
  agg.std_dev = std::sqrt(ss / (n - 1.0));
  agg.standard_error = agg.std_dev / std::sqrt(n);
  return agg;
}

std::string format_mean_std(double mean, double std_dev) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f±%.1f", mean, std_dev);
  return buf;
}

}  // namespace sg::metrics
