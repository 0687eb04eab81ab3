// Copyright 2026 The Batik KG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BATIK_MODEL_METRICS_H_
#define BATIK_MODEL_METRICS_H_

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace batik::model {

// Rows are true categories, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(size_t k) : k_(k), counts_(k * k, 0) {}
  ConfusionMatrix(size_t k, std::vector<size_t> counts);

  void Add(int truth, int predicted);
  size_t at(size_t truth, size_t predicted) const { return counts_[truth * k_ + predicted]; }
  size_t size() const { return k_; }
  size_t total() const;
  size_t RowSum(size_t truth) const;
  size_t ColSum(size_t predicted) const;
  size_t Trace() const;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  size_t k_;
  std::vector<size_t> counts_;
};

// One-vs-rest counts and ratios for one category. A ratio whose
// denominator is zero is left empty.
struct CategoryMetrics {
  size_t tp = 0, fn = 0, fp = 0, tn = 0;
  std::optional<double> accuracy;   // (TP + TN) / total
  std::optional<double> precision;  // TP / (TP + FP)
  std::optional<double> recall;     // TP / (TP + FN)
  // 2PR / (P + R), evaluated as 2TP / (2TP + FP + FN) so a category with
  // predictions but no hits scores 0 rather than 0/0.
  std::optional<double> f1;
};

struct MetricsReport {
  std::vector<CategoryMetrics> per_category;
  // Unweighted means over the categories where the value is defined.
  std::optional<double> macro_accuracy, macro_precision, macro_recall, macro_f1;
  double overall_accuracy = 0.0;  // trace / total
  std::vector<std::string> warnings;
};

// Harmonic mean of precision and recall; 0 when both are 0.
double F1Score(double precision, double recall);

// InvalidArgument for an empty matrix. `labels` only names categories in
// warnings and may be empty.
MetricsReport ComputeMetrics(const ConfusionMatrix& m,
                             const std::vector<std::string>& labels = {});

struct RocPoint {
  double threshold;  // predict positive when score >= threshold
  double fpr;
  double tpr;
};

struct RocCurve {
  // Starts at (+inf, 0, 0) and ends at (min score, 1, 1) when defined.
  std::vector<RocPoint> points;
  std::optional<double> auc;
  size_t positives = 0;
  size_t negatives = 0;
};

// Threshold sweep over the distinct scores in descending order. AUC is the
// trapezoid area accumulated in integer units, so it equals the
// Mann-Whitney statistic with ties counted as one half. Empty points and
// AUC when one class is absent.
RocCurve ComputeRoc(std::span<const double> scores, std::span<const bool> positive);

struct RocReport {
  std::vector<RocCurve> per_category;
  std::optional<double> macro_auc;
  std::vector<std::string> warnings;
};

// One-vs-rest ROC per category from full score rows.
RocReport ComputeRocReport(const std::vector<std::vector<double>>& scores,
                           const std::vector<int>& labels, size_t num_classes,
                           const std::vector<std::string>& names = {});

// "threshold,fpr,tpr" rows; the first threshold prints as "inf".
std::string FormatRocCsv(const RocCurve& curve);

}  // namespace batik::model

#endif  // BATIK_MODEL_METRICS_H_
