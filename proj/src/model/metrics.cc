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

#include "batik/model/metrics.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::model {

ConfusionMatrix::ConfusionMatrix(size_t k, std::vector<size_t> counts)
    : k_(k), counts_(std::move(counts)) {
  if (counts_.size() != k * k) {
    throw InvalidArgument("confusion matrix needs " + std::to_string(k * k) + " counts");
  }
}

void ConfusionMatrix::Add(int truth, int predicted) {
  if (truth < 0 || predicted < 0 || static_cast<size_t>(truth) >= k_ ||
      static_cast<size_t>(predicted) >= k_) {
    throw InvalidArgument("confusion matrix: category out of range");
  }
  ++counts_[static_cast<size_t>(truth) * k_ + static_cast<size_t>(predicted)];
}

size_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), size_t{0});
}

size_t ConfusionMatrix::RowSum(size_t truth) const {
  size_t s = 0;
  for (size_t p = 0; p < k_; ++p) s += at(truth, p);
  return s;
}

size_t ConfusionMatrix::ColSum(size_t predicted) const {
  size_t s = 0;
  for (size_t t = 0; t < k_; ++t) s += at(t, predicted);
  return s;
}

size_t ConfusionMatrix::Trace() const {
  size_t s = 0;
  for (size_t i = 0; i < k_; ++i) s += at(i, i);
  return s;
}

namespace {

std::optional<double> Ratio(size_t num, size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Name(const std::vector<std::string>& labels, size_t k) {
  return k < labels.size() ? labels[k] : "category " + std::to_string(k);
}

std::optional<double> Mean(const std::vector<CategoryMetrics>& per,
                           std::optional<double> CategoryMetrics::*field) {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& c : per) {
    if (c.*field) {
      sum += *(c.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

double F1Score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

MetricsReport ComputeMetrics(const ConfusionMatrix& m, const std::vector<std::string>& labels) {
  const size_t total = m.total();
  if (m.size() == 0 || total == 0) throw InvalidArgument("metrics: empty confusion matrix");
  MetricsReport r;
  for (size_t k = 0; k < m.size(); ++k) {
    CategoryMetrics c;
    c.tp = m.at(k, k);
    c.fn = m.RowSum(k) - c.tp;
    c.fp = m.ColSum(k) - c.tp;
    c.tn = total - c.tp - c.fn - c.fp;
    c.accuracy = Ratio(c.tp + c.tn, total);
    c.precision = Ratio(c.tp, c.tp + c.fp);
    c.recall = Ratio(c.tp, c.tp + c.fn);
    c.f1 = Ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    if (!c.precision) {
      r.warnings.push_back(Name(labels, k) + ": precision undefined (never predicted)");
    }
    if (!c.recall) r.warnings.push_back(Name(labels, k) + ": recall undefined (no samples)");
    if (!c.f1) r.warnings.push_back(Name(labels, k) + ": F1 undefined");
    r.per_category.push_back(c);
  }
  r.macro_accuracy = Mean(r.per_category, &CategoryMetrics::accuracy);
  r.macro_precision = Mean(r.per_category, &CategoryMetrics::precision);
  r.macro_recall = Mean(r.per_category, &CategoryMetrics::recall);
  r.macro_f1 = Mean(r.per_category, &CategoryMetrics::f1);
  r.overall_accuracy = static_cast<double>(m.Trace()) / static_cast<double>(total);
  return r;
}

RocCurve ComputeRoc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw InvalidArgument("roc: " + std::to_string(scores.size()) + " scores for " +
                          std::to_string(positive.size()) + " labels");
  }
  RocCurve curve;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw NumericError("roc: non-finite score");
    (positive[i] ? curve.positives : curve.negatives) += 1;
  }
  if (curve.positives == 0 || curve.negatives == 0) return curve;

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  const double p = static_cast<double>(curve.positives);
  const double n = static_cast<double>(curve.negatives);
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  uint64_t tp = 0, fp = 0;
  uint64_t area2 = 0;  // twice the area in units of one positive x one negative
  for (size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    uint64_t dp = 0, dn = 0;
    for (; i < order.size() && scores[order[i]] == t; ++i) {
      (positive[order[i]] ? dp : dn) += 1;
    }
    area2 += dn * (2 * tp + dp);
    tp += dp;
    fp += dn;
    curve.points.push_back({t, static_cast<double>(fp) / n, static_cast<double>(tp) / p});
  }
  curve.auc = static_cast<double>(area2) / (2.0 * p * n);
  return curve;
}

RocReport ComputeRocReport(const std::vector<std::vector<double>>& scores,
                           const std::vector<int>& labels, size_t num_classes,
                           const std::vector<std::string>& names) {
  if (scores.size() != labels.size()) throw InvalidArgument("roc: score rows and labels differ");
  RocReport r;
  double sum = 0.0;
  size_t defined = 0;
  for (size_t k = 0; k < num_classes; ++k) {
    std::vector<double> s(scores.size());
    auto pos = std::make_unique<bool[]>(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].size() != num_classes) throw InvalidArgument("roc: score row width mismatch");
      s[i] = scores[i][k];
      pos[i] = labels[i] == static_cast<int>(k);
    }
    RocCurve c = ComputeRoc(s, std::span<const bool>(pos.get(), scores.size()));
    if (c.auc) {
      sum += *c.auc;
      ++defined;
    } else {
      r.warnings.push_back(Name(names, k) + ": AUC undefined (single-class labels)");
    }
    r.per_category.push_back(std::move(c));
  }
  if (defined > 0) r.macro_auc = sum / static_cast<double>(defined);
  return r;
}

std::string FormatRocCsv(const RocCurve& curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    out += (std::isinf(p.threshold) ? std::string("inf") : FormatDouble(p.threshold)) + "," +
           FormatDouble(p.fpr) + "," + FormatDouble(p.tpr) + "\n";
  }
  return out;
}

}  // namespace batik::model
