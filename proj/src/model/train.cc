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

#include "batik/model/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "batik/core/error.h"
#include "batik/dataset/image.h"

namespace batik::model {

double LearningRate(const TrainRun& run, size_t epoch) {
  if (run.epochs <= 1) return run.lr_initial;
  const double t = static_cast<double>(epoch) / static_cast<double>(run.epochs - 1);
  return run.lr_initial + (run.lr_final - run.lr_initial) * t;
}

Tensor Augment(const Tensor& chw, const TrainRun& run, Rng& rng) {
  const size_t c = chw.dim(0), h = chw.dim(1), w = chw.dim(2);
  Tensor out = chw;
  if (run.random_resized_crop) {
    size_t top = 0, left = 0, ch = h, cw = w;
    for (int attempt = 0; attempt < 10; ++attempt) {
      const double area = static_cast<double>(h * w) * rng.Uniform(0.6, 1.0);
      const double ratio = std::exp(rng.Uniform(std::log(3.0 / 4.0), std::log(4.0 / 3.0)));
      const auto tw = static_cast<size_t>(std::lround(std::sqrt(area * ratio)));
      const auto th = static_cast<size_t>(std::lround(std::sqrt(area / ratio)));
      if (tw >= 1 && th >= 1 && tw <= w && th <= h) {
        top = rng.Below(h - th + 1);
        left = rng.Below(w - tw + 1);
        ch = th;
        cw = tw;
        break;
      }
    }
    out = dataset::CropResize(chw, top, left, ch, cw, h, w);
  }
  if (run.horizontal_flip && rng.Bernoulli(0.5)) {
    for (size_t k = 0; k < c; ++k) {
      for (size_t y = 0; y < h; ++y) {
        double* row = out.data() + (k * h + y) * w;
        std::reverse(row, row + w);
      }
    }
  }
  return out;
}

namespace {

void CheckSamples(const Model& model, const std::vector<dataset::Sample>& samples) {
  const ArchConfig& cfg = model.config();
  const tensor::Shape want = {cfg.channels, cfg.height, cfg.width};
  for (const auto& s : samples) {
    if (s.image.shape() != want) {
      throw ConfigError("sample " + s.path + " has shape " + tensor::ShapeString(s.image.shape()) +
                        ", model expects " + tensor::ShapeString(want));
    }
    if (s.label < 0 || static_cast<size_t>(s.label) >= cfg.num_classes) {
      throw ConfigError("sample " + s.path + " has label " + std::to_string(s.label) +
                        " outside the " + std::to_string(cfg.num_classes) + "-class head");
    }
  }
}

size_t ArgMax(const double* row, size_t k) {
  return static_cast<size_t>(std::max_element(row, row + k) - row);
}

}  // namespace

TrainHistory Train(Model& model, const std::vector<dataset::Sample>& samples,
                   const TrainRun& run, const EpochCallback& on_epoch) {
  if (samples.empty()) throw ConfigError("training set is empty");
  if (run.batch_size == 0) throw ConfigError("batch size must be positive");
  CheckSamples(model, samples);
  const ArchConfig& cfg = model.config();
  const size_t plane = cfg.channels * cfg.height * cfg.width;
  const size_t k = cfg.num_classes;
  Rng rng(run.seed);
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  auto params = model.Parameters();
  TrainHistory history;
  for (size_t epoch = 0; epoch < run.epochs; ++epoch) {
    rng.Shuffle(order);
    tensor::AdamConfig adam{LearningRate(run, epoch), run.beta1, run.beta2, run.eps};
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.lr = adam.lr;
    double loss_sum = 0.0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += run.batch_size) {
      const size_t n = std::min(run.batch_size, order.size() - start);
      if (n < 2) continue;
      Tensor batch({n, cfg.channels, cfg.height, cfg.width});
      std::vector<int> labels(n);
      for (size_t i = 0; i < n; ++i) {
        const auto& s = samples[order[start + i]];
        const Tensor img = (run.random_resized_crop || run.horizontal_flip)
                               ? Augment(s.image, run, rng)
                               : s.image;
        std::copy(img.data(), img.data() + plane, batch.data() + i * plane);
        labels[i] = s.label;
      }
      tensor::ZeroGrads(params);
      const Tensor logits = model.Forward(batch, Mode::kTrain);
      const tensor::LossResult loss = tensor::SoftmaxCrossEntropy(logits, labels);
      model.Backward(loss.grad);
      tensor::AdamStep(params, adam);
      loss_sum += loss.loss * static_cast<double>(n);
      for (size_t i = 0; i < n; ++i) {
        correct += ArgMax(loss.probabilities.data() + i * k, k) == static_cast<size_t>(labels[i]);
      }
      stats.samples += n;
      ++stats.steps;
    }
    if (stats.samples > 0) {
      stats.loss = loss_sum / static_cast<double>(stats.samples);
      stats.accuracy = static_cast<double>(correct) / static_cast<double>(stats.samples);
    }
    history.total_steps += stats.steps;
    history.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return history;
}

Evaluation Evaluate(Model& model, const std::vector<dataset::Sample>& samples, size_t batch_size) {
  CheckSamples(model, samples);
  const ArchConfig& cfg = model.config();
  const size_t plane = cfg.channels * cfg.height * cfg.width;
  const size_t k = cfg.num_classes;
  Evaluation ev;
  ev.confusion = ConfusionMatrix(k);
  batch_size = std::max<size_t>(batch_size, 1);
  for (size_t start = 0; start < samples.size(); start += batch_size) {
    const size_t n = std::min(batch_size, samples.size() - start);
    Tensor batch({n, cfg.channels, cfg.height, cfg.width});
    for (size_t i = 0; i < n; ++i) {
      std::copy(samples[start + i].image.data(), samples[start + i].image.data() + plane,
                batch.data() + i * plane);
    }
    const Tensor logits = model.Forward(batch, Mode::kEval);
    tensor::CheckFinite(logits, "evaluation logits");
    const Tensor p = tensor::Softmax(logits);
    for (size_t i = 0; i < n; ++i) {
      const double* row = p.data() + i * k;
      const int pred = static_cast<int>(ArgMax(row, k));
      const int label = samples[start + i].label;
      ev.scores.emplace_back(row, row + k);
      ev.labels.push_back(label);
      ev.predictions.push_back(pred);
      ev.confusion.Add(label, pred);
    }
  }
  return ev;
}

std::vector<double> Predict(Model& model, const Tensor& chw) {
  const ArchConfig& cfg = model.config();
  if (chw.shape() != tensor::Shape{cfg.channels, cfg.height, cfg.width}) {
    throw ConfigError("image shape " + tensor::ShapeString(chw.shape()) +
                      " does not match the model input");
  }
  const Tensor logits = model.Forward(chw.Reshaped({1, cfg.channels, cfg.height, cfg.width}),
                                      Mode::kEval);
  tensor::CheckFinite(logits, "prediction logits");
  const Tensor p = tensor::Softmax(logits);
  return {p.data(), p.data() + p.size()};
}

}  // namespace batik::model
