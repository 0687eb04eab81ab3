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

#ifndef BATIK_MODEL_TRAIN_H_
#define BATIK_MODEL_TRAIN_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "batik/core/random.h"
#include "batik/dataset/loader.h"
#include "batik/model/metrics.h"
#include "batik/model/resnet.h"
#include "batik/tensor/optim.h"

namespace batik::model {

struct TrainRun {
  size_t epochs = 100;
  size_t batch_size = 8;
  double lr_initial = 1e-3;
  double lr_final = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  uint64_t seed = 1;
  bool random_resized_crop = true;
  bool horizontal_flip = true;
};

// Linear interpolation from lr_initial at epoch 0 to lr_final at the last
// epoch.
double LearningRate(const TrainRun& run, size_t epoch);

struct EpochStats {
  size_t epoch = 0;  // 1-based
  double lr = 0.0;
  double loss = 0.0;      // mean over trained samples
  double accuracy = 0.0;  // on the augmented training batches
  size_t steps = 0;
  size_t samples = 0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  size_t total_steps = 0;
};

// Random crop covering 60-100% of the area with aspect ratio in [3/4, 4/3],
// resized back to the input size, then a horizontal flip with probability
// 1/2. Either step can be switched off through `run`.
Tensor Augment(const Tensor& chw, const TrainRun& run, Rng& rng);

using EpochCallback = std::function<void(const EpochStats&)>;

// Mini-batch Adam over shuffled samples. A trailing batch of one sample is
// skipped because batch norm cannot normalize it. ConfigError for an empty
// set, a label outside the head or an image of the wrong shape.
TrainHistory Train(Model& model, const std::vector<dataset::Sample>& samples,
                   const TrainRun& run, const EpochCallback& on_epoch = {});

struct Evaluation {
  ConfusionMatrix confusion{0};
  std::vector<std::vector<double>> scores;  // softmax rows
  std::vector<int> labels;
  std::vector<int> predictions;
};

// Eval-mode forward over `samples`; predictions are the first maximum.
Evaluation Evaluate(Model& model, const std::vector<dataset::Sample>& samples,
                    size_t batch_size = 32);

// Softmax over the classes for one C x H x W image.
std::vector<double> Predict(Model& model, const Tensor& chw);

}  // namespace batik::model

#endif  // BATIK_MODEL_TRAIN_H_
