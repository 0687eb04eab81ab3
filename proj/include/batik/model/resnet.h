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

#ifndef BATIK_MODEL_RESNET_H_
#define BATIK_MODEL_RESNET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "batik/core/random.h"
#include "batik/model/arch.h"
#include "batik/tensor/checkpoint.h"
#include "batik/tensor/layers.h"

namespace batik::model {

using tensor::Mode;
using tensor::Parameter;
using tensor::Tensor;

// Named pointers to every tensor a checkpoint must hold: parameter values
// followed by batch-norm running statistics.
using StateRefs = std::vector<std::pair<std::string, Tensor*>>;

// Channel/stride projection. With pooling: AvgPool(2, 2) when stride is 2,
// then a stride-1 1x1 conv, then BN. Without: a strided 1x1 conv, then BN.
class Projection {
 public:
  Projection(const std::string& name, size_t in, size_t out, size_t stride,
             bool pooled, Rng& rng);
  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);
  void Collect(std::vector<Parameter*>& params, StateRefs& state);
  void Describe(std::vector<std::string>& out) const;

 private:
  std::optional<tensor::AvgPool2d> pool_;
  tensor::Conv2d conv_;
  tensor::BatchNorm2d bn_;
};

// conv3x3(stride) -> BN -> ReLU -> conv3x3 -> BN, plus the shortcut, plus an
// optional extra term, then ReLU.
class BasicBlock {
 public:
  BasicBlock(const std::string& name, size_t in, size_t out, size_t stride,
             bool pool_conv_shortcut, Rng& rng);

  // `extra`, when given, is added to the sum before the final ReLU and must
  // have the output shape.
  Tensor Forward(const Tensor& x, Mode mode, const Tensor* extra = nullptr);
  // Returns the input gradient; `d_extra` receives the gradient of the
  // pre-activation sum, which is also the gradient of `extra`.
  Tensor Backward(const Tensor& dy, Tensor* d_extra = nullptr);

  bool has_projection() const { return shortcut_.has_value(); }
  tensor::Conv2d& conv1() { return conv1_; }
  tensor::Conv2d& conv2() { return conv2_; }
  tensor::BatchNorm2d& bn1() { return bn1_; }
  tensor::BatchNorm2d& bn2() { return bn2_; }
  void Collect(std::vector<Parameter*>& params, StateRefs& state);
  void Describe(std::vector<std::string>& out) const;

 private:
  std::string name_;
  tensor::Conv2d conv1_;
  tensor::BatchNorm2d bn1_;
  tensor::ReLU relu1_;
  tensor::Conv2d conv2_;
  tensor::BatchNorm2d bn2_;
  std::optional<Projection> shortcut_;
  tensor::ReLU relu_out_;
};

class Model {
 public:
  // Validates the config; weights are drawn from `seed`.
  Model(const ArchConfig& config, uint64_t seed);

  // N x C x H x W -> N x num_classes logits.
  Tensor Forward(const Tensor& x, Mode mode);
  // Accumulates parameter gradients from d loss / d logits.
  void Backward(const Tensor& dlogits);

  std::vector<Parameter*> Parameters();
  size_t ParameterCount();
  // One line per layer in execution order, e.g. "layer2.0.conv1 conv3x3
  // 64->128 /2".
  std::vector<std::string> Describe() const;

  tensor::NamedTensors State();
  // ConfigError when names or shapes differ from this model's layout.
  void LoadState(const tensor::NamedTensors& state);

  const ArchConfig& config() const { return config_; }
  std::vector<BasicBlock>& blocks() { return blocks_; }

 private:
  struct Link {
    size_t first;  // block index where the pair starts
    std::optional<Projection> projection;
    Tensor input;
  };
  void Collect(std::vector<Parameter*>& params, StateRefs& state);

  ArchConfig config_;
  tensor::Conv2d stem_conv_;
  tensor::BatchNorm2d stem_bn_;
  tensor::ReLU stem_relu_;
  tensor::MaxPool2d stem_pool_{3, 2, 1};
  std::vector<BasicBlock> blocks_;
  // Indexed by the second block of each enabled pair.
  std::vector<std::optional<Link>> links_;
  tensor::GlobalAvgPool gap_;
  tensor::Linear fc_;
};

// Writes the checkpoint to `path` and the architecture to SidecarPath(path).
void SaveModel(const std::filesystem::path& path, Model& model);
Model LoadModel(const std::filesystem::path& path);
std::filesystem::path SidecarPath(const std::filesystem::path& checkpoint);

}  // namespace batik::model

#endif  // BATIK_MODEL_RESNET_H_
