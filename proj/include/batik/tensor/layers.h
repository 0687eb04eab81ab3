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

#ifndef BATIK_TENSOR_LAYERS_H_
#define BATIK_TENSOR_LAYERS_H_

#include <span>
#include <string>
#include <vector>

#include "batik/tensor/tensor.h"

namespace batik::tensor {

enum class Mode { kTrain, kEval };

// Layers keep whatever the backward pass needs from the last forward call.
// Backward accumulates into parameter gradients and returns the gradient
// with respect to the layer input. Shape mismatches throw InvalidArgument.

// Cross-correlation over N x C x H x W with square kernels.
class Conv2d {
 public:
  Conv2d() = default;
  // He-normal weights (stddev sqrt(2 / (in * k * k))) when rng is given,
  // zeros otherwise.
  Conv2d(const std::string& name, size_t in_channels, size_t out_channels,
         size_t kernel, size_t stride, size_t padding, bool bias, Rng* rng);

  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);

  // floor((in + 2p - k) / s) + 1; InvalidArgument when that is below 1.
  size_t OutputSize(size_t in) const;

  Parameter& weight() { return weight_; }
  const Parameter& weight() const { return weight_; }
  bool has_bias() const { return has_bias_; }
  Parameter& bias() { return bias_; }
  std::vector<Parameter*> Parameters();
  size_t kernel() const { return kernel_; }
  size_t stride() const { return stride_; }
  size_t padding() const { return padding_; }
  size_t in_channels() const { return in_; }
  size_t out_channels() const { return out_; }

 private:
  size_t in_ = 0;
  size_t out_ = 0;
  size_t kernel_ = 1;
  size_t stride_ = 1;
  size_t padding_ = 0;
  bool has_bias_ = false;
  Parameter weight_;
  Parameter bias_;
  Shape input_shape_;
  std::vector<double> cols_;
};

// Per-channel batch normalization for N x C x H x W (or N x C) inputs.
class BatchNorm2d {
 public:
  static constexpr double kEpsilon = 1e-5;
  // Weight on the old running estimate.
  static constexpr double kMomentum = 0.9;

  BatchNorm2d() = default;
  BatchNorm2d(const std::string& name, size_t channels);

  // Train mode needs at least two values per channel.
  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);

  Parameter& gamma() { return gamma_; }
  Parameter& beta() { return beta_; }
  const Parameter& gamma() const { return gamma_; }
  const Parameter& beta() const { return beta_; }
  Tensor& running_mean() { return running_mean_; }
  Tensor& running_var() { return running_var_; }
  const Tensor& running_mean() const { return running_mean_; }
  const Tensor& running_var() const { return running_var_; }
  std::vector<Parameter*> Parameters() { return {&gamma_, &beta_}; }

 private:
  size_t channels_ = 0;
  Parameter gamma_;
  Parameter beta_;
  Tensor running_mean_;
  Tensor running_var_;
  Mode last_mode_ = Mode::kEval;
  Tensor x_hat_;
  std::vector<double> inv_std_;
};

class ReLU {
 public:
  Tensor Forward(const Tensor& x, Mode mode);
  // Gradient is zero where the input was <= 0.
  Tensor Backward(const Tensor& dy);

 private:
  std::vector<bool> positive_;
  Shape shape_;
};

// Max pooling with implicit -inf padding; ties route to the first maximum.
class MaxPool2d {
 public:
  MaxPool2d(size_t kernel = 2, size_t stride = 2, size_t padding = 0);
  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);
  size_t OutputSize(size_t in) const;

 private:
  size_t kernel_;
  size_t stride_;
  size_t padding_;
  Shape input_shape_;
  std::vector<size_t> argmax_;
};

// Average pooling without padding.
class AvgPool2d {
 public:
  AvgPool2d(size_t kernel = 2, size_t stride = 2);
  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);
  size_t OutputSize(size_t in) const;

 private:
  size_t kernel_;
  size_t stride_;
  Shape input_shape_;
};

// N x C x H x W -> N x C.
class GlobalAvgPool {
 public:
  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);

 private:
  Shape input_shape_;
};

// N x D times D x O plus bias O.
class Linear {
 public:
  Linear() = default;
  // Weights uniform in +-1/sqrt(in) when rng is given, zeros otherwise; the
  // bias starts at zero.
  Linear(const std::string& name, size_t in, size_t out, Rng* rng);

  Tensor Forward(const Tensor& x, Mode mode);
  Tensor Backward(const Tensor& dy);

  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  std::vector<Parameter*> Parameters() { return {&weight_, &bias_}; }

 private:
  size_t in_ = 0;
  size_t out_ = 0;
  Parameter weight_;
  Parameter bias_;
  Tensor input_;
};

// Row-wise softmax of an N x K tensor, shifted by the row maximum.
Tensor Softmax(const Tensor& logits);

struct LossResult {
  double loss = 0.0;
  // d loss / d logits = (softmax - onehot) / N
  Tensor grad;
  Tensor probabilities;
};

// Mean cross-entropy of softmax(logits) against integer labels in [0, K).
LossResult SoftmaxCrossEntropy(const Tensor& logits, std::span<const int> labels);

}  // namespace batik::tensor

#endif  // BATIK_TENSOR_LAYERS_H_
