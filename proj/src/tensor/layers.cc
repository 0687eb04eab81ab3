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

#include "batik/tensor/layers.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "batik/core/error.h"
#include "batik/simd/kernels.h"

namespace batik::tensor {

namespace {

// Channels, and values per channel per sample, of an N x C [x H x W] tensor.
std::pair<size_t, size_t> ChannelLayout(const Tensor& x) {
  if (x.rank() != 2 && x.rank() != 4) {
    throw InvalidArgument("batch norm: expected rank 2 or 4, got " +
                          ShapeString(x.shape()));
  }
  return {x.dim(1), x.rank() == 4 ? x.dim(2) * x.dim(3) : 1};
}

void Require4d(const Tensor& x, const char* layer) {
  if (x.rank() != 4) {
    throw InvalidArgument(std::string(layer) + ": expected N x C x H x W, got " +
                          ShapeString(x.shape()));
  }
}

}  // namespace

BatchNorm2d::BatchNorm2d(const std::string& name, size_t channels)
    : channels_(channels),
      gamma_(name + ".gamma", Tensor({channels}, 1.0)),
      beta_(name + ".beta", Tensor({channels}, 0.0)),
      running_mean_({channels}, 0.0),
      running_var_({channels}, 1.0) {}

Tensor BatchNorm2d::Forward(const Tensor& x, Mode mode) {
  const auto [channels, inner] = ChannelLayout(x);
  if (channels != channels_) {
    throw InvalidArgument(gamma_.name + ": expected " + std::to_string(channels_) +
                          " channels, got " + ShapeString(x.shape()));
  }
  const size_t n = x.dim(0);
  const size_t m = n * inner;
  Tensor y(x.shape());
  x_hat_ = Tensor(x.shape());
  inv_std_.assign(channels_, 0.0);
  last_mode_ = mode;
  if (mode == Mode::kTrain && m < 2) {
    throw InvalidArgument(gamma_.name + ": train mode needs at least 2 values per channel");
  }
  for (size_t c = 0; c < channels_; ++c) {
    double mean;
    double var;
    if (mode == Mode::kTrain) {
      double sum = 0.0;
      for (size_t s = 0; s < n; ++s) {
        const double* p = x.data() + (s * channels_ + c) * inner;
        for (size_t i = 0; i < inner; ++i) sum += p[i];
      }
      mean = sum / static_cast<double>(m);
      double sq = 0.0;
      for (size_t s = 0; s < n; ++s) {
        const double* p = x.data() + (s * channels_ + c) * inner;
        for (size_t i = 0; i < inner; ++i) sq += (p[i] - mean) * (p[i] - mean);
      }
      var = sq / static_cast<double>(m);
      running_mean_[c] = kMomentum * running_mean_[c] + (1.0 - kMomentum) * mean;
      running_var_[c] = kMomentum * running_var_[c] +
                        (1.0 - kMomentum) * sq / static_cast<double>(m - 1);
    } else {
      mean = running_mean_[c];
      var = running_var_[c];
    }
    const double inv = 1.0 / std::sqrt(var + kEpsilon);
    inv_std_[c] = inv;
    const double g = gamma_.value[c];
    const double b = beta_.value[c];
    for (size_t s = 0; s < n; ++s) {
      const size_t off = (s * channels_ + c) * inner;
      for (size_t i = 0; i < inner; ++i) {
        const double xh = (x[off + i] - mean) * inv;
        x_hat_[off + i] = xh;
        y[off + i] = g * xh + b;
      }
    }
  }
  return y;
}

Tensor BatchNorm2d::Backward(const Tensor& dy) {
  if (dy.shape() != x_hat_.shape()) {
    throw InvalidArgument(gamma_.name + " backward: gradient shape " +
                          ShapeString(dy.shape()));
  }
  const auto [channels, inner] = ChannelLayout(dy);
  const size_t n = dy.dim(0);
  const double m = static_cast<double>(n * inner);
  Tensor dx(dy.shape());
  for (size_t c = 0; c < channels; ++c) {
    double sum_dy = 0.0;
    double sum_dy_xh = 0.0;
    for (size_t s = 0; s < n; ++s) {
      const size_t off = (s * channels + c) * inner;
      for (size_t i = 0; i < inner; ++i) {
        sum_dy += dy[off + i];
        sum_dy_xh += dy[off + i] * x_hat_[off + i];
      }
    }
    gamma_.grad[c] += sum_dy_xh;
    beta_.grad[c] += sum_dy;
    const double g = gamma_.value[c] * inv_std_[c];
    for (size_t s = 0; s < n; ++s) {
      const size_t off = (s * channels + c) * inner;
      for (size_t i = 0; i < inner; ++i) {
        if (last_mode_ == Mode::kTrain) {
          dx[off + i] = g * (dy[off + i] - sum_dy / m - x_hat_[off + i] * sum_dy_xh / m);
        } else {
          dx[off + i] = g * dy[off + i];
        }
      }
    }
  }
  gamma_.has_grad = true;
  beta_.has_grad = true;
  return dx;
}

Tensor ReLU::Forward(const Tensor& x, Mode) {
  Tensor y(x.shape());
  positive_.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    positive_[i] = x[i] > 0.0;
    y[i] = positive_[i] ? x[i] : 0.0;
  }
  shape_ = x.shape();
  return y;
}

Tensor ReLU::Backward(const Tensor& dy) {
  if (dy.shape() != shape_) {
    throw InvalidArgument("relu backward: gradient shape " + ShapeString(dy.shape()));
  }
  Tensor dx(dy.shape());
  for (size_t i = 0; i < dy.size(); ++i) dx[i] = positive_[i] ? dy[i] : 0.0;
  return dx;
}

MaxPool2d::MaxPool2d(size_t kernel, size_t stride, size_t padding)
    : kernel_(kernel), stride_(stride), padding_(padding) {
  if (kernel_ == 0 || stride_ == 0 || padding_ >= kernel_) {
    throw InvalidArgument("max pool: need kernel, stride > 0 and padding < kernel");
  }
}

size_t MaxPool2d::OutputSize(size_t in) const {
  if (kernel_ > in + 2 * padding_) {
    throw InvalidArgument("max pool: window " + std::to_string(kernel_) +
                          " larger than input " + std::to_string(in));
  }
  return (in + 2 * padding_ - kernel_) / stride_ + 1;
}

Tensor MaxPool2d::Forward(const Tensor& x, Mode) {
  Require4d(x, "max pool");
  const size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const size_t oh = OutputSize(h), ow = OutputSize(w);
  Tensor y({n, c, oh, ow});
  argmax_.assign(y.size(), 0);
  for (size_t plane = 0; plane < n * c; ++plane) {
    const double* src = x.data() + plane * h * w;
    for (size_t i = 0; i < oh; ++i) {
      for (size_t j = 0; j < ow; ++j) {
        double best = -std::numeric_limits<double>::infinity();
        size_t arg = 0;
        bool found = false;
        for (size_t ki = 0; ki < kernel_; ++ki) {
          const long yy = static_cast<long>(i * stride_ + ki) - static_cast<long>(padding_);
          if (yy < 0 || yy >= static_cast<long>(h)) continue;
          for (size_t kj = 0; kj < kernel_; ++kj) {
            const long xx = static_cast<long>(j * stride_ + kj) - static_cast<long>(padding_);
            if (xx < 0 || xx >= static_cast<long>(w)) continue;
            const size_t idx = static_cast<size_t>(yy) * w + static_cast<size_t>(xx);
            if (!found || src[idx] > best) {
              best = src[idx];
              arg = idx;
              found = true;
            }
          }
        }
        const size_t out = (plane * oh + i) * ow + j;
        y[out] = best;
        argmax_[out] = plane * h * w + arg;
      }
    }
  }
  input_shape_ = x.shape();
  return y;
}

Tensor MaxPool2d::Backward(const Tensor& dy) {
  if (dy.size() != argmax_.size()) {
    throw InvalidArgument("max pool backward: gradient shape " + ShapeString(dy.shape()));
  }
  Tensor dx(input_shape_);
  for (size_t i = 0; i < dy.size(); ++i) dx[argmax_[i]] += dy[i];
  return dx;
}

AvgPool2d::AvgPool2d(size_t kernel, size_t stride) : kernel_(kernel), stride_(stride) {
  if (kernel_ == 0 || stride_ == 0) throw InvalidArgument("avg pool: zero kernel or stride");
}

size_t AvgPool2d::OutputSize(size_t in) const {
  if (kernel_ > in) {
    throw InvalidArgument("avg pool: window " + std::to_string(kernel_) +
                          " larger than input " + std::to_string(in));
  }
  return (in - kernel_) / stride_ + 1;
}

Tensor AvgPool2d::Forward(const Tensor& x, Mode) {
  Require4d(x, "avg pool");
  const size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const size_t oh = OutputSize(h), ow = OutputSize(w);
  const double scale = 1.0 / static_cast<double>(kernel_ * kernel_);
  Tensor y({n, c, oh, ow});
  for (size_t plane = 0; plane < n * c; ++plane) {
    const double* src = x.data() + plane * h * w;
    for (size_t i = 0; i < oh; ++i) {
      for (size_t j = 0; j < ow; ++j) {
        double sum = 0.0;
        for (size_t ki = 0; ki < kernel_; ++ki) {
          for (size_t kj = 0; kj < kernel_; ++kj) {
            sum += src[(i * stride_ + ki) * w + j * stride_ + kj];
          }
        }
        y[(plane * oh + i) * ow + j] = sum * scale;
      }
    }
  }
  input_shape_ = x.shape();
  return y;
}

Tensor AvgPool2d::Backward(const Tensor& dy) {
  const size_t n = input_shape_[0], c = input_shape_[1];
  const size_t h = input_shape_[2], w = input_shape_[3];
  const size_t oh = OutputSize(h), ow = OutputSize(w);
  if (dy.shape() != Shape{n, c, oh, ow}) {
    throw InvalidArgument("avg pool backward: gradient shape " + ShapeString(dy.shape()));
  }
  const double scale = 1.0 / static_cast<double>(kernel_ * kernel_);
  Tensor dx(input_shape_);
  for (size_t plane = 0; plane < n * c; ++plane) {
    double* dst = dx.data() + plane * h * w;
    for (size_t i = 0; i < oh; ++i) {
      for (size_t j = 0; j < ow; ++j) {
        const double g = dy[(plane * oh + i) * ow + j] * scale;
        for (size_t ki = 0; ki < kernel_; ++ki) {
          for (size_t kj = 0; kj < kernel_; ++kj) {
            dst[(i * stride_ + ki) * w + j * stride_ + kj] += g;
          }
        }
      }
    }
  }
  return dx;
}

Tensor GlobalAvgPool::Forward(const Tensor& x, Mode) {
  Require4d(x, "global avg pool");
  const size_t n = x.dim(0), c = x.dim(1), inner = x.dim(2) * x.dim(3);
  Tensor y({n, c});
  for (size_t p = 0; p < n * c; ++p) {
    double sum = 0.0;
    for (size_t i = 0; i < inner; ++i) sum += x[p * inner + i];
    y[p] = sum / static_cast<double>(inner);
  }
  input_shape_ = x.shape();
  return y;
}

Tensor GlobalAvgPool::Backward(const Tensor& dy) {
  const size_t n = input_shape_[0], c = input_shape_[1];
  if (dy.shape() != Shape{n, c}) {
    throw InvalidArgument("global avg pool backward: gradient shape " +
                          ShapeString(dy.shape()));
  }
  const size_t inner = input_shape_[2] * input_shape_[3];
  Tensor dx(input_shape_);
  for (size_t p = 0; p < n * c; ++p) {
    const double g = dy[p] / static_cast<double>(inner);
    for (size_t i = 0; i < inner; ++i) dx[p * inner + i] = g;
  }
  return dx;
}

Linear::Linear(const std::string& name, size_t in, size_t out, Rng* rng)
    : in_(in), out_(out) {
  if (in_ == 0 || out_ == 0) throw InvalidArgument("linear " + name + ": zero size");
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_));
  weight_ = Parameter(name + ".weight", rng ? Tensor::RandomUniform({in_, out_}, *rng,
                                                                     -bound, bound)
                                            : Tensor({in_, out_}));
  bias_ = Parameter(name + ".bias", Tensor({out_}));
}

Tensor Linear::Forward(const Tensor& x, Mode) {
  if (x.rank() != 2 || x.dim(1) != in_) {
    throw InvalidArgument(weight_.name + ": expected N x " + std::to_string(in_) +
                          ", got " + ShapeString(x.shape()));
  }
  const size_t n = x.dim(0);
  Tensor y({n, out_});
  for (size_t s = 0; s < n; ++s) {
    std::copy(bias_.value.data(), bias_.value.data() + out_, y.data() + s * out_);
  }
  simd::GemmArgs g;
  g.m = n;
  g.n = out_;
  g.k = in_;
  g.a = x.data();
  g.lda = in_;
  g.b = weight_.value.data();
  g.ldb = out_;
  g.beta = 1.0;
  g.c = y.data();
  g.ldc = out_;
  simd::Gemm(g);
  input_ = x;
  return y;
}

Tensor Linear::Backward(const Tensor& dy) {
  const size_t n = input_.dim(0);
  if (dy.shape() != Shape{n, out_}) {
    throw InvalidArgument(weight_.name + " backward: gradient shape " +
                          ShapeString(dy.shape()));
  }
  for (size_t s = 0; s < n; ++s) {
    for (size_t o = 0; o < out_; ++o) bias_.grad[o] += dy[s * out_ + o];
  }
  simd::GemmArgs gw;  // dW += x^T dy
  gw.trans_a = true;
  gw.m = in_;
  gw.n = out_;
  gw.k = n;
  gw.a = input_.data();
  gw.lda = in_;
  gw.b = dy.data();
  gw.ldb = out_;
  gw.beta = 1.0;
  gw.c = weight_.grad.data();
  gw.ldc = out_;
  simd::Gemm(gw);

  Tensor dx({n, in_});
  simd::GemmArgs gx;  // dx = dy W^T
  gx.trans_b = true;
  gx.m = n;
  gx.n = in_;
  gx.k = out_;
  gx.a = dy.data();
  gx.lda = out_;
  gx.b = weight_.value.data();
  gx.ldb = out_;
  gx.c = dx.data();
  gx.ldc = in_;
  simd::Gemm(gx);
  weight_.has_grad = true;
  bias_.has_grad = true;
  return dx;
}

Tensor Softmax(const Tensor& logits) {
  if (logits.rank() != 2) {
    throw InvalidArgument("softmax: expected N x K, got " + ShapeString(logits.shape()));
  }
  const size_t n = logits.dim(0), k = logits.dim(1);
  Tensor p(logits.shape());
  for (size_t s = 0; s < n; ++s) {
    const double* row = logits.data() + s * k;
    const double mx = *std::max_element(row, row + k);
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) {
      p[s * k + j] = std::exp(row[j] - mx);
      sum += p[s * k + j];
    }
    for (size_t j = 0; j < k; ++j) p[s * k + j] /= sum;
  }
  return p;
}

LossResult SoftmaxCrossEntropy(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2 || logits.dim(0) != labels.size() || labels.empty()) {
    throw InvalidArgument("cross entropy: " + ShapeString(logits.shape()) +
                          " logits for " + std::to_string(labels.size()) + " labels");
  }
  CheckFinite(logits, "cross entropy logits");
  const size_t n = logits.dim(0), k = logits.dim(1);
  LossResult r;
  r.probabilities = Softmax(logits);
  r.grad = r.probabilities;
  double total = 0.0;
  for (size_t s = 0; s < n; ++s) {
    const int y = labels[s];
    if (y < 0 || static_cast<size_t>(y) >= k) {
      throw InvalidArgument("cross entropy: label " + std::to_string(y) +
                            " outside [0, " + std::to_string(k) + ")");
    }
    const double* row = logits.data() + s * k;
    const double mx = *std::max_element(row, row + k);
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) sum += std::exp(row[j] - mx);
    total += mx + std::log(sum) - row[y];
    r.grad[s * k + y] -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& g : r.grad.values()) g *= inv_n;
  r.loss = total * inv_n;
  return r;
}

}  // namespace batik::tensor
