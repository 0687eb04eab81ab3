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

#include <cmath>

#include "batik/core/error.h"
#include "batik/simd/kernels.h"
#include "batik/tensor/layers.h"

namespace batik::tensor {

Conv2d::Conv2d(const std::string& name, size_t in_channels,
               size_t out_channels, size_t kernel, size_t stride,
               size_t padding, bool bias, Rng* rng)
    : in_(in_channels),
      out_(out_channels),
      kernel_(kernel),
      stride_(stride),
      padding_(padding),
      has_bias_(bias) {
  if (in_ == 0 || out_ == 0 || kernel_ == 0 || stride_ == 0) {
    throw InvalidArgument("conv " + name + ": zero-sized dimension");
  }
  const Shape shape = {out_, in_, kernel_, kernel_};
  const double stddev = std::sqrt(2.0 / static_cast<double>(in_ * kernel_ * kernel_));
  weight_ = Parameter(name + ".weight",
                      rng ? Tensor::RandomNormal(shape, *rng, stddev) : Tensor(shape));
  if (has_bias_) bias_ = Parameter(name + ".bias", Tensor({out_}));
}

std::vector<Parameter*> Conv2d::Parameters() {
  if (has_bias_) return {&weight_, &bias_};
  return {&weight_};
}

size_t Conv2d::OutputSize(size_t in) const {
  const long span = static_cast<long>(in + 2 * padding_) - static_cast<long>(kernel_);
  if (span < 0) {
    throw InvalidArgument("conv: kernel " + std::to_string(kernel_) +
                          " larger than padded input " + std::to_string(in));
  }
  return static_cast<size_t>(span) / stride_ + 1;
}

Tensor Conv2d::Forward(const Tensor& x, Mode mode) {
  if (x.rank() != 4 || x.dim(1) != in_) {
    throw InvalidArgument("conv " + weight_.name + ": expected N x " +
                          std::to_string(in_) + " x H x W, got " +
                          ShapeString(x.shape()));
  }
  const size_t n = x.dim(0);
  const size_t h = x.dim(2);
  const size_t w = x.dim(3);
  const size_t oh = OutputSize(h);
  const size_t ow = OutputSize(w);
  const size_t plane = oh * ow;
  const size_t cols_n = n * plane;
  const size_t rows = in_ * kernel_ * kernel_;

  // im2col: rows are (c, ki, kj), columns are (sample, output pixel).
  std::vector<double> cols(rows * cols_n);
  for (size_t c = 0; c < in_; ++c) {
    for (size_t ki = 0; ki < kernel_; ++ki) {
      for (size_t kj = 0; kj < kernel_; ++kj) {
        double* row = &cols[((c * kernel_ + ki) * kernel_ + kj) * cols_n];
        for (size_t s = 0; s < n; ++s) {
          const double* src = &x.data()[(s * in_ + c) * h * w];
          double* dst = row + s * plane;
          for (size_t i = 0; i < oh; ++i) {
            const long y = static_cast<long>(i * stride_ + ki) - static_cast<long>(padding_);
            if (y < 0 || y >= static_cast<long>(h)) {
              std::fill(dst + i * ow, dst + (i + 1) * ow, 0.0);
              continue;
            }
            const double* line = src + y * w;
            for (size_t j = 0; j < ow; ++j) {
              const long xx = static_cast<long>(j * stride_ + kj) - static_cast<long>(padding_);
              dst[i * ow + j] = (xx < 0 || xx >= static_cast<long>(w)) ? 0.0 : line[xx];
            }
          }
        }
      }
    }
  }

  std::vector<double> y2(out_ * cols_n);
  simd::GemmArgs g;
  g.m = out_;
  g.n = cols_n;
  g.k = rows;
  g.a = weight_.value.data();
  g.lda = rows;
  g.b = cols.data();
  g.ldb = cols_n;
  g.c = y2.data();
  g.ldc = cols_n;
  simd::Gemm(g);

  Tensor y({n, out_, oh, ow});
  for (size_t s = 0; s < n; ++s) {
    for (size_t f = 0; f < out_; ++f) {
      const double b = has_bias_ ? bias_.value[f] : 0.0;
      const double* src = &y2[f * cols_n + s * plane];
      double* dst = &y.data()[(s * out_ + f) * plane];
      for (size_t p = 0; p < plane; ++p) dst[p] = src[p] + b;
    }
  }
  input_shape_ = x.shape();
  if (mode == Mode::kTrain) {
    cols_ = std::move(cols);
  } else {
    cols_.clear();
  }
  return y;
}

Tensor Conv2d::Backward(const Tensor& dy) {
  if (cols_.empty()) throw InvalidArgument("conv backward without a train-mode forward");
  const size_t n = input_shape_[0];
  const size_t h = input_shape_[2];
  const size_t w = input_shape_[3];
  const size_t oh = OutputSize(h);
  const size_t ow = OutputSize(w);
  if (dy.shape() != Shape{n, out_, oh, ow}) {
    throw InvalidArgument("conv backward: gradient shape " + ShapeString(dy.shape()));
  }
  const size_t plane = oh * ow;
  const size_t cols_n = n * plane;
  const size_t rows = in_ * kernel_ * kernel_;

  std::vector<double> dy2(out_ * cols_n);
  for (size_t s = 0; s < n; ++s) {
    for (size_t f = 0; f < out_; ++f) {
      const double* src = &dy.data()[(s * out_ + f) * plane];
      std::copy(src, src + plane, &dy2[f * cols_n + s * plane]);
    }
  }
  if (has_bias_) {
    for (size_t f = 0; f < out_; ++f) {
      double sum = 0.0;
      for (size_t q = 0; q < cols_n; ++q) sum += dy2[f * cols_n + q];
      bias_.grad[f] += sum;
    }
    bias_.has_grad = true;
  }

  simd::GemmArgs gw;  // dW += dY2 * cols^T
  gw.trans_b = true;
  gw.m = out_;
  gw.n = rows;
  gw.k = cols_n;
  gw.a = dy2.data();
  gw.lda = cols_n;
  gw.b = cols_.data();
  gw.ldb = cols_n;
  gw.beta = 1.0;
  gw.c = weight_.grad.data();
  gw.ldc = rows;
  simd::Gemm(gw);
  weight_.has_grad = true;

  std::vector<double> dcols(rows * cols_n);
  simd::GemmArgs gx;  // dcols = W^T * dY2
  gx.trans_a = true;
  gx.m = rows;
  gx.n = cols_n;
  gx.k = out_;
  gx.a = weight_.value.data();
  gx.lda = rows;
  gx.b = dy2.data();
  gx.ldb = cols_n;
  gx.c = dcols.data();
  gx.ldc = cols_n;
  simd::Gemm(gx);

  Tensor dx(input_shape_);
  for (size_t c = 0; c < in_; ++c) {
    for (size_t ki = 0; ki < kernel_; ++ki) {
      for (size_t kj = 0; kj < kernel_; ++kj) {
        const double* row = &dcols[((c * kernel_ + ki) * kernel_ + kj) * cols_n];
        for (size_t s = 0; s < n; ++s) {
          double* dst = &dx.data()[(s * in_ + c) * h * w];
          const double* src = row + s * plane;
          for (size_t i = 0; i < oh; ++i) {
            const long y = static_cast<long>(i * stride_ + ki) - static_cast<long>(padding_);
            if (y < 0 || y >= static_cast<long>(h)) continue;
            double* line = dst + y * w;
            for (size_t j = 0; j < ow; ++j) {
              const long xx = static_cast<long>(j * stride_ + kj) - static_cast<long>(padding_);
              if (xx >= 0 && xx < static_cast<long>(w)) line[xx] += src[i * ow + j];
            }
          }
        }
      }
    }
  }
  return dx;
}

}  // namespace batik::tensor
