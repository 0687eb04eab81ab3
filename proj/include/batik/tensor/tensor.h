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

#ifndef BATIK_TENSOR_TENSOR_H_
#define BATIK_TENSOR_TENSOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batik/core/random.h"

namespace batik::tensor {

using Shape = std::vector<size_t>;

std::string ShapeString(const Shape& shape);
size_t ShapeSize(const Shape& shape);

// Dense row-major array of doubles.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  // Throws InvalidArgument when data.size() != product of shape.
  Tensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_[i]; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  // 4-D element access, N x C x H x W.
  double& at(size_t n, size_t c, size_t h, size_t w) {
    return data_[((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
  }
  double at(size_t n, size_t c, size_t h, size_t w) const {
    return data_[((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
  }

  void Fill(double v);
  bool AllFinite() const;
  // Same data under a new shape of equal size.
  Tensor Reshaped(Shape shape) const;

  static Tensor RandomNormal(Shape shape, Rng& rng, double stddev = 1.0);
  static Tensor RandomUniform(Shape shape, Rng& rng, double lo, double hi);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// NumericError naming `where` if any element is NaN or infinite.
void CheckFinite(const Tensor& t, std::string_view where);

// Trainable tensor with its gradient and Adam state.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  void ZeroGrad();

  std::string name;
  Tensor value;
  Tensor grad;
  // Set by a backward pass; cleared by ZeroGrad.
  bool has_grad = false;
  Tensor m;
  Tensor v;
  int64_t step = 0;
};

}  // namespace batik::tensor

#endif  // BATIK_TENSOR_TENSOR_H_
