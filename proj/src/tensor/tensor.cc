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

#include "batik/tensor/tensor.h"

#include <algorithm>
#include <cmath>

#include "batik/core/error.h"

namespace batik::tensor {

std::string ShapeString(const Shape& shape) {
  std::string out;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += "x";
    out += std::to_string(shape[i]);
  }
  return out.empty() ? "scalar" : out;
}

size_t ShapeSize(const Shape& shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != ShapeSize(shape_)) {
    throw InvalidArgument("tensor data has " + std::to_string(data_.size()) +
                          " values for shape " + ShapeString(shape_));
  }
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Tensor Tensor::Reshaped(Shape shape) const {
  if (ShapeSize(shape) != data_.size()) {
    throw InvalidArgument("cannot reshape " + ShapeString(shape_) + " to " +
                          ShapeString(shape));
  }
  return Tensor(std::move(shape), data_);
}

Tensor Tensor::RandomNormal(Shape shape, Rng& rng, double stddev) {
  Tensor t(std::move(shape));
  for (double& x : t.data_) x = stddev * rng.Normal();
  return t;
}

Tensor Tensor::RandomUniform(Shape shape, Rng& rng, double lo, double hi) {
  Tensor t(std::move(shape));
  for (double& x : t.data_) x = rng.Uniform(lo, hi);
  return t;
}

void CheckFinite(const Tensor& t, std::string_view where) {
  if (!t.AllFinite()) {
    throw NumericError("non-finite value in " + std::string(where));
  }
}

Parameter::Parameter(std::string name, Tensor value)
    : name(std::move(name)), value(std::move(value)) {
  grad = Tensor(this->value.shape());
}

void Parameter::ZeroGrad() {
  if (grad.shape() != value.shape()) grad = Tensor(value.shape());
  grad.Fill(0.0);
  has_grad = false;
}

}  // namespace batik::tensor
