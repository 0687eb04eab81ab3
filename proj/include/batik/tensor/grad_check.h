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

#ifndef BATIK_TENSOR_GRAD_CHECK_H_
#define BATIK_TENSOR_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "batik/tensor/tensor.h"

namespace batik::tensor {

struct GradCheckOptions {
  uint64_t seed = 1;
  // Denominator floor of the relative error, so coordinates whose true
  // gradient is ~0 are judged on absolute error instead.
  double floor = 1e-3;
  // Coordinates probed per input; 0 means all of them, otherwise a random
  // sample of that many.
  size_t max_coordinates = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  size_t input = 0;
  size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  size_t coordinates = 0;
};

// `forward` reads the current values of `inputs` and returns an output;
// `backward` maps an output gradient to one gradient per input. The checker
// contracts the output with a fixed random tensor R, so the scalar probed is
// sum(out * R), and compares backward(R) against central differences with
// h = 1e-5 * max(1, |x|). Relative error is |a - n| / max(|a|, |n|, floor).
// A non-finite output throws NumericError.
GradCheckResult GradCheck(
    const std::vector<Tensor*>& inputs, const std::function<Tensor()>& forward,
    const std::function<std::vector<Tensor>(const Tensor&)>& backward,
    const GradCheckOptions& options = {});

}  // namespace batik::tensor

#endif  // BATIK_TENSOR_GRAD_CHECK_H_
