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

#include "batik/tensor/grad_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "batik/core/error.h"

namespace batik::tensor {

namespace {

double Contract(const Tensor& out, const Tensor& r) {
  CheckFinite(out, "gradient check forward");
  long double sum = 0.0L;
  for (size_t i = 0; i < out.size(); ++i) {
    sum += static_cast<long double>(out[i]) * r[i];
  }
  return static_cast<double>(sum);
}

}  // namespace

GradCheckResult GradCheck(
    const std::vector<Tensor*>& inputs, const std::function<Tensor()>& forward,
    const std::function<std::vector<Tensor>(const Tensor&)>& backward,
    const GradCheckOptions& options) {
  Rng rng(options.seed);
  const Tensor out = forward();
  CheckFinite(out, "gradient check forward");
  const Tensor r = Tensor::RandomNormal(out.shape(), rng);
  const std::vector<Tensor> analytic = backward(r);
  if (analytic.size() != inputs.size()) {
    throw InvalidArgument("gradient check: backward returned " +
                          std::to_string(analytic.size()) + " gradients for " +
                          std::to_string(inputs.size()) + " inputs");
  }
  GradCheckResult result;
  for (size_t in = 0; in < inputs.size(); ++in) {
    Tensor& x = *inputs[in];
    if (analytic[in].shape() != x.shape()) {
      throw InvalidArgument("gradient check: gradient " + std::to_string(in) +
                            " has shape " + ShapeString(analytic[in].shape()));
    }
    CheckFinite(analytic[in], "gradient check backward");
    std::vector<size_t> coords(x.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (options.max_coordinates > 0 && options.max_coordinates < coords.size()) {
      rng.Shuffle(coords);
      coords.resize(options.max_coordinates);
      std::sort(coords.begin(), coords.end());
    }
    for (size_t i : coords) {
      const double saved = x[i];
      const double h = 1e-5 * std::max(1.0, std::abs(saved));
      x[i] = saved + h;
      const double up = Contract(forward(), r);
      x[i] = saved - h;
      const double down = Contract(forward(), r);
      x[i] = saved;
      // Divide by the step actually taken after rounding.
      const double numeric = (up - down) / ((saved + h) - (saved - h));
      const double a = analytic[in][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      const double err = std::abs(a - numeric) / denom;
      ++result.coordinates;
      if (err > result.max_relative_error || result.coordinates == 1) {
        result.max_relative_error = err;
        result.input = in;
        result.index = i;
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace batik::tensor
