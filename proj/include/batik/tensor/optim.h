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

#ifndef BATIK_TENSOR_OPTIM_H_
#define BATIK_TENSOR_OPTIM_H_

#include <span>

#include "batik/tensor/tensor.h"

namespace batik::tensor {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Every parameter must carry a gradient from the last
// backward pass (InvalidArgument otherwise); moments are created lazily.
void AdamStep(std::span<Parameter* const> params, const AdamConfig& config);

void ZeroGrads(std::span<Parameter* const> params);

}  // namespace batik::tensor

#endif  // BATIK_TENSOR_OPTIM_H_
