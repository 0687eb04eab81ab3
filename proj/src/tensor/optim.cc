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

#include "batik/tensor/optim.h"

#include <cmath>

#include "batik/core/error.h"

namespace batik::tensor {

void AdamStep(std::span<Parameter* const> params, const AdamConfig& config) {
  for (Parameter* p : params) {
    if (!p->has_grad || p->grad.shape() != p->value.shape()) {
      throw InvalidArgument("adam: parameter " + p->name + " has no gradient");
    }
  }
  for (Parameter* p : params) {
    if (p->m.shape() != p->value.shape()) p->m = Tensor(p->value.shape());
    if (p->v.shape() != p->value.shape()) p->v = Tensor(p->value.shape());
    ++p->step;
    const double t = static_cast<double>(p->step);
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad[i];
      p->m[i] = config.beta1 * p->m[i] + (1.0 - config.beta1) * g;
      p->v[i] = config.beta2 * p->v[i] + (1.0 - config.beta2) * g * g;
      const double m_hat = p->m[i] / c1;
      const double v_hat = p->v[i] / c2;
      p->value[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
    CheckFinite(p->value, "adam update of " + p->name);
  }
}

void ZeroGrads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->ZeroGrad();
}

}  // namespace batik::tensor
