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

#ifndef BATIK_TESTS_EMBED_ORACLE_H_
#define BATIK_TESTS_EMBED_ORACLE_H_

#include <cmath>
#include <vector>

#include "batik/core/random.h"
#include "batik/embed/word2vec.h"

namespace batik::testing {

using embed::EmbeddingMatrix;

inline EmbeddingMatrix RandomMatrix(size_t rows, size_t dim, Rng& rng,
                             double scale = 0.5) {
  EmbeddingMatrix m(rows, dim);
  for (size_t r = 0; r < rows; ++r) {
    for (double& x : m.Input(r)) x = rng.Uniform(-scale, scale);
    for (double& x : m.Output(r)) x = rng.Uniform(-scale, scale);
  }
  return m;
}

// Independent loss evaluation: plain formula in extended precision so the
// finite-difference quotient is not dominated by rounding.
inline long double OracleLoss(const std::vector<long double>& h,
                       const EmbeddingMatrix& m, int32_t ctx,
                       const std::vector<int32_t>& neg) {
  auto dot = [&](int32_t id) {
    long double s = 0;
    for (size_t i = 0; i < h.size(); ++i) s += m.Output(id)[i] * h[i];
    return s;
  };
  long double loss = -std::log(1.0L / (1.0L + std::exp(-dot(ctx))));
  for (int32_t k : neg) loss -= std::log(1.0L / (1.0L + std::exp(dot(k))));
  return loss;
}

inline long double SkipLoss(const EmbeddingMatrix& m, int32_t c, int32_t ctx,
                     const std::vector<int32_t>& neg) {
  const auto in = m.Input(c);
  return OracleLoss({in.begin(), in.end()}, m, ctx, neg);
}

inline long double CbowLoss(const EmbeddingMatrix& m,
                     const std::vector<int32_t>& context, int32_t center,
                     const std::vector<int32_t>& neg) {
  std::vector<long double> h(m.dim(), 0.0L);
  for (int32_t c : context) {
    for (size_t i = 0; i < h.size(); ++i) h[i] += m.Input(c)[i];
  }
  for (long double& x : h) x /= static_cast<long double>(context.size());
  return OracleLoss(h, m, center, neg);
}

}  // namespace batik::testing

#endif  // BATIK_TESTS_EMBED_ORACLE_H_
