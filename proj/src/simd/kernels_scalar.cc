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

#include "batik/simd/kernels.h"

namespace batik::simd::internal {

double DotScalar(const double* x, const double* y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void AxpyScalar(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void ScaleScalar(double alpha, double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void GemmScalar(const GemmArgs& g) {
  for (size_t i = 0; i < g.m; ++i) {
    double* c_row = g.c + i * g.ldc;
    if (g.beta == 0.0) {
      for (size_t j = 0; j < g.n; ++j) c_row[j] = 0.0;
    } else if (g.beta != 1.0) {
      for (size_t j = 0; j < g.n; ++j) c_row[j] *= g.beta;
    }
  }
  if (g.alpha == 0.0 || g.k == 0) return;
  for (size_t i = 0; i < g.m; ++i) {
    double* c_row = g.c + i * g.ldc;
    for (size_t p = 0; p < g.k; ++p) {
      const double a = g.alpha * (g.trans_a ? g.a[p * g.lda + i]
                                            : g.a[i * g.lda + p]);
      if (g.trans_b) {
        for (size_t j = 0; j < g.n; ++j) c_row[j] += a * g.b[j * g.ldb + p];
      } else {
        const double* b_row = g.b + p * g.ldb;
        for (size_t j = 0; j < g.n; ++j) c_row[j] += a * b_row[j];
      }
    }
  }
}

}  // namespace batik::simd::internal
