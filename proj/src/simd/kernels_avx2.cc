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

// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// the CPU has reported support.

#include <immintrin.h>

#include <algorithm>
#include <cstring>
#include <vector>

#include "batik/simd/kernels.h"

namespace batik::simd::internal {

double DotAvx2(const double* x, const double* y, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8),
                           _mm256_loadu_pd(y + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12),
                           _mm256_loadu_pd(y + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  const __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1),
                                    _mm256_add_pd(acc2, acc3));
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void AxpyAvx2(double alpha, const double* x, double* y, size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4),
                                     _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ScaleAvx2(double alpha, double* x, size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

namespace {

// Register tile: 6 rows x 8 columns = 12 ymm accumulators.
constexpr size_t kMr = 6;
constexpr size_t kNr = 8;
constexpr size_t kKc = 256;
constexpr size_t kMc = 96;
constexpr size_t kNc = 2048;

double ElemA(const GemmArgs& g, size_t i, size_t p) {
  return g.trans_a ? g.a[p * g.lda + i] : g.a[i * g.lda + p];
}

// Packs rows [i0, i0+mc) x depth [p0, p0+kc) of op(A) into kMr-row slivers,
// each stored depth-major, zero padded to a multiple of kMr rows.
void PackA(const GemmArgs& g, size_t i0, size_t mc, size_t p0, size_t kc,
           double* dst) {
  for (size_t ir = 0; ir < mc; ir += kMr) {
    const size_t rows = std::min(kMr, mc - ir);
    for (size_t p = 0; p < kc; ++p) {
      for (size_t r = 0; r < kMr; ++r) {
        *dst++ = r < rows ? ElemA(g, i0 + ir + r, p0 + p) : 0.0;
      }
    }
  }
}

// Packs depth [p0, p0+kc) x columns [j0, j0+nc) of op(B) into kNr-column
// slivers stored depth-major.
void PackB(const GemmArgs& g, size_t p0, size_t kc, size_t j0, size_t nc,
           double* dst) {
  for (size_t jr = 0; jr < nc; jr += kNr) {
    const size_t cols = std::min(kNr, nc - jr);
    for (size_t p = 0; p < kc; ++p) {
      if (!g.trans_b && cols == kNr) {
        std::memcpy(dst, g.b + (p0 + p) * g.ldb + j0 + jr,
                    kNr * sizeof(double));
        dst += kNr;
        continue;
      }
      for (size_t c = 0; c < kNr; ++c) {
        double v = 0.0;
        if (c < cols) {
          const size_t j = j0 + jr + c;
          v = g.trans_b ? g.b[j * g.ldb + p0 + p] : g.b[(p0 + p) * g.ldb + j];
        }
        *dst++ = v;
      }
    }
  }
}

// acc[kMr x kNr] = A_sliver * B_sliver over kc, then C += alpha * acc.
void MicroKernel(size_t kc, const double* a, const double* b, double alpha,
                 double* c, size_t ldc, size_t rows, size_t cols) {
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
  __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
  __m256d c40 = _mm256_setzero_pd(), c41 = _mm256_setzero_pd();
  __m256d c50 = _mm256_setzero_pd(), c51 = _mm256_setzero_pd();
  for (size_t p = 0; p < kc; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b);
    const __m256d b1 = _mm256_loadu_pd(b + 4);
    __m256d av = _mm256_broadcast_sd(a);
    c00 = _mm256_fmadd_pd(av, b0, c00);
    c01 = _mm256_fmadd_pd(av, b1, c01);
    av = _mm256_broadcast_sd(a + 1);
    c10 = _mm256_fmadd_pd(av, b0, c10);
    c11 = _mm256_fmadd_pd(av, b1, c11);
    av = _mm256_broadcast_sd(a + 2);
    c20 = _mm256_fmadd_pd(av, b0, c20);
    c21 = _mm256_fmadd_pd(av, b1, c21);
    av = _mm256_broadcast_sd(a + 3);
    c30 = _mm256_fmadd_pd(av, b0, c30);
    c31 = _mm256_fmadd_pd(av, b1, c31);
    av = _mm256_broadcast_sd(a + 4);
    c40 = _mm256_fmadd_pd(av, b0, c40);
    c41 = _mm256_fmadd_pd(av, b1, c41);
    av = _mm256_broadcast_sd(a + 5);
    c50 = _mm256_fmadd_pd(av, b0, c50);
    c51 = _mm256_fmadd_pd(av, b1, c51);
    a += kMr;
    b += kNr;
  }
  alignas(32) double tile[kMr][kNr];
  _mm256_store_pd(&tile[0][0], c00);
  _mm256_store_pd(&tile[0][4], c01);
  _mm256_store_pd(&tile[1][0], c10);
  _mm256_store_pd(&tile[1][4], c11);
  _mm256_store_pd(&tile[2][0], c20);
  _mm256_store_pd(&tile[2][4], c21);
  _mm256_store_pd(&tile[3][0], c30);
  _mm256_store_pd(&tile[3][4], c31);
  _mm256_store_pd(&tile[4][0], c40);
  _mm256_store_pd(&tile[4][4], c41);
  _mm256_store_pd(&tile[5][0], c50);
  _mm256_store_pd(&tile[5][4], c51);
  if (rows == kMr && cols == kNr) {
    const __m256d al = _mm256_set1_pd(alpha);
    for (size_t r = 0; r < kMr; ++r) {
      double* cr = c + r * ldc;
      _mm256_storeu_pd(cr, _mm256_fmadd_pd(al, _mm256_load_pd(&tile[r][0]),
                                           _mm256_loadu_pd(cr)));
      _mm256_storeu_pd(cr + 4,
                       _mm256_fmadd_pd(al, _mm256_load_pd(&tile[r][4]),
                                       _mm256_loadu_pd(cr + 4)));
    }
    return;
  }
  for (size_t r = 0; r < rows; ++r) {
    for (size_t col = 0; col < cols; ++col) {
      c[r * ldc + col] += alpha * tile[r][col];
    }
  }
}

}  // namespace

void GemmAvx2(const GemmArgs& g) {
  for (size_t i = 0; i < g.m; ++i) {
    double* c_row = g.c + i * g.ldc;
    if (g.beta == 0.0) {
      std::fill(c_row, c_row + g.n, 0.0);
    } else if (g.beta != 1.0) {
      ScaleAvx2(g.beta, c_row, g.n);
    }
  }
  if (g.alpha == 0.0 || g.k == 0 || g.m == 0 || g.n == 0) return;

  thread_local std::vector<double> a_pack;
  thread_local std::vector<double> b_pack;
  const size_t nc_max = std::min(kNc, (g.n + kNr - 1) / kNr * kNr);
  const size_t mc_max = std::min(kMc, (g.m + kMr - 1) / kMr * kMr);
  b_pack.resize(kKc * nc_max);
  a_pack.resize(kKc * mc_max);

  for (size_t jc = 0; jc < g.n; jc += kNc) {
    const size_t nc = std::min(kNc, g.n - jc);
    for (size_t pc = 0; pc < g.k; pc += kKc) {
      const size_t kc = std::min(kKc, g.k - pc);
      PackB(g, pc, kc, jc, nc, b_pack.data());
      for (size_t ic = 0; ic < g.m; ic += kMc) {
        const size_t mc = std::min(kMc, g.m - ic);
        PackA(g, ic, mc, pc, kc, a_pack.data());
        for (size_t jr = 0; jr < nc; jr += kNr) {
          const size_t cols = std::min(kNr, nc - jr);
          const double* bp = b_pack.data() + (jr / kNr) * kc * kNr;
          for (size_t ir = 0; ir < mc; ir += kMr) {
            const size_t rows = std::min(kMr, mc - ir);
            const double* ap = a_pack.data() + (ir / kMr) * kc * kMr;
            MicroKernel(kc, ap, bp, g.alpha,
                        g.c + (ic + ir) * g.ldc + jc + jr, g.ldc, rows, cols);
          }
        }
      }
    }
  }
}

}  // namespace batik::simd::internal
