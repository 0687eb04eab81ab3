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

#ifndef BATIK_SIMD_KERNELS_H_
#define BATIK_SIMD_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

// Arithmetic inner loops shared by the embedding trainer and the tensor
// layers. Every kernel has a scalar reference implementation; vectorised
// variants are compiled separately and picked once at startup based on what
// the CPU reports. The BATIK_SIMD environment variable ("scalar", "avx2",
// "auto") overrides the choice.

namespace batik::simd {

enum class Isa { kScalar, kAvx2 };

// Row-major C = alpha * op(A) * op(B) + beta * C, op(A) is m x k and op(B)
// is k x n. With trans_a, A is stored k x m; with trans_b, B is stored n x k.
// beta == 0 overwrites C without reading it.
struct GemmArgs {
  bool trans_a = false;
  bool trans_b = false;
  size_t m = 0;
  size_t n = 0;
  size_t k = 0;
  double alpha = 1.0;
  const double* a = nullptr;
  size_t lda = 0;
  const double* b = nullptr;
  size_t ldb = 0;
  double beta = 0.0;
  double* c = nullptr;
  size_t ldc = 0;
};

struct KernelTable {
  Isa isa;
  std::string_view name;
  double (*dot)(const double* x, const double* y, size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, size_t n);
  void (*gemm)(const GemmArgs& args);
};

const KernelTable& ScalarKernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* Avx2Kernels();

// The table in use. Resolved on first call.
const KernelTable& Active();

// Switches the active table; returns false if the ISA is unavailable.
bool SetActive(Isa isa);

inline double Dot(std::span<const double> x, std::span<const double> y) {
  return Active().dot(x.data(), y.data(), x.size());
}

inline void Axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void Scale(double alpha, std::span<double> x) {
  Active().scale(alpha, x.data(), x.size());
}

inline void Gemm(const GemmArgs& args) { Active().gemm(args); }

namespace internal {
double DotScalar(const double* x, const double* y, size_t n);
void AxpyScalar(double alpha, const double* x, double* y, size_t n);
void ScaleScalar(double alpha, double* x, size_t n);
void GemmScalar(const GemmArgs& args);

double DotAvx2(const double* x, const double* y, size_t n);
void AxpyAvx2(double alpha, const double* x, double* y, size_t n);
void ScaleAvx2(double alpha, double* x, size_t n);
void GemmAvx2(const GemmArgs& args);
}  // namespace internal

}  // namespace batik::simd

#endif  // BATIK_SIMD_KERNELS_H_
