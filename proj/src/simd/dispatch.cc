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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "batik/simd/kernels.h"

namespace batik::simd {

namespace {

constexpr KernelTable kScalar{Isa::kScalar, "scalar", internal::DotScalar,
                              internal::AxpyScalar, internal::ScaleScalar,
                              internal::GemmScalar};

#if defined(BATIK_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::kAvx2, "avx2", internal::DotAvx2,
                            internal::AxpyAvx2, internal::ScaleAvx2,
                            internal::GemmAvx2};
#endif

bool CpuHasAvx2() {
#if defined(BATIK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* Resolve() {
  const char* env = std::getenv("BATIK_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return &kScalar;
  const KernelTable* avx2 = Avx2Kernels();
  if (avx2 != nullptr) return avx2;
  return &kScalar;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& ScalarKernels() { return kScalar; }

const KernelTable* Avx2Kernels() {
#if defined(BATIK_HAVE_AVX2)
  static const bool supported = CpuHasAvx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& Active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const KernelTable* resolved = Resolve();
    g_active.compare_exchange_strong(t, resolved, std::memory_order_acq_rel);
    t = g_active.load(std::memory_order_acquire);
  }
  return *t;
}

bool SetActive(Isa isa) {
  const KernelTable* t = nullptr;
  switch (isa) {
    case Isa::kScalar:
      t = &kScalar;
      break;
    case Isa::kAvx2:
      t = Avx2Kernels();
      break;
  }
  if (t == nullptr) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

}  // namespace batik::simd
