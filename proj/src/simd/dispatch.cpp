// Copyright 2026 The Entrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string>

#include "entrain/error.hpp"
#include "entrain/simd/kernels.hpp"

namespace entrain::simd {

namespace {

constexpr KernelTable kScalarTable{Backend::kScalar, &scalar::sum, &scalar::sum_squares,
                                   &scalar::dot};
#if defined(ENTRAIN_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::kAvx2, &avx2::sum, &avx2::sum_squares, &avx2::dot};
#endif
#if defined(ENTRAIN_HAVE_NEON)
constexpr KernelTable kNeonTable{Backend::kNeon, &neon::sum, &neon::sum_squares, &neon::dot};
#endif

bool cpu_has_avx2() noexcept {
#if defined(ENTRAIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* detect() {
  if (const char* forced = std::getenv("ENTRAIN_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return &kScalarTable;
    if (name == "avx2" && backend_available(Backend::kAvx2)) return &kernels_for(Backend::kAvx2);
    if (name == "neon" && backend_available(Backend::kNeon)) return &kernels_for(Backend::kNeon);
    // unknown or unavailable names fall through to auto-detection
  }
  if (backend_available(Backend::kAvx2)) return &kernels_for(Backend::kAvx2);
  if (backend_available(Backend::kNeon)) return &kernels_for(Backend::kNeon);
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar: return true;
    case Backend::kAvx2: return cpu_has_avx2();
    case Backend::kNeon:
#if defined(ENTRAIN_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (backend_available(b)) out.push_back(b);
  }
  return out;
}

const KernelTable& kernels_for(Backend backend) {
  if (!backend_available(backend)) {
    throw Error(ErrorCode::kInvalidConfig,
                "SIMD backend '" + std::string(to_string(backend)) + "' is not available");
  }
  switch (backend) {
#if defined(ENTRAIN_HAVE_AVX2)
    case Backend::kAvx2: return kAvx2Table;
#endif
#if defined(ENTRAIN_HAVE_NEON)
    case Backend::kNeon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void set_backend(Backend backend) {
  active().store(&kernels_for(backend), std::memory_order_release);
}

}  // namespace entrain::simd
