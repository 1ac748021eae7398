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

#ifndef ENTRAIN_SIMD_KERNELS_HPP_
#define ENTRAIN_SIMD_KERNELS_HPP_

// Inner-loop kernels for frame analysis. Every kernel reads float samples and
// accumulates in double; float*float products are exact in double, so the
// backends differ from the scalar reference only by summation order.
//
// The active backend is chosen once at first use: ENTRAIN_SIMD=scalar|avx2|neon
// forces one, otherwise the widest backend the CPU supports wins.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace entrain::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view to_string(Backend backend) noexcept;

struct KernelTable {
  Backend backend;
  double (*sum)(const float* x, std::size_t n);
  double (*sum_squares)(const float* x, std::size_t n);
  double (*dot)(const float* a, const float* b, std::size_t n);
};

namespace scalar {
double sum(const float* x, std::size_t n);
double sum_squares(const float* x, std::size_t n);
double dot(const float* a, const float* b, std::size_t n);
}  // namespace scalar

#if defined(ENTRAIN_HAVE_AVX2)
namespace avx2 {
double sum(const float* x, std::size_t n);
double sum_squares(const float* x, std::size_t n);
double dot(const float* a, const float* b, std::size_t n);
}  // namespace avx2
#endif

#if defined(ENTRAIN_HAVE_NEON)
namespace neon {
double sum(const float* x, std::size_t n);
double sum_squares(const float* x, std::size_t n);
double dot(const float* a, const float* b, std::size_t n);
}  // namespace neon
#endif

/// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend backend) noexcept;

std::vector<Backend> available_backends();

/// Table for a specific backend; throws entrain::Error(kInvalidConfig) if it
/// is not available on this machine.
const KernelTable& kernels_for(Backend backend);

const KernelTable& kernels();

/// Overrides the active backend for the whole process.
void set_backend(Backend backend);

inline double sum(std::span<const float> x) {
  return kernels().sum(x.data(), x.size());
}

inline double sum_squares(std::span<const float> x) {
  return kernels().sum_squares(x.data(), x.size());
}

inline double dot(std::span<const float> a, std::span<const float> b) {
  return kernels().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

}  // namespace entrain::simd

#endif  // ENTRAIN_SIMD_KERNELS_HPP_
