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

#ifndef ENTRAIN_TESTS_SUPPORT_FIXTURES_HPP_
#define ENTRAIN_TESTS_SUPPORT_FIXTURES_HPP_

// Test-side helpers and independent oracles. Nothing here calls into the
// library code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "entrain/preprocess.hpp"

namespace entrain::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "entrain-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ResampledTrack make_track(std::vector<double> values, double t0 = 0.0, double step = 0.1,
                                 Feature f = Feature::kMeanPitch, std::string speaker = "a") {
  const double t_end = t0 + step * static_cast<double>(values.size() - 1);
  return ResampledTrack{std::move(speaker), f, TimeGrid(t0, t_end, step), std::move(values)};
}

/// Sum of a few random sinusoids sampled at `n` points of spacing `step`.
inline std::vector<double> smooth_series(std::mt19937_64& rng, std::size_t n, double step,
                                         double shift = 0.0) {
  std::uniform_real_distribution<double> period(1.5, 6.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  double p[3], ph[3], a[3];
  for (int i = 0; i < 3; ++i) {
    p[i] = period(rng);
    ph[i] = phase(rng);
    a[i] = amp(rng);
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * step + shift;
    double v = 0.0;
    for (int i = 0; i < 3; ++i) v += a[i] * std::sin(6.283185307179586 * t / p[i] + ph[i]);
    out[j] = v;
  }
  return out;
}

/// Textbook Pearson in long double.
inline double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// O(n) per query nearest-neighbour mean: rank every point by (distance,
/// time, position), keep the first k plus anything tied with the k-th on
/// (distance, time), then sum in rank order. Points must be time-sorted.
inline double brute_knn(const std::vector<std::pair<double, double>>& pts, double t, std::size_t k) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double da = std::abs(pts[a].first - t);
    const double db = std::abs(pts[b].first - t);
    if (da != db) return da < db;
    if (pts[a].first != pts[b].first) return pts[a].first < pts[b].first;
    return a < b;
  });
  std::size_t take = std::min(k, idx.size());
  const double kd = std::abs(pts[idx[take - 1]].first - t);
  const double kt = pts[idx[take - 1]].first;
  while (take < idx.size() && std::abs(pts[idx[take]].first - t) == kd && pts[idx[take]].first == kt) ++take;
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += pts[idx[i]].second;
  return sum / static_cast<double>(take);
}

}  // namespace entrain::testing

#endif  // ENTRAIN_TESTS_SUPPORT_FIXTURES_HPP_
