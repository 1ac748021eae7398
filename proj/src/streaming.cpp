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

#include "entrain/streaming.hpp"

#include <algorithm>
#include <cmath>

#include "entrain/error.hpp"

namespace entrain {

namespace {

void two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

void quick_two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  e = b - (s - a);
}

DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) noexcept {
  double s, e, t, f;
  two_sum(a.hi, b.hi, s, e);
  two_sum(a.lo, b.lo, t, f);
  e += t;
  quick_two_sum(s, e, s, e);
  e += f;
  DoubleDouble out;
  quick_two_sum(s, e, out.hi, out.lo);
  return out;
}

DoubleDouble dd_mul(DoubleDouble a, DoubleDouble b) noexcept {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  DoubleDouble out;
  quick_two_sum(p, e, out.hi, out.lo);
  return out;
}

DoubleDouble dd_div(DoubleDouble a, double b) noexcept {
  const double q1 = a.hi / b;
  const double p = q1 * b;
  const double pe = std::fma(q1, b, -p);
  double s, e;
  two_sum(a.hi, -p, s, e);
  e -= pe;
  e += a.lo;
  const double q2 = (s + e) / b;
  DoubleDouble out;
  quick_two_sum(q1, q2, out.hi, out.lo);
  return out;
}

// sum(a*b) - sum(a) * sum(b) / n, evaluated in double-double.
double centered(DoubleDouble sab, DoubleDouble sa, DoubleDouble sb, double n) noexcept {
  DoubleDouble t = dd_div(dd_mul(sa, sb), n);
  t.hi = -t.hi;
  t.lo = -t.lo;
  return dd_add(sab, t).value();
}

// Same rule as the batch Pearson.
bool negligible_spread(double centered_sq, double n, double mean) noexcept {
  return !(std::sqrt(centered_sq / n) > 1e-12 * std::max(1.0, std::abs(mean)));
}

}  // namespace

void DoubleDouble::add(double v) noexcept { *this = dd_add(*this, DoubleDouble{v, 0.0}); }

void DoubleDouble::add_product(double a, double b) noexcept {
  const double p = a * b;
  *this = dd_add(*this, DoubleDouble{p, std::fma(a, b, -p)});
}

void RunningPearson::apply(double x, double y, double sign) noexcept {
  sx_.add(sign * x);
  sy_.add(sign * y);
  sxx_.add_product(sign * x, x);
  syy_.add_product(sign * y, y);
  sxy_.add_product(sign * x, y);
}

void RunningPearson::add(double x, double y) noexcept {
  apply(x, y, 1.0);
  ++n_;
}

void RunningPearson::remove(double x, double y) noexcept {
  apply(x, y, -1.0);
  --n_;
}

std::optional<double> RunningPearson::r() const noexcept {
  if (n_ < 3) return std::nullopt;
  const double n = static_cast<double>(n_);
  const double cxx = centered(sxx_, sx_, sx_, n);
  const double cyy = centered(syy_, sy_, sy_, n);
  const double cxy = centered(sxy_, sx_, sy_, n);
  if (negligible_spread(cxx, n, sx_.value() / n) || negligible_spread(cyy, n, sy_.value() / n)) {
    return std::nullopt;
  }
  return std::clamp(cxy / std::sqrt(cxx * cyy), -1.0, 1.0);
}

StreamingEntrainment::StreamingEntrainment(StreamConfig cfg) : cfg_(std::move(cfg)) {
  if (!(cfg_.step > 0.0)) throw Error(ErrorCode::kInvalidConfig, "stream grid step must be positive");
  if (cfg_.k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  const long capacity = std::lround(cfg_.window_seconds / cfg_.step);
  if (capacity < 3) throw Error(ErrorCode::kInvalidConfig, "window must hold at least 3 grid steps");
  capacity_ = static_cast<std::size_t>(capacity);
  lag_ = std::lround(cfg_.delta / cfg_.step);
  if (static_cast<std::size_t>(std::labs(lag_)) + 3 > capacity_) {
    throw Error(ErrorCode::kInvalidConfig, "synchrony lag does not fit in the window");
  }
}

bool StreamingEntrainment::ready(const KnnResampler& r, double g) const {
  if (r.size() < cfg_.k) return false;
  return r.last_time() - g > r.estimate(g, cfg_.k).kth_distance;
}

std::vector<WindowMetrics> StreamingEntrainment::update(const StreamPoint& point) {
  if (point.speaker == cfg_.speaker_a) {
    points_a_.add(point.time, point.value);
  } else if (point.speaker == cfg_.speaker_b) {
    points_b_.add(point.time, point.value);
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown speaker '" + point.speaker + "'");
  }
  std::vector<WindowMetrics> out;
  while (!points_a_.empty() && !points_b_.empty()) {
    const double g = cfg_.t0 + static_cast<double>(next_index_) * cfg_.step;
    if (!ready(points_a_, g) || !ready(points_b_, g)) break;
    out.push_back(finalize());
  }
  return out;
}

std::vector<WindowMetrics> StreamingEntrainment::flush(double t_end) {
  std::vector<WindowMetrics> out;
  if (points_a_.empty() || points_b_.empty() || t_end < cfg_.t0) return out;
  const auto count =
      static_cast<std::size_t>(std::floor((t_end - cfg_.t0) / cfg_.step + 1e-9)) + 1;
  while (next_index_ < count) out.push_back(finalize());
  return out;
}

WindowMetrics StreamingEntrainment::finalize() {
  const std::size_t j = next_index_++;
  const double g = cfg_.t0 + static_cast<double>(j) * cfg_.step;
  a_.push_back(points_a_.estimate(g, cfg_.k).value);
  b_.push_back(points_b_.estimate(g, cfg_.k).value);

  const std::size_t lo = j + 1 >= capacity_ ? j + 1 - capacity_ : 0;
  converge_.add(static_cast<double>(j), -std::abs(value_a(j) - value_b(j)));
  if (j >= capacity_) {
    const std::size_t old = j - capacity_;
    converge_.remove(static_cast<double>(old), -std::abs(value_a(old) - value_b(old)));
  }

  // Pairs (a[i + lag], b[i]) with both indices inside [lo, j].
  const long jl = static_cast<long>(j);
  const long lol = static_cast<long>(lo);
  const long new_lo = std::max(lol, lol - lag_);
  const long new_hi = std::max(new_lo, std::min(jl, jl - lag_) + 1);
  auto pair = [&](long i, bool add) {
    const double xa = value_a(static_cast<std::size_t>(i + lag_));
    const double xb = value_b(static_cast<std::size_t>(i));
    add ? sync_.add(xa, xb) : sync_.remove(xa, xb);
  };
  const long old_lo = static_cast<long>(pair_lo_);
  const long old_hi = static_cast<long>(pair_hi_);
  for (long i = old_lo; i < std::min(new_lo, old_hi); ++i) pair(i, false);
  for (long i = std::max(old_hi, new_lo); i < new_hi; ++i) pair(i, true);
  pair_lo_ = static_cast<std::size_t>(new_lo);
  pair_hi_ = static_cast<std::size_t>(new_hi);

  while (base_ < lo) {
    a_.pop_front();
    b_.pop_front();
    ++base_;
  }

  WindowMetrics m;
  m.grid_index = j;
  m.t = g;
  m.window_points = j - lo + 1;
  if (const auto r = converge_.r()) {
    m.convergence = correlation_result(*r, converge_.count(), cfg_.significance);
  }
  if (const auto r = sync_.r()) {
    m.synchrony = correlation_result(*r, sync_.count(), cfg_.significance);
    m.synchrony->lag = static_cast<double>(lag_) * cfg_.step;
  }
  current_ = m;
  return m;
}

ResampledTrack StreamingEntrainment::window_track(const std::string& speaker,
                                                  const std::deque<double>& v) const {
  if (next_index_ < 2) throw Error(ErrorCode::kInsufficientData, "window holds fewer than 2 samples");
  const std::size_t j = next_index_ - 1;
  const std::size_t lo = j + 1 >= capacity_ ? j + 1 - capacity_ : 0;
  if (j - lo + 1 < 2) throw Error(ErrorCode::kInsufficientData, "window holds fewer than 2 samples");
  TimeGrid grid(cfg_.t0 + static_cast<double>(lo) * cfg_.step,
                cfg_.t0 + static_cast<double>(j) * cfg_.step, cfg_.step);
  ResampledTrack t{speaker, cfg_.feature, grid, {}};
  for (std::size_t i = lo; i <= j; ++i) t.values.push_back(v[i - base_]);
  return t;
}

ResampledTrack StreamingEntrainment::window_track_a() const {
  return window_track(cfg_.speaker_a, a_);
}

ResampledTrack StreamingEntrainment::window_track_b() const {
  return window_track(cfg_.speaker_b, b_);
}

}  // namespace entrain
