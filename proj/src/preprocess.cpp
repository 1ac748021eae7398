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

#include "entrain/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "entrain/csv.hpp"
#include "entrain/error.hpp"

namespace entrain {

namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments sample_moments(std::span<const double> v) {
  if (v.size() < 2) {
    throw Error(ErrorCode::kDegenerateDistribution, "z-score needs at least 2 values");
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    throw Error(ErrorCode::kDegenerateDistribution, "values have zero variance");
  }
  return {mean, sd};
}

void require_single_series(const std::vector<UtteranceFeaturePoint>& points) {
  for (const auto& p : points) {
    if (p.speaker != points.front().speaker || p.feature != points.front().feature) {
      throw Error(ErrorCode::kInvalidConfig, "points mix speakers or features");
    }
  }
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t_end, double step) : t0_(t0), t_end_(t_end), step_(step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::kInvalidConfig, "grid step must be positive");
  }
  if (!(t0 < t_end) || !std::isfinite(t0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::kInvalidConfig, "grid needs t0 < t_end");
  }
  size_ = static_cast<std::size_t>(std::floor((t_end - t0) / step + 1e-9)) + 1;
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(size_);
  for (std::size_t i = 0; i < size_; ++i) t[i] = at(i);
  return t;
}

TimeGrid grid_spanning(const std::vector<UtteranceSegment>& segments, double step) {
  if (segments.empty()) throw Error(ErrorCode::kEmptyInput, "no utterances to span");
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& s : segments) {
    lo = std::min(lo, utterance_center(s));
    hi = std::max(hi, utterance_center(s));
  }
  return TimeGrid(lo, hi, step);
}

std::vector<double> zscore_values(std::span<const double> values) {
  const Moments m = sample_moments(values);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - m.mean) / m.sd;
  return out;
}

std::vector<UtteranceFeaturePoint> zscore(const std::vector<UtteranceFeaturePoint>& points) {
  require_single_series(points);
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.value);
  const auto z = zscore_values(v);
  auto out = points;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].value = z[i];
  return out;
}

void KnnResampler::add(double time, double value) {
  if (!times_.empty() && time < times_.back()) {
    throw Error(ErrorCode::kOutOfOrderPoint, "point at t=" + csv::format_number(time) +
                                                 " precedes t=" + csv::format_number(times_.back()));
  }
  times_.push_back(time);
  values_.push_back(value);
}

KnnResampler::Estimate KnnResampler::estimate(double t, std::size_t k) const {
  if (times_.empty()) throw Error(ErrorCode::kEmptyInput, "no points to regress on");
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");

  const auto n = static_cast<std::ptrdiff_t>(times_.size());
  // left walks down from the last point at or before t, right walks up.
  std::ptrdiff_t right = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
  std::ptrdiff_t left = right - 1;
  auto dist = [&](std::ptrdiff_t i) { return std::abs(times_[static_cast<std::size_t>(i)] - t); };

  picked_.clear();
  double last_dist = 0.0;
  double last_time = 0.0;
  auto take = [&](std::ptrdiff_t i) {
    picked_.push_back(static_cast<std::size_t>(i));
    last_dist = dist(i);
    last_time = times_[static_cast<std::size_t>(i)];
  };
  while (picked_.size() < k && (left >= 0 || right < n)) {
    // Equal distances favour the left side, which is the earlier time.
    if (right >= n || (left >= 0 && dist(left) <= dist(right))) {
      take(left--);
    } else {
      take(right++);
    }
  }
  auto tied = [&](std::ptrdiff_t i) {
    return dist(i) == last_dist && times_[static_cast<std::size_t>(i)] == last_time;
  };
  while (left >= 0 && tied(left)) picked_.push_back(static_cast<std::size_t>(left--));
  while (right < n && tied(right)) picked_.push_back(static_cast<std::size_t>(right++));

  std::sort(picked_.begin(), picked_.end(), [&](std::size_t a, std::size_t b) {
    const double da = std::abs(times_[a] - t);
    const double db = std::abs(times_[b] - t);
    if (da != db) return da < db;
    if (times_[a] != times_[b]) return times_[a] < times_[b];
    return a < b;
  });
  double sum = 0.0;
  for (std::size_t i : picked_) sum += values_[i];
  return {sum / static_cast<double>(picked_.size()), last_dist, picked_.size()};
}

ResampledTrack knn_regress(const std::vector<UtteranceFeaturePoint>& points, const TimeGrid& grid,
                           std::size_t k) {
  if (points.empty()) throw Error(ErrorCode::kEmptyInput, "no points to regress on");
  require_single_series(points);
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].time < points[b].time; });
  KnnResampler resampler;
  for (std::size_t i : order) resampler.add(points[i].time, points[i].value);

  ResampledTrack track{points.front().speaker, points.front().feature, grid, {}};
  track.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    track.values[i] = resampler.estimate(grid.at(i), k).value;
  }
  return track;
}

ResampledTrack resample_feature(const std::vector<UtteranceFeaturePoint>& points,
                                const TimeGrid& grid, const PreprocessConfig& cfg) {
  if (cfg.zscore_before_knn) return knn_regress(zscore(points), grid, cfg.k);
  auto track = knn_regress(points, grid, cfg.k);
  track.values = zscore_values(track.values);
  return track;
}

void write_resampled_csv(std::ostream& out, const std::vector<ResampledTrack>& tracks) {
  out << "feature,speaker,time_s,zvalue\n";
  for (const auto& track : tracks) {
    for (std::size_t i = 0; i < track.values.size(); ++i) {
      out << to_string(track.feature) << ',' << track.speaker << ','
          << csv::format_number(track.grid.at(i)) << ',' << csv::format_number(track.values[i])
          << '\n';
    }
  }
}

void write_resampled_csv(const std::filesystem::path& path,
                         const std::vector<ResampledTrack>& tracks) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_resampled_csv(out, tracks);
}

}  // namespace entrain
