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

#ifndef ENTRAIN_PREPROCESS_HPP_
#define ENTRAIN_PREPROCESS_HPP_

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "entrain/features.hpp"

namespace entrain {

/// Uniform grid t0, t0 + step, ... up to t_end (inclusive within 1e-9 steps).
class TimeGrid {
 public:
  TimeGrid(double t0, double t_end, double step);

  double t0() const noexcept { return t0_; }
  double t_end() const noexcept { return t_end_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return size_; }
  double at(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * step_; }
  std::vector<double> times() const;

  /// Same origin, step and length.
  bool same_as(const TimeGrid& other) const noexcept {
    return t0_ == other.t0_ && step_ == other.step_ && size_ == other.size_;
  }

 private:
  double t0_;
  double t_end_;
  double step_;
  std::size_t size_;
};

/// Grid over [min center, max center] of the given segments.
TimeGrid grid_spanning(const std::vector<UtteranceSegment>& segments, double step);

struct ResampledTrack {
  std::string speaker;
  Feature feature = Feature::kMeanPitch;
  TimeGrid grid{0.0, 1.0, 1.0};
  std::vector<double> values;  // one per grid point
};

/// Sample z-scores (n - 1 denominator). All points must share speaker and
/// feature. Throws kDegenerateDistribution for < 2 points or zero spread.
std::vector<UtteranceFeaturePoint> zscore(const std::vector<UtteranceFeaturePoint>& points);

/// Same transform on a bare series.
std::vector<double> zscore_values(std::span<const double> values);

/// Time-ordered point store answering k-nearest-neighbour means.
///
/// Neighbours are ranked by (|time - t|, time, insertion order); the first k
/// are taken, plus any further points tied with the k-th on both distance and
/// time. Selected values are summed in rank order, so two resamplers fed the
/// same sequence agree bit for bit.
class KnnResampler {
 public:
  struct Estimate {
    double value = 0.0;
    double kth_distance = 0.0;  // distance of the last selected neighbour
    std::size_t used = 0;
  };

  /// Times must be non-decreasing; throws kOutOfOrderPoint otherwise.
  void add(double time, double value);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double last_time() const noexcept { return times_.back(); }

  /// Requires at least one point (kEmptyInput) and k >= 1 (kInvalidConfig).
  Estimate estimate(double t, std::size_t k) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  mutable std::vector<std::size_t> picked_;
};

inline constexpr std::size_t kDefaultNeighbours = 7;

/// Fills every grid point with the mean of its k nearest utterance values.
ResampledTrack knn_regress(const std::vector<UtteranceFeaturePoint>& points, const TimeGrid& grid,
                           std::size_t k = kDefaultNeighbours);

struct PreprocessConfig {
  double grid_step = 0.1;  // s
  std::size_t k = kDefaultNeighbours;
  bool zscore_before_knn = true;
};

/// Standardize + resample one (speaker, feature) series in the configured order.
ResampledTrack resample_feature(const std::vector<UtteranceFeaturePoint>& points,
                                const TimeGrid& grid, const PreprocessConfig& cfg);

/// CSV `feature,speaker,time_s,zvalue`.
void write_resampled_csv(std::ostream& out, const std::vector<ResampledTrack>& tracks);
void write_resampled_csv(const std::filesystem::path& path,
                         const std::vector<ResampledTrack>& tracks);

}  // namespace entrain

#endif  // ENTRAIN_PREPROCESS_HPP_
