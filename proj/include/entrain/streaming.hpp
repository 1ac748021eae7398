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

#ifndef ENTRAIN_STREAMING_HPP_
#define ENTRAIN_STREAMING_HPP_

// Incremental windowed convergence/synchrony for one feature of one dyad.
//
// Utterance points arrive in time order per speaker. A grid point is
// resampled once neither speaker can receive a point that would change its
// k-nearest-neighbour value, so every emitted grid value equals what the
// batch resampler produces from the full session. Window correlations come
// from running sums updated in O(1) per grid step.

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "entrain/entrainment.hpp"
#include "entrain/preprocess.hpp"

namespace entrain {

/// Unevaluated sum hi + lo carrying roughly 32 significant digits. Sums of
/// doubles and of exact products stay exact enough that removing a pair
/// undoes adding it, and centered moments survive heavy cancellation.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  void add(double v) noexcept;
  /// Adds a * b without rounding the product.
  void add_product(double a, double b) noexcept;
  double value() const noexcept { return hi + lo; }
};

/// Pearson accumulator over a multiset of (x, y) pairs.
class RunningPearson {
 public:
  void add(double x, double y) noexcept;
  void remove(double x, double y) noexcept;
  std::size_t count() const noexcept { return n_; }
  /// nullopt with fewer than 3 pairs or a side with negligible spread (the
  /// same rule as the batch Pearson).
  std::optional<double> r() const noexcept;

 private:
  void apply(double x, double y, double sign) noexcept;

  std::size_t n_ = 0;
  DoubleDouble sx_, sy_, sxx_, syy_, sxy_;
};

struct StreamConfig {
  Feature feature = Feature::kMeanPitch;
  double t0 = 0.0;                   // s, grid origin
  double step = 0.1;                 // s
  double window_seconds = 120.0;     // window holds round(window / step) grid points
  std::size_t k = kDefaultNeighbours;
  double delta = 0.0;                // synchrony lag, s
  SignificanceConfig significance;
  std::string speaker_a = "tutor";
  std::string speaker_b = "participant";
};

struct StreamPoint {
  double time = 0.0;
  double value = 0.0;  // already standardized
  std::string speaker;
};

struct WindowMetrics {
  std::size_t grid_index = 0;
  double t = 0.0;                  // grid time of the newest window sample
  std::size_t window_points = 0;
  std::optional<CorrelationResult> convergence;
  std::optional<CorrelationResult> synchrony;
};

class StreamingEntrainment {
 public:
  explicit StreamingEntrainment(StreamConfig cfg);

  /// Ingests one point and returns metrics for every grid step it finalized.
  /// Throws kOutOfOrderPoint if the speaker's times go backwards, and
  /// kInvalidConfig for an unknown speaker.
  std::vector<WindowMetrics> update(const StreamPoint& point);

  /// End of stream: finalizes the remaining grid points up to t_end.
  std::vector<WindowMetrics> flush(double t_end);

  /// Latest emission, or nullopt when nothing was finalized yet (e.g. one
  /// speaker has not spoken).
  const std::optional<WindowMetrics>& current() const noexcept { return current_; }

  std::size_t finalized() const noexcept { return next_index_; }
  std::size_t window_capacity() const noexcept { return capacity_; }

  /// Window contents as batch tracks (needs >= 2 samples in the window).
  ResampledTrack window_track_a() const;
  ResampledTrack window_track_b() const;

 private:
  bool ready(const KnnResampler& r, double g) const;
  WindowMetrics finalize();
  double value_a(std::size_t i) const { return a_[i - base_]; }
  double value_b(std::size_t i) const { return b_[i - base_]; }
  ResampledTrack window_track(const std::string& speaker, const std::deque<double>& v) const;

  StreamConfig cfg_;
  std::size_t capacity_;
  long lag_;
  KnnResampler points_a_;
  KnnResampler points_b_;
  std::size_t next_index_ = 0;  // next grid index to finalize

  // Finalized samples from index base_ on.
  std::size_t base_ = 0;
  std::deque<double> a_;
  std::deque<double> b_;

  RunningPearson converge_;
  RunningPearson sync_;
  // Current synchrony pair range over b-indices, [pair_lo_, pair_hi_).
  std::size_t pair_lo_ = 0;
  std::size_t pair_hi_ = 0;

  std::optional<WindowMetrics> current_;
};

}  // namespace entrain

#endif  // ENTRAIN_STREAMING_HPP_
