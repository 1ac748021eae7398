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

#ifndef ENTRAIN_ENTRAINMENT_HPP_
#define ENTRAIN_ENTRAINMENT_HPP_

// Dyad-level entrainment metrics over two resampled feature tracks A and B:
//
//   proximity   D(t) = -|A(t) - B(t)|
//   convergence corr(D(t), t)
//   synchrony   corr(A(t + delta), B(t))
//
// Correlations over a uniform grid reduce to plain sample sums, so both
// correlations are ordinary Pearson coefficients on grid samples.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entrain/features.hpp"
#include "entrain/preprocess.hpp"

namespace entrain {

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double p_value = 1.0;
  bool significant_positive = false;  // r > 0 and p < alpha
  std::optional<double> lag;          // synchrony: delta actually used (s)
};

/// How "significantly positive" is decided.
struct SignificanceConfig {
  double alpha = 0.01;
  /// false: two-sided p plus a sign check. true: one-sided p for r > 0.
  bool one_sided = false;
};

/// p-value and flag for a coefficient computed on n pairs.
CorrelationResult correlation_result(double r, std::size_t n, const SignificanceConfig& sig);

struct ProximitySeries {
  TimeGrid grid{0.0, 1.0, 1.0};
  std::vector<double> values;  // all <= 0

  double mean() const;
};

struct LagSearch {
  double min = -1.0;  // s
  double max = 1.0;   // s
  double step = 0.1;  // s
};

struct SynchronyConfig {
  double delta = 0.0;  // s; shifted by round(delta / grid step) samples
  std::optional<LagSearch> search;
};

/// Throws kGridMismatch unless both tracks share grid and feature.
ProximitySeries proximity(const ResampledTrack& a, const ResampledTrack& b);

/// Throws kGridMismatch or kDegenerateSeries (constant D or < 3 points).
CorrelationResult convergence(const ResampledTrack& a, const ResampledTrack& b,
                              const SignificanceConfig& sig = {});

/// Correlation of a shifted by `lag_steps` samples against b, on the overlap.
/// Throws kInsufficientOverlap or kDegenerateSeries.
CorrelationResult synchrony_at(const ResampledTrack& a, const ResampledTrack& b,
                               long lag_steps, const SignificanceConfig& sig = {});

/// Fixed delta, or the delta maximizing r when a search range is given (ties
/// go to the smallest |delta|).
CorrelationResult synchrony(const ResampledTrack& a, const ResampledTrack& b,
                            const SynchronyConfig& cfg = {}, const SignificanceConfig& sig = {});

/// Either a value or the reason it could not be computed.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string error;

  bool ok() const noexcept { return value.has_value(); }
};

struct FeatureEntrainment {
  Feature feature = Feature::kMeanPitch;
  std::string absent_reason;  // empty when both tracks were available
  std::optional<ProximitySeries> proximity;
  std::optional<double> proximity_mean;
  Outcome<CorrelationResult> convergence;
  Outcome<CorrelationResult> synchrony;

  bool present() const noexcept { return absent_reason.empty(); }
};

struct EntrainmentConfig {
  SignificanceConfig significance;
  SynchronyConfig synchrony;
};

struct EntrainmentReport {
  std::string dyad_id;
  std::vector<FeatureEntrainment> features;  // one per Feature, in kAllFeatures order
  bool entrained = false;

  const FeatureEntrainment& at(Feature f) const;
};

/// Per-feature metrics for a dyad. Features missing from either side are
/// recorded as absent (with the reason from `absent_reasons` if given);
/// per-metric failures are recorded, never thrown.
EntrainmentReport analyze_dyad(const std::string& dyad_id, const std::vector<ResampledTrack>& a,
                               const std::vector<ResampledTrack>& b,
                               const EntrainmentConfig& cfg = {},
                               const std::map<Feature, std::string>& absent_reasons = {});

}  // namespace entrain

#endif  // ENTRAIN_ENTRAINMENT_HPP_
