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

#ifndef ENTRAIN_FEATURES_HPP_
#define ENTRAIN_FEATURES_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/prosody.hpp"
#include "entrain/segmentation.hpp"

namespace entrain {

enum class Feature { kMeanPitch, kMaxPitch, kMeanIntensity, kMaxIntensity };

inline constexpr std::array<Feature, 4> kAllFeatures{Feature::kMeanPitch, Feature::kMaxPitch,
                                                     Feature::kMeanIntensity,
                                                     Feature::kMaxIntensity};

std::string_view to_string(Feature f) noexcept;
std::optional<Feature> parse_feature(std::string_view name) noexcept;

/// One utterance-level measurement, stamped at the utterance center.
struct UtteranceFeaturePoint {
  std::string speaker;
  Feature feature = Feature::kMeanPitch;
  double time = 0.0;   // s
  double value = 0.0;  // Hz, dB, or z-units after standardization
  UtteranceSegment utterance;
};

/// Per segment: mean/max pitch over voiced frames and mean/max intensity over
/// non-silent frames whose centers fall in [start, end). Segments without
/// such frames emit no point for that family. Output is ordered by segment,
/// then by feature.
std::vector<UtteranceFeaturePoint> aggregate_features(
    const FrameTrack& pitch, const FrameTrack& intensity,
    const std::vector<UtteranceSegment>& segments);

/// Points of one (speaker, feature), in input order.
std::vector<UtteranceFeaturePoint> select(const std::vector<UtteranceFeaturePoint>& points,
                                          const std::string& speaker, Feature feature);

/// CSV `speaker,feature,time_s,value`.
void write_features_csv(std::ostream& out, const std::vector<UtteranceFeaturePoint>& points);
void write_features_csv(const std::filesystem::path& path,
                        const std::vector<UtteranceFeaturePoint>& points);

}  // namespace entrain

#endif  // ENTRAIN_FEATURES_HPP_
