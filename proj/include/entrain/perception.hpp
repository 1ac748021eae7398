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

#ifndef ENTRAIN_PERCEPTION_HPP_
#define ENTRAIN_PERCEPTION_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/entrainment.hpp"
#include "entrain/stats.hpp"

namespace entrain {

/// Questionnaire score for one scale of one dyad, scaled into [0, 1].
struct PerceptionRecord {
  std::string dyad_id;
  std::string scale;
  double raw_score = 0.0;
  double max_score = 1.0;
  double normalized = 0.0;  // raw_score / max_score
};

/// CSV with header `dyad_id,scale,raw,max`. Throws kParseError,
/// kDuplicateRecord for a repeated (dyad, scale), kScoreOutOfRange when
/// raw < 0, raw > max or max <= 0.
std::vector<PerceptionRecord> load_perception_csv(std::istream& in);
std::vector<PerceptionRecord> load_perception_csv(const std::filesystem::path& path);

enum class Metric { kProximityMean, kConvergence, kSynchrony };

std::string_view to_string(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

/// Scalar for (feature, metric) from a report: proximity mean, or the
/// correlation coefficient. nullopt when not computed.
std::optional<double> metric_value(const EntrainmentReport& report, Feature feature, Metric metric);

struct PerceptionPair {
  std::string dyad_id;
  double score = 0.0;   // normalized
  double metric = 0.0;
};

struct PerceptionCorrelation {
  std::string scale;
  Feature feature = Feature::kMeanPitch;
  Metric metric = Metric::kConvergence;
  stats::TestResult test;
  std::vector<PerceptionPair> pairs;     // in report order
  std::size_t records_without_metric = 0;  // scale records with no usable report
  std::size_t reports_without_record = 0;  // reports with no record for the scale
};

/// Pearson between normalized scores and a per-dyad metric, joined on dyad
/// id. Throws kInsufficientPairs with fewer than 3 complete pairs.
PerceptionCorrelation correlate_with_entrainment(const std::vector<PerceptionRecord>& records,
                                                 const std::vector<EntrainmentReport>& reports,
                                                 const std::string& scale, Feature feature,
                                                 Metric metric);

}  // namespace entrain

#endif  // ENTRAIN_PERCEPTION_HPP_
