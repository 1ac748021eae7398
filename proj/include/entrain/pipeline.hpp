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

#ifndef ENTRAIN_PIPELINE_HPP_
#define ENTRAIN_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entrain/entrainment.hpp"
#include "entrain/features.hpp"
#include "entrain/perception.hpp"
#include "entrain/preprocess.hpp"
#include "entrain/prosody.hpp"
#include "entrain/segmentation.hpp"
#include "entrain/stats.hpp"
#include "entrain/streaming.hpp"

namespace entrain {

inline constexpr const char* kTutor = "tutor";
inline constexpr const char* kParticipant = "participant";

struct AnalysisConfig {
  FrameConfig frame;
  VadConfig vad;
  PreprocessConfig preprocess;
  EntrainmentConfig entrainment;
  double window_seconds = 120.0;  // streaming window
  unsigned workers = 0;           // 0 = hardware concurrency
};

/// Command-line values; any that are set win over the manifest.
struct ConfigOverrides {
  std::optional<double> alpha;
  std::optional<double> grid_step;
  std::optional<std::size_t> k;
  std::optional<double> delta;
  std::optional<unsigned> workers;

  void apply(AnalysisConfig& cfg) const;
};

struct SessionManifest {
  std::string dyad_id;
  std::string condition;
  std::filesystem::path tutor_audio;
  std::filesystem::path participant_audio;
  std::optional<std::filesystem::path> segments;  // CSV speaker,start_s,end_s
  AnalysisConfig config;                          // study config + dyad overrides + flags
};

struct StudyManifest {
  AnalysisConfig config;
  std::vector<SessionManifest> dyads;
  std::optional<std::filesystem::path> perception_csv;
  std::vector<std::string> perception_scales;  // empty = every scale in the CSV
};

/// Parses a study manifest. Relative paths resolve against the manifest's
/// directory. Throws kIoError / kParseError / kInvalidConfig.
StudyManifest load_manifest(const std::filesystem::path& path, const ConfigOverrides& flags = {});
StudyManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir,
                             const ConfigOverrides& flags = {});

/// Everything computed for one dyad; `error` is set when a stage failed.
struct DyadAnalysis {
  std::string dyad_id;
  std::string condition;
  std::string error;
  EntrainmentReport report;
  std::optional<TimeGrid> grid;
  std::vector<ResampledTrack> tutor_tracks;
  std::vector<ResampledTrack> participant_tracks;

  bool ok() const noexcept { return error.empty(); }
};

/// Audio -> prosody -> segmentation (or CSV override) -> features ->
/// standardize/resample -> metrics. Never throws; failures land in `error`.
DyadAnalysis analyze_session(const SessionManifest& session);

struct ConditionFraction {
  std::string condition;
  std::size_t flagged = 0;
  std::size_t total = 0;
  double fraction = 0.0;
};

/// Share of successfully analyzed dyads per condition whose (feature, metric)
/// correlation is significantly positive. Metric must be convergence or
/// synchrony. Conditions appear in first-seen order.
std::vector<ConditionFraction> significant_positive_fraction(const std::vector<DyadAnalysis>& dyads,
                                                             Feature feature, Metric metric);

struct ConditionComparison {
  Feature feature = Feature::kMeanPitch;
  Metric metric = Metric::kConvergence;
  std::map<std::string, std::size_t> group_sizes;
  std::map<std::string, Outcome<stats::TestResult>> shapiro;
  Outcome<stats::TestResult> levene;
  stats::TestResult kruskal_wallis;
};

/// Shapiro-Wilk per group and Levene across groups (recorded only), then
/// Kruskal-Wallis. Throws kInsufficientData unless there are 2+ groups of
/// 2+ values.
ConditionComparison compare_conditions(const std::map<std::string, std::vector<double>>& groups,
                                       Feature feature = Feature::kMeanPitch,
                                       Metric metric = Metric::kConvergence);

/// Groups the metric values of successful dyads by condition, then compares.
ConditionComparison compare_conditions(const std::vector<DyadAnalysis>& dyads, Feature feature,
                                       Metric metric);

struct FractionSummary {
  Feature feature;
  Metric metric;
  std::vector<ConditionFraction> conditions;
};

struct PerceptionSummary {
  std::string scale;
  Feature feature;
  Metric metric;
  Outcome<PerceptionCorrelation> correlation;
  std::optional<double> power;
};

struct ComparisonSummary {
  Feature feature;
  Metric metric;
  Outcome<ConditionComparison> comparison;
};

struct StudyReport {
  AnalysisConfig config;
  std::vector<std::string> conditions;
  std::vector<DyadAnalysis> dyads;  // manifest order
  std::vector<FractionSummary> fractions;
  std::vector<ComparisonSummary> comparisons;
  std::vector<PerceptionSummary> perception;
};

/// Analyzes every dyad (concurrently, bounded by config.workers) and
/// aggregates the study-level statistics. A perception CSV that cannot be
/// read is fatal; a failing dyad is not.
StudyReport run_study(const StudyManifest& manifest);

/// Aggregation only, for callers that analyzed dyads themselves.
StudyReport summarize_study(const AnalysisConfig& config, std::vector<DyadAnalysis> dyads,
                            const std::vector<PerceptionRecord>* perception,
                            const std::vector<std::string>& scales = {});

/// Writes study_report.json, dyads.csv and plots/<dyad>_<feature>.csv.
void emit_outputs(const StudyReport& report, const std::filesystem::path& out_dir);

std::string study_report_json(const StudyReport& report);

struct StreamEvent {
  Feature feature;
  WindowMetrics metrics;
};

/// Replays one dyad's standardized utterance points in time order through
/// the incremental estimator, one per feature. Events are ordered by grid
/// index, then feature. Throws on analysis failure.
std::vector<StreamEvent> stream_session(const SessionManifest& session);

/// One JSON object per line: {t, feature, window_convergence_r,
/// window_convergence_p, window_synchrony_r, window_synchrony_p}.
void write_stream_events(std::ostream& out, const std::vector<StreamEvent>& events);

}  // namespace entrain

#endif  // ENTRAIN_PIPELINE_HPP_
