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

#include "entrain/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "entrain/csv.hpp"
#include "entrain/error.hpp"

namespace entrain {

namespace {

struct MeanMax {
  double sum = 0.0;
  double max = -INFINITY;
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    max = std::max(max, v);
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
};

}  // namespace

std::string_view to_string(Feature f) noexcept {
  switch (f) {
    case Feature::kMeanPitch: return "mean_pitch";
    case Feature::kMaxPitch: return "max_pitch";
    case Feature::kMeanIntensity: return "mean_intensity";
    case Feature::kMaxIntensity: return "max_intensity";
  }
  return "unknown";
}

std::optional<Feature> parse_feature(std::string_view name) noexcept {
  for (Feature f : kAllFeatures) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<UtteranceFeaturePoint> aggregate_features(
    const FrameTrack& pitch, const FrameTrack& intensity,
    const std::vector<UtteranceSegment>& segments) {
  if (pitch.size() != intensity.size() || pitch.hop != intensity.hop ||
      pitch.times != intensity.times) {
    throw Error(ErrorCode::kMismatchedTracks, "pitch and intensity tracks differ in layout");
  }

  std::vector<UtteranceFeaturePoint> points;
  const auto& times = pitch.times;
  for (const auto& seg : segments) {
    const auto first = std::lower_bound(times.begin(), times.end(), seg.start_time);
    const auto last = std::lower_bound(first, times.end(), seg.end_time);
    MeanMax f0;
    MeanMax db;
    for (auto it = first; it != last; ++it) {
      const auto i = static_cast<std::size_t>(it - times.begin());
      if (pitch.active[i] && std::isfinite(pitch.values[i])) f0.add(pitch.values[i]);
      if (intensity.active[i] && std::isfinite(intensity.values[i])) db.add(intensity.values[i]);
    }
    const double center = utterance_center(seg);
    if (f0.count > 0) {
      points.push_back({seg.speaker, Feature::kMeanPitch, center, f0.mean(), seg});
      points.push_back({seg.speaker, Feature::kMaxPitch, center, f0.max, seg});
    }
    if (db.count > 0) {
      points.push_back({seg.speaker, Feature::kMeanIntensity, center, db.mean(), seg});
      points.push_back({seg.speaker, Feature::kMaxIntensity, center, db.max, seg});
    }
  }
  return points;
}

std::vector<UtteranceFeaturePoint> select(const std::vector<UtteranceFeaturePoint>& points,
                                          const std::string& speaker, Feature feature) {
  std::vector<UtteranceFeaturePoint> out;
  for (const auto& p : points) {
    if (p.speaker == speaker && p.feature == feature) out.push_back(p);
  }
  return out;
}

void write_features_csv(std::ostream& out, const std::vector<UtteranceFeaturePoint>& points) {
  out << "speaker,feature,time_s,value\n";
  for (const auto& p : points) {
    out << p.speaker << ',' << to_string(p.feature) << ',' << csv::format_number(p.time) << ','
        << csv::format_number(p.value) << '\n';
  }
}

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<UtteranceFeaturePoint>& points) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_features_csv(out, points);
}

}  // namespace entrain
