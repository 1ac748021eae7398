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

#include "entrain/perception.hpp"

#include <fstream>
#include <map>
#include <set>
#include <utility>

#include "entrain/csv.hpp"
#include "entrain/error.hpp"

namespace entrain {

std::vector<PerceptionRecord> load_perception_csv(std::istream& in) {
  csv::expect_header(in, {"dyad_id", "scale", "raw", "max"});
  std::vector<PerceptionRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t row = 1;
  while (csv::next_line(in, line)) {
    ++row;
    const auto f = csv::split_line(line);
    if (f.size() != 4 || f[0].empty() || f[1].empty()) {
      throw Error(ErrorCode::kParseError, "row " + std::to_string(row) + ": " + line);
    }
    PerceptionRecord rec;
    rec.dyad_id = f[0];
    rec.scale = f[1];
    rec.raw_score = csv::parse_number(f[2], "raw");
    rec.max_score = csv::parse_number(f[3], "max");
    if (!(rec.max_score > 0.0) || !(rec.raw_score >= 0.0) || rec.raw_score > rec.max_score) {
      throw Error(ErrorCode::kScoreOutOfRange, "row " + std::to_string(row) + ": need 0 <= raw <= max, max > 0");
    }
    if (!seen.emplace(rec.dyad_id, rec.scale).second) {
      throw Error(ErrorCode::kDuplicateRecord, "dyad " + rec.dyad_id + " scale " + rec.scale);
    }
    rec.normalized = rec.raw_score / rec.max_score;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PerceptionRecord> load_perception_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return load_perception_csv(in);
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::kProximityMean: return "proximity_mean";
    case Metric::kConvergence: return "convergence";
    case Metric::kSynchrony: return "synchrony";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  for (Metric m : {Metric::kProximityMean, Metric::kConvergence, Metric::kSynchrony}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<double> metric_value(const EntrainmentReport& report, Feature feature,
                                   Metric metric) {
  for (const auto& fe : report.features) {
    if (fe.feature != feature) continue;
    switch (metric) {
      case Metric::kProximityMean: return fe.proximity_mean;
      case Metric::kConvergence:
        return fe.convergence.ok() ? std::optional<double>(fe.convergence.value->r) : std::nullopt;
      case Metric::kSynchrony:
        return fe.synchrony.ok() ? std::optional<double>(fe.synchrony.value->r) : std::nullopt;
    }
  }
  return std::nullopt;
}

PerceptionCorrelation correlate_with_entrainment(const std::vector<PerceptionRecord>& records,
                                                 const std::vector<EntrainmentReport>& reports,
                                                 const std::string& scale, Feature feature,
                                                 Metric metric) {
  std::map<std::string, double> scores;
  for (const auto& r : records) {
    if (r.scale == scale) scores.emplace(r.dyad_id, r.normalized);
  }

  PerceptionCorrelation out;
  out.scale = scale;
  out.feature = feature;
  out.metric = metric;
  std::set<std::string> matched;
  for (const auto& rep : reports) {
    const auto it = scores.find(rep.dyad_id);
    if (it == scores.end()) {
      ++out.reports_without_record;
      continue;
    }
    const auto value = metric_value(rep, feature, metric);
    if (!value) continue;
    out.pairs.push_back({rep.dyad_id, it->second, *value});
    matched.insert(rep.dyad_id);
  }
  out.records_without_metric = scores.size() - matched.size();

  if (out.pairs.size() < 3) {
    throw Error(ErrorCode::kInsufficientPairs,
                std::to_string(out.pairs.size()) + " complete pairs for scale " + scale);
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : out.pairs) {
    x.push_back(p.score);
    y.push_back(p.metric);
  }
  out.test = stats::pearson(x, y);
  return out;
}

}  // namespace entrain
