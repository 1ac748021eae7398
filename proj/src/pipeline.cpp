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

#include "entrain/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "entrain/audio_io.hpp"
#include "entrain/csv.hpp"
#include "entrain/error.hpp"
#include "json.hpp"

namespace entrain {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::array<Metric, 3> kAllMetrics{Metric::kProximityMean, Metric::kConvergence,
                                            Metric::kSynchrony};

// ---------------------------------------------------------------------------
// Manifest parsing

[[noreturn]] void bad_manifest(const std::string& msg) {
  throw Error(ErrorCode::kParseError, "manifest: " + msg);
}

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) bad_manifest(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      bad_manifest("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double get_number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) bad_manifest(std::string(key) + " must be a number");
  return v.get<double>();
}

std::size_t get_count(const Json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    bad_manifest(std::string(key) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

bool get_bool(const Json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) bad_manifest(std::string(key) + " must be true or false");
  return v.get<bool>();
}

std::string get_string(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string() || obj.at(key).get<std::string>().empty()) {
    bad_manifest(where + " needs a non-empty string '" + key + "'");
  }
  return obj.at(key).get<std::string>();
}

void apply_config(const Json& j, AnalysisConfig& cfg, const std::string& where) {
  check_keys(j,
             {"alpha", "one_sided", "grid_step", "k", "delta", "lag_search", "zscore_before_knn",
              "window_seconds", "workers", "frame", "vad"},
             where);
  auto& sig = cfg.entrainment.significance;
  sig.alpha = get_number(j, "alpha", sig.alpha);
  sig.one_sided = get_bool(j, "one_sided", sig.one_sided);
  cfg.preprocess.grid_step = get_number(j, "grid_step", cfg.preprocess.grid_step);
  cfg.preprocess.k = get_count(j, "k", cfg.preprocess.k);
  cfg.preprocess.zscore_before_knn =
      get_bool(j, "zscore_before_knn", cfg.preprocess.zscore_before_knn);
  cfg.entrainment.synchrony.delta = get_number(j, "delta", cfg.entrainment.synchrony.delta);
  if (j.contains("lag_search")) {
    const auto& ls = j.at("lag_search");
    if (ls.is_null()) {
      cfg.entrainment.synchrony.search.reset();
    } else {
      check_keys(ls, {"min", "max", "step"}, where + ".lag_search");
      LagSearch s = cfg.entrainment.synchrony.search.value_or(LagSearch{});
      s.min = get_number(ls, "min", s.min);
      s.max = get_number(ls, "max", s.max);
      s.step = get_number(ls, "step", s.step);
      cfg.entrainment.synchrony.search = s;
    }
  }
  cfg.window_seconds = get_number(j, "window_seconds", cfg.window_seconds);
  cfg.workers = static_cast<unsigned>(get_count(j, "workers", cfg.workers));
  if (j.contains("frame")) {
    const auto& f = j.at("frame");
    check_keys(f,
               {"frame_length", "hop", "pitch_floor", "pitch_ceiling", "voicing_threshold",
                "silence_floor_db", "median_window"},
               where + ".frame");
    auto& fc = cfg.frame;
    fc.frame_length = get_number(f, "frame_length", fc.frame_length);
    fc.hop = get_number(f, "hop", fc.hop);
    fc.pitch_floor = get_number(f, "pitch_floor", fc.pitch_floor);
    fc.pitch_ceiling = get_number(f, "pitch_ceiling", fc.pitch_ceiling);
    fc.voicing_threshold = get_number(f, "voicing_threshold", fc.voicing_threshold);
    fc.silence_floor_db = get_number(f, "silence_floor_db", fc.silence_floor_db);
    fc.median_window = static_cast<int>(get_count(f, "median_window",
                                                  static_cast<std::size_t>(fc.median_window)));
  }
  if (j.contains("vad")) {
    const auto& v = j.at("vad");
    check_keys(v,
               {"open_threshold_db", "close_threshold_db", "min_speech", "min_gap",
                "min_utterance", "merge_gap"},
               where + ".vad");
    auto& vc = cfg.vad;
    vc.open_threshold_db = get_number(v, "open_threshold_db", vc.open_threshold_db);
    vc.close_threshold_db = get_number(v, "close_threshold_db", vc.close_threshold_db);
    vc.min_speech = get_number(v, "min_speech", vc.min_speech);
    vc.min_gap = get_number(v, "min_gap", vc.min_gap);
    vc.min_utterance = get_number(v, "min_utterance", vc.min_utterance);
    vc.merge_gap = get_number(v, "merge_gap", vc.merge_gap);
  }
}

void validate_config(const AnalysisConfig& cfg) {
  const auto& sig = cfg.entrainment.significance;
  if (!(sig.alpha > 0.0 && sig.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha must lie in (0, 1)");
  }
  if (!(cfg.preprocess.grid_step > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "grid_step must be positive");
  }
  if (cfg.preprocess.k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  if (!std::isfinite(cfg.entrainment.synchrony.delta)) {
    throw Error(ErrorCode::kInvalidConfig, "delta must be finite");
  }
  if (const auto& s = cfg.entrainment.synchrony.search) {
    if (!(s->step > 0.0) || !(s->min <= s->max)) {
      throw Error(ErrorCode::kInvalidConfig, "lag_search needs min <= max and step > 0");
    }
  }
  if (!(cfg.window_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "window_seconds must be positive");
  }
  cfg.vad.validate();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// ---------------------------------------------------------------------------
// Per-dyad analysis

// Feature points of both speakers on the shared grid, before resampling.
struct PreparedSession {
  std::optional<TimeGrid> grid;
  std::string grid_error;
  std::map<Feature, std::vector<UtteranceFeaturePoint>> tutor;
  std::map<Feature, std::vector<UtteranceFeaturePoint>> participant;
};

std::string stage_error(const char* stage, const std::exception& e) {
  return std::string(stage) + ": " + e.what();
}

PreparedSession prepare_session(const SessionManifest& s, std::string& error) {
  const AnalysisConfig& cfg = s.config;
  PreparedSession out;

  std::optional<AudioBuffer> tutor_audio;
  std::optional<AudioBuffer> participant_audio;
  try {
    tutor_audio.emplace(load_wav(s.tutor_audio));
    participant_audio.emplace(load_wav(s.participant_audio));
  } catch (const std::exception& e) {
    error = stage_error("audio", e);
    return out;
  }

  ProsodyTracks tutor_tracks;
  ProsodyTracks participant_tracks;
  try {
    tutor_tracks = analyze_prosody(*tutor_audio, cfg.frame);
    participant_tracks = analyze_prosody(*participant_audio, cfg.frame);
  } catch (const std::exception& e) {
    error = stage_error("prosody", e);
    return out;
  }

  std::vector<UtteranceSegment> tutor_segments;
  std::vector<UtteranceSegment> participant_segments;
  try {
    if (s.segments) {
      for (auto& seg : read_segments_csv(*s.segments)) {
        if (seg.speaker == kTutor) {
          tutor_segments.push_back(std::move(seg));
        } else if (seg.speaker == kParticipant) {
          participant_segments.push_back(std::move(seg));
        } else {
          throw Error(ErrorCode::kParseError, "segment speaker must be 'tutor' or 'participant', got '" +
                                                  seg.speaker + "'");
        }
      }
    } else {
      tutor_segments = detect_utterances(tutor_tracks.intensity, cfg.vad, kTutor);
      participant_segments = detect_utterances(participant_tracks.intensity, cfg.vad, kParticipant);
    }
  } catch (const std::exception& e) {
    error = stage_error("segmentation", e);
    return out;
  }

  std::vector<UtteranceFeaturePoint> tutor_points;
  std::vector<UtteranceFeaturePoint> participant_points;
  try {
    tutor_points = aggregate_features(tutor_tracks.pitch, tutor_tracks.intensity, tutor_segments);
    participant_points = aggregate_features(participant_tracks.pitch, participant_tracks.intensity,
                                            participant_segments);
  } catch (const std::exception& e) {
    error = stage_error("features", e);
    return out;
  }
  for (Feature f : kAllFeatures) {
    out.tutor[f] = select(tutor_points, kTutor, f);
    out.participant[f] = select(participant_points, kParticipant, f);
  }

  std::vector<UtteranceSegment> all = tutor_segments;
  all.insert(all.end(), participant_segments.begin(), participant_segments.end());
  try {
    out.grid.emplace(grid_spanning(all, cfg.preprocess.grid_step));
  } catch (const std::exception& e) {
    error = stage_error("preprocess", e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON helpers

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json number(const std::optional<double>& v) {
  return v ? number(*v) : Json(nullptr);
}

Json text_or_null(const std::string& s) {
  return s.empty() ? Json(nullptr) : Json(s);
}

Json to_json(const CorrelationResult& c) {
  Json j;
  j["r"] = number(c.r);
  j["n"] = c.n;
  j["p_value"] = number(c.p_value);
  j["significant_positive"] = c.significant_positive;
  if (c.lag) j["lag_s"] = number(*c.lag);
  return j;
}

Json to_json(const Outcome<CorrelationResult>& o) {
  if (o.ok()) return to_json(*o.value);
  Json j;
  j["error"] = o.error;
  return j;
}

Json to_json(const stats::TestResult& t) {
  Json j;
  j["method"] = t.method;
  j["statistic"] = number(t.statistic);
  j["p_value"] = number(t.p_value);
  j["sizes"] = t.sizes;
  return j;
}

Json to_json(const Outcome<stats::TestResult>& o) {
  if (o.ok()) return to_json(*o.value);
  Json j;
  j["error"] = o.error;
  return j;
}

Json config_json(const AnalysisConfig& cfg) {
  Json j;
  const auto& sig = cfg.entrainment.significance;
  j["alpha"] = sig.alpha;
  j["one_sided"] = sig.one_sided;
  j["grid_step"] = cfg.preprocess.grid_step;
  j["k"] = cfg.preprocess.k;
  j["zscore_before_knn"] = cfg.preprocess.zscore_before_knn;
  j["delta"] = cfg.entrainment.synchrony.delta;
  if (const auto& s = cfg.entrainment.synchrony.search) {
    j["lag_search"] = Json{{"min", s->min}, {"max", s->max}, {"step", s->step}};
  } else {
    j["lag_search"] = nullptr;
  }
  j["window_seconds"] = cfg.window_seconds;
  const auto& f = cfg.frame;
  j["frame"] = Json{{"frame_length", f.frame_length},
                    {"hop", f.hop},
                    {"pitch_floor", f.pitch_floor},
                    {"pitch_ceiling", f.pitch_ceiling},
                    {"voicing_threshold", f.voicing_threshold},
                    {"silence_floor_db", f.silence_floor_db},
                    {"median_window", f.median_window}};
  const auto& v = cfg.vad;
  j["vad"] = Json{{"open_threshold_db", v.open_threshold_db},
                  {"close_threshold_db", v.close_threshold_db},
                  {"min_speech", v.min_speech},
                  {"min_gap", v.min_gap},
                  {"min_utterance", v.min_utterance},
                  {"merge_gap", v.merge_gap}};
  return j;
}

Json dyad_json(const DyadAnalysis& d) {
  Json j;
  j["id"] = d.dyad_id;
  j["condition"] = d.condition;
  j["status"] = d.ok() ? "ok" : "error";
  j["error"] = text_or_null(d.error);
  if (!d.ok()) return j;
  j["entrained"] = d.report.entrained;
  if (d.grid) {
    j["grid"] = Json{{"t0", d.grid->t0()},
                     {"t_end", d.grid->t_end()},
                     {"step", d.grid->step()},
                     {"points", d.grid->size()}};
  }
  Json features = Json::object();
  for (const auto& fe : d.report.features) {
    Json f;
    f["present"] = fe.present();
    f["absent_reason"] = text_or_null(fe.absent_reason);
    if (fe.present()) {
      f["proximity_mean"] = number(fe.proximity_mean);
      f["convergence"] = to_json(fe.convergence);
      f["synchrony"] = to_json(fe.synchrony);
    }
    features[std::string(to_string(fe.feature))] = std::move(f);
  }
  j["features"] = std::move(features);
  return j;
}

std::string file_safe(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    if (!keep) c = '_';
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::string dyads_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "dyad_id,condition,status,feature,metric,value,n,p_value,significant_positive,lag_s,note\n";
  for (const auto& d : report.dyads) {
    for (Feature f : kAllFeatures) {
      for (Metric m : kAllMetrics) {
        out << csv_field(d.dyad_id) << ',' << csv_field(d.condition) << ','
            << (d.ok() ? "ok" : "error") << ',' << to_string(f) << ',' << to_string(m) << ',';
        if (!d.ok()) {
          out << ",,,,," << csv_field(d.error) << '\n';
          continue;
        }
        const auto& fe = d.report.at(f);
        if (!fe.present()) {
          out << ",,,,," << csv_field(fe.absent_reason) << '\n';
          continue;
        }
        if (m == Metric::kProximityMean) {
          out << (fe.proximity_mean ? csv::format_number(*fe.proximity_mean) : "") << ','
              << (fe.proximity ? std::to_string(fe.proximity->values.size()) : "") << ",,,,\n";
          continue;
        }
        const auto& o = m == Metric::kConvergence ? fe.convergence : fe.synchrony;
        if (!o.ok()) {
          out << ",,,,," << csv_field(o.error) << '\n';
          continue;
        }
        const auto& c = *o.value;
        out << csv::format_number(c.r) << ',' << c.n << ',' << csv::format_number(c.p_value) << ','
            << (c.significant_positive ? "true" : "false") << ','
            << (c.lag ? csv::format_number(*c.lag) : "") << ",\n";
      }
    }
  }
  return out.str();
}

const ResampledTrack* find_track(const std::vector<ResampledTrack>& tracks, Feature f) {
  for (const auto& t : tracks) {
    if (t.feature == f) return &t;
  }
  return nullptr;
}

std::string plot_csv(const DyadAnalysis& d, Feature f) {
  const ResampledTrack* a = find_track(d.tutor_tracks, f);
  const ResampledTrack* b = find_track(d.participant_tracks, f);
  const auto& prox = d.report.at(f).proximity;
  std::ostringstream out;
  out << "time_s,tutor_z,participant_z,proximity\n";
  for (std::size_t i = 0; i < a->values.size(); ++i) {
    out << csv::format_number(a->grid.at(i)) << ',' << csv::format_number(a->values[i]) << ','
        << csv::format_number(b->values[i]) << ','
        << (prox ? csv::format_number(prox->values[i]) : "") << '\n';
  }
  return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------

void ConfigOverrides::apply(AnalysisConfig& cfg) const {
  if (alpha) cfg.entrainment.significance.alpha = *alpha;
  if (grid_step) cfg.preprocess.grid_step = *grid_step;
  if (k) cfg.preprocess.k = *k;
  if (delta) {
    cfg.entrainment.synchrony.delta = *delta;
    cfg.entrainment.synchrony.search.reset();
  }
  if (workers) cfg.workers = *workers;
}

StudyManifest parse_manifest(const std::string& json_text, const fs::path& base_dir,
                             const ConfigOverrides& flags) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    bad_manifest(e.what());
  }
  check_keys(root, {"config", "dyads", "perception_csv", "perception_scales"}, "manifest");

  StudyManifest m;
  if (root.contains("config")) apply_config(root.at("config"), m.config, "config");
  AnalysisConfig study = m.config;
  flags.apply(m.config);
  validate_config(m.config);

  if (root.contains("perception_csv")) {
    m.perception_csv = resolve(base_dir, get_string(root, "perception_csv", "manifest"));
  }
  if (root.contains("perception_scales")) {
    const auto& scales = root.at("perception_scales");
    if (!scales.is_array()) bad_manifest("perception_scales must be an array of strings");
    for (const auto& s : scales) {
      if (!s.is_string()) bad_manifest("perception_scales must be an array of strings");
      m.perception_scales.push_back(s.get<std::string>());
    }
  }

  if (!root.contains("dyads") || !root.at("dyads").is_array()) bad_manifest("'dyads' array required");
  std::set<std::string> ids;
  for (const auto& d : root.at("dyads")) {
    check_keys(d, {"id", "condition", "tutor_audio", "participant_audio", "segments", "config"},
               "dyad");
    SessionManifest s;
    s.dyad_id = get_string(d, "id", "dyad");
    const std::string where = "dyad '" + s.dyad_id + "'";
    if (!ids.insert(s.dyad_id).second) bad_manifest("duplicate dyad id '" + s.dyad_id + "'");
    s.condition = get_string(d, "condition", where);
    s.tutor_audio = resolve(base_dir, get_string(d, "tutor_audio", where));
    s.participant_audio = resolve(base_dir, get_string(d, "participant_audio", where));
    if (d.contains("segments")) s.segments = resolve(base_dir, get_string(d, "segments", where));
    s.config = study;
    if (d.contains("config")) apply_config(d.at("config"), s.config, where + ".config");
    flags.apply(s.config);
    validate_config(s.config);
    m.dyads.push_back(std::move(s));
  }
  return m;
}

StudyManifest load_manifest(const fs::path& path, const ConfigOverrides& flags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open manifest " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manifest(text.str(), path.parent_path(), flags);
}

DyadAnalysis analyze_session(const SessionManifest& session) {
  DyadAnalysis out;
  out.dyad_id = session.dyad_id;
  out.condition = session.condition;
  out.report.dyad_id = session.dyad_id;
  try {
    PreparedSession prep = prepare_session(session, out.error);
    if (!out.ok()) return out;
    out.grid = prep.grid;

    std::map<Feature, std::string> absent;
    for (Feature f : kAllFeatures) {
      for (const auto& [speaker, points, tracks] :
           {std::tuple{kTutor, &prep.tutor[f], &out.tutor_tracks},
            std::tuple{kParticipant, &prep.participant[f], &out.participant_tracks}}) {
        if (points->empty()) {
          absent.emplace(f, std::string("no ") + speaker + " utterances carry this feature");
          continue;
        }
        try {
          tracks->push_back(resample_feature(*points, *out.grid, session.config.preprocess));
        } catch (const Error& e) {
          absent.emplace(f, std::string(speaker) + ": " + e.what());
        }
      }
    }
    // A feature is usable only when both sides resampled.
    auto drop_absent = [&](std::vector<ResampledTrack>& tracks) {
      std::erase_if(tracks, [&](const ResampledTrack& t) { return absent.count(t.feature) > 0; });
    };
    drop_absent(out.tutor_tracks);
    drop_absent(out.participant_tracks);

    out.report = analyze_dyad(session.dyad_id, out.tutor_tracks, out.participant_tracks,
                              session.config.entrainment, absent);
  } catch (const std::exception& e) {
    out.error = stage_error("entrainment", e);
  }
  return out;
}

std::vector<ConditionFraction> significant_positive_fraction(const std::vector<DyadAnalysis>& dyads,
                                                             Feature feature, Metric metric) {
  if (metric == Metric::kProximityMean) {
    throw Error(ErrorCode::kInvalidConfig, "proximity has no significance flag");
  }
  std::vector<ConditionFraction> out;
  auto slot = [&](const std::string& condition) -> ConditionFraction& {
    for (auto& c : out) {
      if (c.condition == condition) return c;
    }
    out.push_back({condition, 0, 0, 0.0});
    return out.back();
  };
  for (const auto& d : dyads) {
    ConditionFraction& c = slot(d.condition);
    if (!d.ok()) continue;
    ++c.total;
    const auto& fe = d.report.at(feature);
    const auto& o = metric == Metric::kConvergence ? fe.convergence : fe.synchrony;
    if (o.ok() && o.value->significant_positive) ++c.flagged;
  }
  for (auto& c : out) {
    c.fraction = c.total == 0 ? 0.0 : static_cast<double>(c.flagged) / static_cast<double>(c.total);
  }
  return out;
}

ConditionComparison compare_conditions(const std::map<std::string, std::vector<double>>& groups,
                                       Feature feature, Metric metric) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "need at least 2 conditions, got " +
                                                  std::to_string(groups.size()));
  }
  ConditionComparison out;
  out.feature = feature;
  out.metric = metric;
  std::vector<std::vector<double>> values;
  for (const auto& [name, v] : groups) {
    if (v.size() < 2) {
      throw Error(ErrorCode::kInsufficientData,
                  "condition '" + name + "' has " + std::to_string(v.size()) + " values");
    }
    out.group_sizes[name] = v.size();
    values.push_back(v);
    Outcome<stats::TestResult> sw;
    try {
      sw.value = stats::shapiro_wilk(v);
    } catch (const Error& e) {
      sw.error = e.what();
    }
    out.shapiro.emplace(name, std::move(sw));
  }
  try {
    out.levene.value = stats::levene(values);
  } catch (const Error& e) {
    out.levene.error = e.what();
  }
  out.kruskal_wallis = stats::kruskal_wallis(values);
  return out;
}

ConditionComparison compare_conditions(const std::vector<DyadAnalysis>& dyads, Feature feature,
                                       Metric metric) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& d : dyads) {
    auto& g = groups[d.condition];
    if (!d.ok()) continue;
    if (const auto v = metric_value(d.report, feature, metric)) g.push_back(*v);
  }
  return compare_conditions(groups, feature, metric);
}

StudyReport summarize_study(const AnalysisConfig& config, std::vector<DyadAnalysis> dyads,
                            const std::vector<PerceptionRecord>* perception,
                            const std::vector<std::string>& scales) {
  StudyReport report;
  report.config = config;
  report.dyads = std::move(dyads);
  for (const auto& d : report.dyads) {
    if (std::find(report.conditions.begin(), report.conditions.end(), d.condition) ==
        report.conditions.end()) {
      report.conditions.push_back(d.condition);
    }
  }

  for (Feature f : kAllFeatures) {
    for (Metric m : {Metric::kConvergence, Metric::kSynchrony}) {
      report.fractions.push_back({f, m, significant_positive_fraction(report.dyads, f, m)});
    }
  }
  for (Feature f : kAllFeatures) {
    for (Metric m : kAllMetrics) {
      ComparisonSummary s{f, m, {}};
      try {
        s.comparison.value = compare_conditions(report.dyads, f, m);
      } catch (const Error& e) {
        s.comparison.error = e.what();
      }
      report.comparisons.push_back(std::move(s));
    }
  }

  if (perception != nullptr) {
    std::vector<std::string> wanted = scales;
    if (wanted.empty()) {
      for (const auto& r : *perception) {
        if (std::find(wanted.begin(), wanted.end(), r.scale) == wanted.end()) {
          wanted.push_back(r.scale);
        }
      }
    }
    std::vector<EntrainmentReport> reports;
    for (const auto& d : report.dyads) {
      if (d.ok()) reports.push_back(d.report);
    }
    for (const auto& scale : wanted) {
      for (Feature f : kAllFeatures) {
        for (Metric m : kAllMetrics) {
          PerceptionSummary s{scale, f, m, {}, std::nullopt};
          try {
            s.correlation.value = correlate_with_entrainment(*perception, reports, scale, f, m);
            const auto& t = s.correlation.value->test;
            s.power = stats::power_pearson(t.statistic, t.sizes.at(0),
                                           config.entrainment.significance.alpha);
          } catch (const Error& e) {
            if (!s.correlation.ok()) s.correlation.error = e.what();
          }
          report.perception.push_back(std::move(s));
        }
      }
    }
  }
  return report;
}

StudyReport run_study(const StudyManifest& manifest) {
  std::optional<std::vector<PerceptionRecord>> perception;
  if (manifest.perception_csv) perception = load_perception_csv(*manifest.perception_csv);

  const std::size_t n = manifest.dyads.size();
  std::vector<DyadAnalysis> results(n);
  unsigned workers = manifest.config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      results[i] = analyze_session(manifest.dyads[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return summarize_study(manifest.config, std::move(results),
                         perception ? &*perception : nullptr, manifest.perception_scales);
}

std::string study_report_json(const StudyReport& report) {
  Json root;
  root["schema_version"] = 1;
  root["config"] = config_json(report.config);
  root["conditions"] = report.conditions;

  Json dyads = Json::array();
  for (const auto& d : report.dyads) dyads.push_back(dyad_json(d));
  root["dyads"] = std::move(dyads);

  Json fractions = Json::array();
  for (const auto& fs : report.fractions) {
    Json j;
    j["feature"] = to_string(fs.feature);
    j["metric"] = to_string(fs.metric);
    Json conds = Json::object();
    for (const auto& c : fs.conditions) {
      conds[c.condition] = Json{{"flagged", c.flagged}, {"total", c.total}, {"fraction", c.fraction}};
    }
    j["conditions"] = std::move(conds);
    fractions.push_back(std::move(j));
  }
  root["significant_positive_fractions"] = std::move(fractions);

  Json comparisons = Json::array();
  for (const auto& cs : report.comparisons) {
    Json j;
    j["feature"] = to_string(cs.feature);
    j["metric"] = to_string(cs.metric);
    if (!cs.comparison.ok()) {
      j["error"] = cs.comparison.error;
    } else {
      const auto& c = *cs.comparison.value;
      j["group_sizes"] = c.group_sizes;
      Json sw = Json::object();
      for (const auto& [name, o] : c.shapiro) sw[name] = to_json(o);
      j["shapiro_wilk"] = std::move(sw);
      j["levene"] = to_json(c.levene);
      j["kruskal_wallis"] = to_json(c.kruskal_wallis);
    }
    comparisons.push_back(std::move(j));
  }
  root["condition_comparisons"] = std::move(comparisons);

  Json perception = Json::array();
  for (const auto& ps : report.perception) {
    Json j;
    j["scale"] = ps.scale;
    j["feature"] = to_string(ps.feature);
    j["metric"] = to_string(ps.metric);
    if (!ps.correlation.ok()) {
      j["error"] = ps.correlation.error;
    } else {
      const auto& c = *ps.correlation.value;
      j["r"] = number(c.test.statistic);
      j["p_value"] = number(c.test.p_value);
      j["n"] = c.pairs.size();
      j["power"] = number(ps.power);
      j["records_without_metric"] = c.records_without_metric;
      j["reports_without_record"] = c.reports_without_record;
      Json pairs = Json::array();
      for (const auto& p : c.pairs) {
        pairs.push_back(Json{{"dyad_id", p.dyad_id}, {"score", number(p.score)},
                             {"metric", number(p.metric)}});
      }
      j["pairs"] = std::move(pairs);
    }
    perception.push_back(std::move(j));
  }
  root["perception"] = std::move(perception);
  return root.dump(2) + "\n";
}

void emit_outputs(const StudyReport& report, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir / "plots", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string() + ": " + ec.message());
  write_text(out_dir / "study_report.json", study_report_json(report));
  write_text(out_dir / "dyads.csv", dyads_csv(report));
  for (const auto& d : report.dyads) {
    if (!d.ok()) continue;
    for (Feature f : kAllFeatures) {
      if (!d.report.at(f).present()) continue;
      const std::string name = file_safe(d.dyad_id) + "_" + std::string(to_string(f)) + ".csv";
      write_text(out_dir / "plots" / name, plot_csv(d, f));
    }
  }
}

std::vector<StreamEvent> stream_session(const SessionManifest& session) {
  // z-scoring after KNN needs the finished track; streaming cannot do that.
  if (!session.config.preprocess.zscore_before_knn) {
    throw Error(ErrorCode::kInvalidConfig, "streaming requires zscore_before_knn");
  }
  std::string error;
  PreparedSession prep = prepare_session(session, error);
  if (!error.empty()) throw Error(ErrorCode::kInsufficientData, error);
  const AnalysisConfig& cfg = session.config;

  std::vector<StreamEvent> events;
  for (Feature f : kAllFeatures) {
    const auto& a = prep.tutor[f];
    const auto& b = prep.participant[f];
    if (a.empty() || b.empty()) continue;
    std::vector<UtteranceFeaturePoint> za;
    std::vector<UtteranceFeaturePoint> zb;
    try {
      za = zscore(a);
      zb = zscore(b);
    } catch (const Error&) {
      continue;  // degenerate feature: nothing to stream
    }

    std::vector<StreamPoint> points;
    for (const auto& p : za) points.push_back({p.time, p.value, kTutor});
    for (const auto& p : zb) points.push_back({p.time, p.value, kParticipant});
    std::stable_sort(points.begin(), points.end(),
                     [](const StreamPoint& x, const StreamPoint& y) { return x.time < y.time; });

    StreamConfig sc;
    sc.feature = f;
    sc.t0 = prep.grid->t0();
    sc.step = prep.grid->step();
    sc.window_seconds = cfg.window_seconds;
    sc.k = cfg.preprocess.k;
    sc.delta = cfg.entrainment.synchrony.delta;
    sc.significance = cfg.entrainment.significance;
    sc.speaker_a = kTutor;
    sc.speaker_b = kParticipant;
    StreamingEntrainment engine(sc);
    for (const auto& p : points) {
      for (auto& m : engine.update(p)) events.push_back({f, std::move(m)});
    }
    for (auto& m : engine.flush(prep.grid->t_end())) events.push_back({f, std::move(m)});
  }
  std::stable_sort(events.begin(), events.end(), [](const StreamEvent& x, const StreamEvent& y) {
    return x.metrics.grid_index < y.metrics.grid_index;
  });
  return events;
}

void write_stream_events(std::ostream& out, const std::vector<StreamEvent>& events) {
  for (const auto& e : events) {
    Json j;
    j["t"] = e.metrics.t;
    j["feature"] = to_string(e.feature);
    const auto& c = e.metrics.convergence;
    const auto& s = e.metrics.synchrony;
    j["window_convergence_r"] = c ? number(c->r) : Json(nullptr);
    j["window_convergence_p"] = c ? number(c->p_value) : Json(nullptr);
    j["window_synchrony_r"] = s ? number(s->r) : Json(nullptr);
    j["window_synchrony_p"] = s ? number(s->p_value) : Json(nullptr);
    out << j.dump() << '\n';
  }
}

}  // namespace entrain
