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

#include "entrain/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "entrain/csv.hpp"
#include "entrain/error.hpp"

namespace entrain {

namespace {

std::size_t frames_for(double seconds, double hop) {
  const double n = std::ceil(seconds / hop - 1e-9);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

}  // namespace

void VadConfig::validate() const {
  if (!(close_threshold_db <= open_threshold_db)) {
    throw Error(ErrorCode::kInvalidConfig, "close threshold must not exceed open threshold");
  }
  if (min_speech < 0.0 || min_gap < 0.0 || min_utterance < 0.0 || merge_gap < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "VAD durations must be non-negative");
  }
}

std::vector<UtteranceSegment> detect_utterances(const FrameTrack& intensity, const VadConfig& vad,
                                                const std::string& speaker) {
  vad.validate();
  std::vector<UtteranceSegment> raw;
  const std::size_t n = intensity.size();
  if (n == 0) return raw;

  const double hop = intensity.hop;
  const std::size_t open_frames = frames_for(vad.min_speech, hop);
  const std::size_t close_frames = frames_for(vad.min_gap, hop);

  bool open = false;
  std::size_t run_start = 0;
  std::size_t run_length = 0;  // frames above open (closed) or below close (open)
  std::size_t last_speech = 0;
  double seg_start = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double db = intensity.values[i];
    if (!open) {
      if (db > vad.open_threshold_db) {
        if (run_length == 0) run_start = i;
        if (++run_length >= open_frames) {
          open = true;
          seg_start = intensity.times[run_start] - hop / 2.0;
          last_speech = i;
          run_length = 0;
        }
      } else {
        run_length = 0;
      }
    } else if (db >= vad.close_threshold_db) {
      last_speech = i;
      run_length = 0;
    } else if (++run_length >= close_frames) {
      raw.push_back({speaker, seg_start, intensity.times[last_speech] + hop / 2.0});
      open = false;
      run_length = 0;
    }
  }
  if (open) raw.push_back({speaker, seg_start, intensity.times[last_speech] + hop / 2.0});

  std::vector<UtteranceSegment> merged;
  for (const auto& seg : raw) {
    if (!merged.empty() && seg.start_time - merged.back().end_time < vad.merge_gap) {
      merged.back().end_time = seg.end_time;
    } else {
      merged.push_back(seg);
    }
  }
  std::erase_if(merged, [&](const UtteranceSegment& s) {
    return s.end_time - s.start_time < vad.min_utterance;
  });
  return merged;
}

void write_segments_csv(std::ostream& out, const std::vector<UtteranceSegment>& segments) {
  out << "speaker,start_s,end_s\n";
  for (const auto& s : segments) {
    out << s.speaker << ',' << csv::format_number(s.start_time) << ','
        << csv::format_number(s.end_time) << '\n';
  }
}

void write_segments_csv(const std::filesystem::path& path,
                        const std::vector<UtteranceSegment>& segments) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_segments_csv(out, segments);
}

std::vector<UtteranceSegment> read_segments_csv(std::istream& in) {
  csv::expect_header(in, {"speaker", "start_s", "end_s"});
  std::vector<UtteranceSegment> segments;
  std::string line;
  while (csv::next_line(in, line)) {
    const auto fields = csv::split_line(line);
    if (fields.size() != 3) throw Error(ErrorCode::kParseError, "expected 3 fields: " + line);
    UtteranceSegment seg{fields[0], csv::parse_number(fields[1], "start_s"),
                         csv::parse_number(fields[2], "end_s")};
    if (!(seg.start_time < seg.end_time)) {
      throw Error(ErrorCode::kParseError, "segment must satisfy start < end: " + line);
    }
    segments.push_back(std::move(seg));
  }
  std::stable_sort(segments.begin(), segments.end(), [](const auto& a, const auto& b) {
    if (a.speaker != b.speaker) return a.speaker < b.speaker;
    return a.start_time < b.start_time;
  });
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const auto& prev = segments[i - 1];
    const auto& cur = segments[i];
    if (prev.speaker == cur.speaker && cur.start_time < prev.end_time) {
      throw Error(ErrorCode::kParseError, "overlapping segments for speaker " + cur.speaker);
    }
  }
  return segments;
}

std::vector<UtteranceSegment> read_segments_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_segments_csv(in);
}

}  // namespace entrain
