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

#ifndef ENTRAIN_SEGMENTATION_HPP_
#define ENTRAIN_SEGMENTATION_HPP_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "entrain/prosody.hpp"

namespace entrain {

struct UtteranceSegment {
  std::string speaker;
  double start_time = 0.0;  // s
  double end_time = 0.0;    // s

  friend bool operator==(const UtteranceSegment&, const UtteranceSegment&) = default;
};

/// Hysteresis thresholds in dB re full scale; durations in seconds.
struct VadConfig {
  double open_threshold_db = -30.0;
  double close_threshold_db = -35.0;
  double min_speech = 0.100;
  double min_gap = 0.250;
  double min_utterance = 0.300;
  double merge_gap = 0.150;

  void validate() const;
};

/// Energy VAD over an intensity track. A segment opens once the level has
/// stayed above the open threshold for min_speech and closes once it has
/// stayed below the close threshold for min_gap. Segments closer than
/// merge_gap are joined, then those shorter than min_utterance dropped.
/// Boundaries sit half a hop outside the first/last speech frame centers.
std::vector<UtteranceSegment> detect_utterances(const FrameTrack& intensity,
                                                const VadConfig& vad = {},
                                                const std::string& speaker = "");

inline double utterance_center(const UtteranceSegment& seg) {
  return (seg.start_time + seg.end_time) / 2.0;
}

/// CSV `speaker,start_s,end_s`.
void write_segments_csv(std::ostream& out, const std::vector<UtteranceSegment>& segments);
void write_segments_csv(const std::filesystem::path& path,
                        const std::vector<UtteranceSegment>& segments);

/// Parses `speaker,start_s,end_s`. Rows are validated (start < end) and each
/// speaker's segments are sorted and checked for overlap.
std::vector<UtteranceSegment> read_segments_csv(std::istream& in);
std::vector<UtteranceSegment> read_segments_csv(const std::filesystem::path& path);

}  // namespace entrain

#endif  // ENTRAIN_SEGMENTATION_HPP_
