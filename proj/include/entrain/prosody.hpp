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

#ifndef ENTRAIN_PROSODY_HPP_
#define ENTRAIN_PROSODY_HPP_

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <vector>

#include "entrain/audio_io.hpp"

namespace entrain {

/// Frame analysis settings. Defaults follow common Praat practice.
struct FrameConfig {
  double frame_length = 0.040;  // s
  double hop = 0.010;           // s
  double pitch_floor = 75.0;    // Hz
  double pitch_ceiling = 600.0; // Hz
  double voicing_threshold = 0.45;
  double silence_floor_db = -50.0;
  int median_window = 5;  // frames, odd; 1 disables smoothing

  /// Throws Error(kInvalidConfig) on inconsistent settings for this rate.
  void validate(double sample_rate, bool for_pitch) const;
};

/// Per-frame measurements on a uniform time axis.
///
/// `active` means voiced for a pitch track and non-silent for an intensity
/// track. Pitch values of unvoiced frames are NaN.
struct FrameTrack {
  double hop = 0.0;           // s, exact frame step (hop samples / rate)
  double frame_length = 0.0;  // s
  std::vector<double> times;  // frame centers
  std::vector<double> values;
  std::vector<bool> active;

  std::size_t size() const noexcept { return times.size(); }
};

struct ProsodyTracks {
  FrameTrack pitch;
  FrameTrack intensity;
};

inline constexpr double kIntensityEpsilon = 1e-10;

/// 20*log10(RMS + 1e-10) per frame; frames below the silence floor are
/// marked inactive.
FrameTrack rms_intensity(const AudioBuffer& audio, const FrameConfig& cfg = {});

/// Normalized-autocorrelation pitch tracker with parabolic peak refinement
/// and a median filter over voiced runs.
FrameTrack pitch_autocorrelation(const AudioBuffer& audio, const FrameConfig& cfg = {});

/// Both tracks from a single pass over the frames.
ProsodyTracks analyze_prosody(const AudioBuffer& audio, const FrameConfig& cfg = {});

/// Debug dump: `time_s,value,voiced`.
void write_frame_track_csv(std::ostream& out, const FrameTrack& track);
void write_frame_track_csv(const std::filesystem::path& path, const FrameTrack& track);

}  // namespace entrain

#endif  // ENTRAIN_PROSODY_HPP_
