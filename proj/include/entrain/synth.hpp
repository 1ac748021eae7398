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

#ifndef ENTRAIN_SYNTH_HPP_
#define ENTRAIN_SYNTH_HPP_

// Deterministic synthetic speech-like signals for fixtures and demos: tones,
// harmonic "vowels", noise bursts and two-speaker turn-taking dialogues whose
// prosodic coupling is set by construction.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace entrain::synth {

std::vector<float> sine(double freq, double amplitude, double seconds, int sample_rate);

struct SynthUtterance {
  double start = 0.0;       // s
  double duration = 1.0;    // s
  double f0 = 150.0;        // Hz at onset
  double glide = 0.0;       // relative f0 change over the utterance
  double level_db = -12.0;  // RMS dBFS
  bool voiced = true;       // false: white-noise burst
};

/// Mixes utterances into a silent buffer (10 ms raised-cosine edges), plus
/// optional background noise at `noise_db` RMS (skipped when >= 0).
std::vector<float> render(const std::vector<SynthUtterance>& utterances, double total_seconds,
                          int sample_rate, std::uint64_t seed = 0, double noise_db = 1.0);

struct DialogueSpec {
  double duration = 120.0;  // s
  int sample_rate = 16000;
  std::uint64_t seed = 1;
  double tutor_f0 = 120.0;
  double participant_f0 = 210.0;
  /// Weight of the tutor's latent prosody in the participant's at the start
  /// and the end of the session, interpolated linearly. 0 -> 1 converges,
  /// 1 -> 0 diverges, constant 0 is unrelated.
  double coupling_start = 0.0;
  double coupling_end = 0.0;
  // Short, quick turns: each speaker contributes many utterances, so KNN
  // smoothing (k neighbours) still leaves plenty of independent stretches.
  double turn_min = 0.3;  // s, uniform turn length
  double turn_max = 0.8;
  double gap_min = 0.2;   // s, uniform pause between turns
  double gap_max = 0.4;
  bool voiced = true;
};

struct Dialogue {
  std::vector<float> tutor;
  std::vector<float> participant;
  std::vector<SynthUtterance> tutor_turns;
  std::vector<SynthUtterance> participant_turns;
};

/// Alternating turns; each participant turn mixes the latent pitch/level of
/// the preceding tutor turn (weight w, scheduled linearly) with its own draw
/// (weight 1 - w).
Dialogue dialogue(const DialogueSpec& spec);

/// Writes tutor.wav and participant.wav (PCM16) under `dir`.
void write_dialogue(const Dialogue& d, int sample_rate, const std::filesystem::path& dir);

}  // namespace entrain::synth

#endif  // ENTRAIN_SYNTH_HPP_
