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

#include "entrain/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "entrain/audio_io.hpp"
#include "entrain/error.hpp"

namespace entrain::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEdge = 0.010;  // s

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

// Unit-RMS waveform of one utterance.
std::vector<double> utterance_wave(const SynthUtterance& u, int rate, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(std::lround(u.duration * rate));
  std::vector<double> w(n, 0.0);
  if (u.voiced) {
    const double nyquist_guard = std::min(0.45 * rate, 4000.0);
    const int harmonics = std::max(1, static_cast<int>(nyquist_guard / (u.f0 * (1.0 + std::max(0.0, u.glide)))));
    double phase = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(n);
      const double f = u.f0 * (1.0 + u.glide * frac);
      double s = 0.0;
      for (int h = 1; h <= harmonics; ++h) s += std::sin(h * phase) / h;
      w[i] = s;
      phase = std::fmod(phase + kTwoPi * f / rate, kTwoPi);
    }
  } else {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : w) v = gauss(rng);
  }
  double energy = 0.0;
  for (double v : w) energy += v * v;
  const double rms = std::sqrt(energy / std::max<std::size_t>(n, 1));
  if (rms > 0.0) {
    for (auto& v : w) v /= rms;
  }
  const auto edge = std::min(n / 2, static_cast<std::size_t>(kEdge * rate));
  for (std::size_t i = 0; i < edge; ++i) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / edge);
    w[i] *= g;
    w[n - 1 - i] *= g;
  }
  return w;
}

}  // namespace

std::vector<float> sine(double freq, double amplitude, double seconds, int sample_rate) {
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate));
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(amplitude * std::sin(kTwoPi * freq * static_cast<double>(i) / sample_rate));
  }
  return out;
}

std::vector<float> render(const std::vector<SynthUtterance>& utterances, double total_seconds,
                          int sample_rate, std::uint64_t seed, double noise_db) {
  if (sample_rate <= 0 || !(total_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "render needs a positive rate and duration");
  }
  const auto n = static_cast<std::size_t>(std::lround(total_seconds * sample_rate));
  std::vector<double> mix(n, 0.0);
  std::mt19937_64 rng(seed);
  for (const auto& u : utterances) {
    const auto wave = utterance_wave(u, sample_rate, rng);
    const double gain = db_to_amplitude(u.level_db);
    const auto offset = static_cast<std::size_t>(std::lround(u.start * sample_rate));
    for (std::size_t i = 0; i < wave.size() && offset + i < n; ++i) mix[offset + i] += gain * wave[i];
  }
  if (noise_db < 0.0) {
    std::normal_distribution<double> gauss(0.0, db_to_amplitude(noise_db));
    for (auto& v : mix) v += gauss(rng);
  }
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(std::clamp(mix[i], -1.0, 1.0));
  return out;
}

Dialogue dialogue(const DialogueSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  if (!(spec.turn_min > 0.0 && spec.turn_min <= spec.turn_max && spec.gap_min > 0.0 &&
        spec.gap_min <= spec.gap_max)) {
    throw Error(ErrorCode::kInvalidConfig, "dialogue turn and gap ranges must be positive and ordered");
  }
  std::uniform_real_distribution<double> turn_length(spec.turn_min, spec.turn_max);
  std::uniform_real_distribution<double> gap(spec.gap_min, spec.gap_max);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto latent = [&] { return std::clamp(gauss(rng), -2.5, 2.5); };

  Dialogue d;
  double t = 0.5;
  while (true) {
    const double tutor_len = turn_length(rng);
    const double pause_a = gap(rng);
    const double participant_len = turn_length(rng);
    const double pause_b = gap(rng);
    if (t + tutor_len + pause_a + participant_len + 0.5 > spec.duration) break;

    const double pitch_a = latent();
    const double level_a = latent();
    const double glide_a = 0.02 + 0.01 * latent();

    const double t_b = t + tutor_len + pause_a;
    const double w = spec.coupling_start +
                     (spec.coupling_end - spec.coupling_start) * std::clamp(t_b / spec.duration, 0.0, 1.0);
    // convex imitation: at w = 1 the participant repeats the tutor exactly
    const double own = 1.0 - w;
    const double pitch_b = w * pitch_a + own * latent();
    const double level_b = w * level_a + own * latent();
    const double glide_b = 0.02 + 0.01 * latent();

    d.tutor_turns.push_back({t, tutor_len, spec.tutor_f0 * std::exp2(2.0 * pitch_a / 12.0), glide_a,
                             -18.0 + 3.0 * level_a, spec.voiced});
    d.participant_turns.push_back({t_b, participant_len,
                                   spec.participant_f0 * std::exp2(2.0 * pitch_b / 12.0), glide_b,
                                   -18.0 + 3.0 * level_b, spec.voiced});
    t = t_b + participant_len + pause_b;
  }
  d.tutor = render(d.tutor_turns, spec.duration, spec.sample_rate, spec.seed * 2 + 1, -80.0);
  d.participant = render(d.participant_turns, spec.duration, spec.sample_rate, spec.seed * 2 + 2, -80.0);
  return d;
}

void write_dialogue(const Dialogue& d, int sample_rate, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_wav(dir / "tutor.wav", d.tutor, sample_rate);
  write_wav(dir / "participant.wav", d.participant, sample_rate);
}

}  // namespace entrain::synth
