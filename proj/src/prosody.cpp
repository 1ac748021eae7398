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

#include "entrain/prosody.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "entrain/csv.hpp"
#include "entrain/error.hpp"
#include "entrain/simd/kernels.hpp"

namespace entrain {

namespace {

// A later autocorrelation peak must beat the earliest candidate by more than
// this factor to be preferred; keeps sub-harmonic lags from winning on ties.
constexpr double kOctaveTolerance = 0.95;

struct FrameLayout {
  std::size_t frame = 0;  // samples per frame
  std::size_t hop = 0;    // samples per hop
  std::size_t count = 0;
  double rate = 0.0;

  double time(std::size_t i) const {
    return (static_cast<double>(i * hop) + 0.5 * static_cast<double>(frame)) / rate;
  }
};

FrameLayout layout_for(const AudioBuffer& audio, const FrameConfig& cfg) {
  FrameLayout l;
  l.rate = audio.sample_rate();
  l.frame = static_cast<std::size_t>(std::lround(cfg.frame_length * l.rate));
  l.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.hop * l.rate)));
  if (l.frame < 2) throw Error(ErrorCode::kInvalidConfig, "frame shorter than two samples");
  if (audio.size() < l.frame) {
    throw Error(ErrorCode::kAudioTooShort,
                "audio of " + std::to_string(audio.duration()) + " s is shorter than one frame");
  }
  l.count = 1 + (audio.size() - l.frame) / l.hop;
  return l;
}

FrameTrack empty_track(const FrameLayout& l) {
  FrameTrack t;
  t.hop = static_cast<double>(l.hop) / l.rate;
  t.frame_length = static_cast<double>(l.frame) / l.rate;
  t.times.resize(l.count);
  t.values.resize(l.count);
  t.active.resize(l.count);
  for (std::size_t i = 0; i < l.count; ++i) t.times[i] = l.time(i);
  return t;
}

double intensity_db(std::span<const float> frame) {
  const double ms = simd::sum_squares(frame) / static_cast<double>(frame.size());
  return 20.0 * std::log10(std::sqrt(ms) + kIntensityEpsilon);
}

/// Autocorrelation-based pitch estimate for one frame.
class PitchEstimator {
 public:
  PitchEstimator(const FrameConfig& cfg, const FrameLayout& layout)
      : cfg_(cfg),
        rate_(layout.rate),
        min_lag_(static_cast<std::size_t>(std::floor(layout.rate / cfg.pitch_ceiling))),
        max_lag_(static_cast<std::size_t>(std::ceil(layout.rate / cfg.pitch_floor))),
        centered_(layout.frame),
        energy_(layout.frame + 1),
        corr_(max_lag_ + 2) {
    if (min_lag_ < 2 || max_lag_ + 2 >= layout.frame) {
      throw Error(ErrorCode::kInvalidConfig, "lag range does not fit the analysis frame");
    }
  }

  /// Returns f0 in Hz or NaN when the frame is unvoiced.
  double estimate(std::span<const float> frame) {
    const std::size_t n = frame.size();
    const double mean = simd::sum(frame) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      centered_[i] = static_cast<float>(static_cast<double>(frame[i]) - mean);
    }
    energy_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = centered_[i];
      energy_[i + 1] = energy_[i] + v * v;
    }
    if (energy_[n] <= 0.0) return std::numeric_limits<double>::quiet_NaN();

    const float* x = centered_.data();
    for (std::size_t lag = min_lag_ - 1; lag <= max_lag_ + 1; ++lag) {
      const std::size_t overlap = n - lag;
      const double head = energy_[overlap];
      const double tail = energy_[n] - energy_[lag];
      const double denom = std::sqrt(head * tail);
      corr_[lag] = denom > 0.0 ? simd::kernels().dot(x, x + lag, overlap) / denom : 0.0;
    }

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t lag = min_lag_; lag <= max_lag_; ++lag) {
      if (is_peak(lag)) best = std::max(best, corr_[lag]);
    }
    if (!(best >= cfg_.voicing_threshold)) return std::numeric_limits<double>::quiet_NaN();

    for (std::size_t lag = min_lag_; lag <= max_lag_; ++lag) {
      if (!is_peak(lag) || corr_[lag] < kOctaveTolerance * best) continue;
      const double left = corr_[lag - 1];
      const double mid = corr_[lag];
      const double right = corr_[lag + 1];
      const double curvature = left - 2.0 * mid + right;
      double offset = 0.0;
      if (curvature < 0.0) offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
      const double height = mid - 0.25 * (left - right) * offset;
      if (height < cfg_.voicing_threshold) return std::numeric_limits<double>::quiet_NaN();
      const double f0 = rate_ / (static_cast<double>(lag) + offset);
      if (f0 < cfg_.pitch_floor || f0 > cfg_.pitch_ceiling) {
        return std::numeric_limits<double>::quiet_NaN();
      }
      return f0;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

 private:
  bool is_peak(std::size_t lag) const {
    return corr_[lag] > corr_[lag - 1] && corr_[lag] >= corr_[lag + 1];
  }

  const FrameConfig& cfg_;
  double rate_;
  std::size_t min_lag_;
  std::size_t max_lag_;
  std::vector<float> centered_;
  std::vector<double> energy_;
  std::vector<double> corr_;
};

/// Median over a centered window, restricted to the current voiced run.
void median_smooth(FrameTrack& pitch, int window) {
  if (window <= 1) return;
  const std::size_t half = static_cast<std::size_t>(window / 2);
  const std::size_t n = pitch.size();
  std::vector<double> smoothed = pitch.values;
  std::vector<double> buf;
  std::size_t run_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!pitch.active[i]) continue;
    if (i == 0 || !pitch.active[i - 1]) run_start = i;
    std::size_t run_end = i;
    while (run_end + 1 < n && pitch.active[run_end + 1] && run_end + 1 <= i + half) ++run_end;
    const std::size_t lo = std::max(run_start, i >= half ? i - half : 0);
    buf.assign(pitch.values.begin() + static_cast<std::ptrdiff_t>(lo),
               pitch.values.begin() + static_cast<std::ptrdiff_t>(run_end + 1));
    std::sort(buf.begin(), buf.end());
    const std::size_t m = buf.size();
    smoothed[i] = (m % 2 == 1) ? buf[m / 2] : 0.5 * (buf[m / 2 - 1] + buf[m / 2]);
  }
  pitch.values = std::move(smoothed);
}

}  // namespace

void FrameConfig::validate(double sample_rate, bool for_pitch) const {
  if (!(hop > 0.0) || !(hop <= frame_length)) {
    throw Error(ErrorCode::kInvalidConfig, "need 0 < hop <= frame_length");
  }
  if (!for_pitch) return;
  if (!(pitch_floor > 0.0) || !(pitch_floor < pitch_ceiling) ||
      !(pitch_ceiling <= sample_rate / 2.0)) {
    throw Error(ErrorCode::kInvalidConfig, "need 0 < pitch_floor < pitch_ceiling <= rate/2");
  }
  if (!(voicing_threshold > 0.0 && voicing_threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "voicing_threshold must lie in (0, 1)");
  }
  if (frame_length < 3.0 / pitch_floor - 1e-9) {
    throw Error(ErrorCode::kInvalidConfig,
                "frame_length must cover three periods of pitch_floor");
  }
  if (median_window < 1 || median_window % 2 == 0) {
    throw Error(ErrorCode::kInvalidConfig, "median_window must be a positive odd count");
  }
}

FrameTrack rms_intensity(const AudioBuffer& audio, const FrameConfig& cfg) {
  cfg.validate(audio.sample_rate(), false);
  const FrameLayout l = layout_for(audio, cfg);
  FrameTrack track = empty_track(l);
  const auto samples = audio.samples();
  for (std::size_t i = 0; i < l.count; ++i) {
    const double db = intensity_db(samples.subspan(i * l.hop, l.frame));
    track.values[i] = db;
    track.active[i] = db >= cfg.silence_floor_db;
  }
  return track;
}

ProsodyTracks analyze_prosody(const AudioBuffer& audio, const FrameConfig& cfg) {
  cfg.validate(audio.sample_rate(), true);
  const FrameLayout l = layout_for(audio, cfg);
  ProsodyTracks out{empty_track(l), empty_track(l)};
  PitchEstimator estimator(cfg, l);
  const auto samples = audio.samples();
  for (std::size_t i = 0; i < l.count; ++i) {
    const auto frame = samples.subspan(i * l.hop, l.frame);
    const double db = intensity_db(frame);
    const bool audible = db >= cfg.silence_floor_db;
    out.intensity.values[i] = db;
    out.intensity.active[i] = audible;
    const double f0 = audible ? estimator.estimate(frame) : std::numeric_limits<double>::quiet_NaN();
    out.pitch.values[i] = f0;
    out.pitch.active[i] = !std::isnan(f0);
  }
  median_smooth(out.pitch, cfg.median_window);
  return out;
}

FrameTrack pitch_autocorrelation(const AudioBuffer& audio, const FrameConfig& cfg) {
  return analyze_prosody(audio, cfg).pitch;
}

void write_frame_track_csv(std::ostream& out, const FrameTrack& track) {
  out << "time_s,value,voiced\n";
  for (std::size_t i = 0; i < track.size(); ++i) {
    out << csv::format_number(track.times[i]) << ','
        << (std::isnan(track.values[i]) ? std::string() : csv::format_number(track.values[i]))
        << ','
        << (track.active[i] ? 1 : 0) << '\n';
  }
}

void write_frame_track_csv(const std::filesystem::path& path, const FrameTrack& track) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_frame_track_csv(out, track);
}

}  // namespace entrain
