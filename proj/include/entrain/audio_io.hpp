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

#ifndef ENTRAIN_AUDIO_IO_HPP_
#define ENTRAIN_AUDIO_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace entrain {

/// Mono signal of one speaker. Samples are clamped to [-1, 1]; the buffer is
/// never mutated after construction.
class AudioBuffer {
 public:
  AudioBuffer(std::vector<float> samples, double sample_rate, int channel_count_original = 1);

  std::span<const float> samples() const noexcept { return samples_; }
  double sample_rate() const noexcept { return sample_rate_; }
  int channel_count_original() const noexcept { return channel_count_original_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_; }

 private:
  std::vector<float> samples_;
  double sample_rate_;
  int channel_count_original_;
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a RIFF/WAVE file (PCM16 or IEEE float32, any channel count, rate >=
/// 8 kHz). PCM16 is scaled by 1/32768; channels are averaged per frame.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Decodes an in-memory WAV image; same rules as load_wav.
AudioBuffer decode_wav(std::span<const unsigned char> bytes);

/// Writes a mono WAV. PCM16 rounds to the nearest code and saturates at 32767.
void write_wav(const std::filesystem::path& path, std::span<const float> samples,
               int sample_rate, WavEncoding encoding = WavEncoding::kPcm16,
               int channels = 1);

std::vector<unsigned char> encode_wav(std::span<const float> samples, int sample_rate,
                                      WavEncoding encoding = WavEncoding::kPcm16,
                                      int channels = 1);

}  // namespace entrain

#endif  // ENTRAIN_AUDIO_IO_HPP_
