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

#include "entrain/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "entrain/error.hpp"

namespace entrain {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
constexpr double kMinSampleRate = 8000.0;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

float clamp_unit(float v) {
  if (std::isnan(v)) return 0.0f;
  return std::clamp(v, -1.0f, 1.0f);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk parse_format(const unsigned char* p, std::uint32_t size) {
  if (size < 16) throw Error(ErrorCode::kMalformedHeader, "fmt chunk shorter than 16 bytes");
  FormatChunk fmt;
  fmt.format = read_u16(p);
  fmt.channels = read_u16(p + 2);
  fmt.sample_rate = read_u32(p + 4);
  fmt.block_align = read_u16(p + 12);
  fmt.bits = read_u16(p + 14);
  if (fmt.format == kFormatExtensible) {
    if (size < 40) throw Error(ErrorCode::kMalformedHeader, "truncated WAVE_FORMAT_EXTENSIBLE");
    // The sub-format GUID starts with the plain format tag.
    fmt.format = read_u16(p + 24);
  }
  return fmt;
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<float> samples, double sample_rate,
                         int channel_count_original)
    : samples_(std::move(samples)),
      sample_rate_(sample_rate),
      channel_count_original_(channel_count_original) {
  if (!(sample_rate_ > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "sample rate must be positive");
  }
  for (float& s : samples_) s = clamp_unit(s);
}

AudioBuffer decode_wav(std::span<const unsigned char> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kMalformedHeader, "missing RIFF/WAVE signature");
  }

  std::optional<FormatChunk> fmt;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size > available) throw Error(ErrorCode::kMalformedHeader, "truncated fmt chunk");
      fmt = parse_format(chunk + 8, size);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Streaming writers leave the size unset; take what is there.
      data_size = std::min<std::size_t>(size, available);
      break;
    }
    pos = body + size + (size & 1u);
  }

  if (!fmt) throw Error(ErrorCode::kMalformedHeader, "no fmt chunk");
  if (data == nullptr) throw Error(ErrorCode::kMalformedHeader, "no data chunk");
  if (fmt->channels == 0) throw Error(ErrorCode::kMalformedHeader, "zero channels");

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool f32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !f32) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "format tag " + std::to_string(fmt->format) + " with " +
                    std::to_string(fmt->bits) + " bits per sample");
  }
  if (fmt->sample_rate < kMinSampleRate) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "sample rate " + std::to_string(fmt->sample_rate) + " Hz is below 8000 Hz");
  }

  const std::size_t bytes_per_sample = fmt->bits / 8;
  const std::size_t channels = fmt->channels;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw Error(ErrorCode::kEmptyAudio, "data chunk holds no samples");

  std::vector<float> mono(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const unsigned char* frame = data + f * frame_bytes;
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* s = frame + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<double>(static_cast<std::int16_t>(read_u16(s))) / 32768.0;
      } else {
        const std::uint32_t bits = read_u32(s);
        float v;
        std::memcpy(&v, &bits, sizeof v);
        acc += static_cast<double>(clamp_unit(v));
      }
    }
    mono[f] = static_cast<float>(acc / static_cast<double>(channels));
  }
  return AudioBuffer(std::move(mono), static_cast<double>(fmt->sample_rate),
                     static_cast<int>(channels));
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

std::vector<unsigned char> encode_wav(std::span<const float> samples, int sample_rate,
                                      WavEncoding encoding, int channels) {
  if (channels < 1 || samples.size() % static_cast<std::size_t>(channels) != 0) {
    throw Error(ErrorCode::kInvalidConfig, "sample count is not a multiple of channel count");
  }
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const auto data_size = static_cast<std::uint32_t>(samples.size() * (bits / 8));

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);

  for (float s : samples) {
    if (encoding == WavEncoding::kPcm16) {
      const double scaled = std::nearbyint(static_cast<double>(clamp_unit(s)) * 32768.0);
      const auto code = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      put_u16(out, static_cast<std::uint16_t>(code));
    } else {
      std::uint32_t bits32;
      const float v = s;
      std::memcpy(&bits32, &v, sizeof bits32);
      put_u32(out, bits32);
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const float> samples,
               int sample_rate, WavEncoding encoding, int channels) {
  const auto bytes = encode_wav(samples, sample_rate, encoding, channels);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace entrain
