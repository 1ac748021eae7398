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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "entrain/audio_io.hpp"
#include "entrain/error.hpp"
#include "support/fixtures.hpp"

namespace entrain {
namespace {

using Bytes = std::vector<unsigned char>;

void put16(Bytes& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back(v >> 8);
}
void put32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xff);
}
void tag(Bytes& b, const char* t) { b.insert(b.end(), t, t + 4); }

// Hand-built RIFF image, independent of the library encoder.
Bytes wav_image(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                std::uint16_t bits, const Bytes& payload) {
  Bytes b;
  tag(b, "RIFF");
  put32(b, static_cast<std::uint32_t>(4 + 8 + 16 + 8 + payload.size()));
  tag(b, "WAVE");
  tag(b, "fmt ");
  put32(b, 16);
  put16(b, format);
  put16(b, channels);
  put32(b, rate);
  put32(b, rate * channels * bits / 8);
  put16(b, static_cast<std::uint16_t>(channels * bits / 8));
  put16(b, bits);
  tag(b, "data");
  put32(b, static_cast<std::uint32_t>(payload.size()));
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

Bytes pcm16(const std::vector<std::int16_t>& v) {
  Bytes b;
  for (auto s : v) put16(b, static_cast<std::uint16_t>(s));
  return b;
}

Bytes f32(const std::vector<float>& v) {
  Bytes b;
  for (float s : v) {
    std::uint32_t u;
    std::memcpy(&u, &s, 4);
    put32(b, u);
  }
  return b;
}

ErrorCode code_of(const Bytes& image) {
  try {
    decode_wav(image);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode did not throw";
  return ErrorCode::kIoError;
}

TEST(Wav, Pcm16FullScaleNormalization) {
  const auto buf = decode_wav(wav_image(1, 1, 16000, 16, pcm16({32767, -32768, 0})));
  ASSERT_EQ(buf.size(), 3u);
  EXPECT_FLOAT_EQ(buf.samples()[0], 32767.0f / 32768.0f);
  EXPECT_FLOAT_EQ(buf.samples()[1], -1.0f);
  EXPECT_EQ(buf.samples()[2], 0.0f);
  EXPECT_EQ(buf.sample_rate(), 16000.0);
}

TEST(Wav, StereoMixdownAveragesChannels) {
  const auto buf = decode_wav(wav_image(3, 2, 16000, 32, f32({0.5f, -0.5f, 0.25f, 0.75f})));
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(buf.samples()[0], 0.0f);
  EXPECT_EQ(buf.samples()[1], 0.5f);
  EXPECT_EQ(buf.channel_count_original(), 2);
}

TEST(Wav, IdenticalChannelsMixToTheSameSignal) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-32768, 32767);
  for (std::uint16_t channels : {1, 2, 3, 5, 8}) {
    std::vector<std::int16_t> mono(257), inter;
    for (auto& s : mono) s = static_cast<std::int16_t>(d(rng));
    for (auto s : mono) inter.insert(inter.end(), channels, s);
    const auto buf = decode_wav(wav_image(1, channels, 22050, 16, pcm16(inter)));
    ASSERT_EQ(buf.size(), mono.size());
    for (std::size_t i = 0; i < mono.size(); ++i) {
      ASSERT_EQ(buf.samples()[i], static_cast<float>(mono[i] / 32768.0)) << channels;
    }
  }
}

TEST(Wav, JunkMagicIsMalformed) {
  auto img = wav_image(1, 1, 16000, 16, pcm16({1, 2, 3}));
  std::memcpy(img.data(), "JUNK", 4);
  EXPECT_EQ(code_of(img), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of(Bytes{'R', 'I', 'F'}), ErrorCode::kMalformedHeader);
}

TEST(Wav, UnsupportedEncodings) {
  EXPECT_EQ(code_of(wav_image(1, 1, 16000, 24, Bytes(9, 0))), ErrorCode::kUnsupportedEncoding);
  EXPECT_EQ(code_of(wav_image(1, 1, 16000, 8, Bytes(4, 0))), ErrorCode::kUnsupportedEncoding);
  EXPECT_EQ(code_of(wav_image(3, 1, 16000, 64, Bytes(16, 0))), ErrorCode::kUnsupportedEncoding);
  EXPECT_EQ(code_of(wav_image(6, 1, 16000, 8, Bytes(4, 0))), ErrorCode::kUnsupportedEncoding);  // A-law
  EXPECT_EQ(code_of(wav_image(1, 1, 4000, 16, pcm16({1, 2}))), ErrorCode::kUnsupportedEncoding);
}

TEST(Wav, EmptyDataIsEmptyAudio) {
  EXPECT_EQ(code_of(wav_image(1, 1, 16000, 16, {})), ErrorCode::kEmptyAudio);
}

TEST(Wav, SkipsUnknownChunks) {
  auto img = wav_image(1, 1, 16000, 16, pcm16({100, 200}));
  Bytes extra;
  tag(extra, "LIST");
  put32(extra, 3);
  extra.insert(extra.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
  img.insert(img.begin() + 12, extra.begin(), extra.end());
  const auto buf = decode_wav(img);
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(buf.samples()[1], 200.0f / 32768.0f);
}

TEST(Wav, MissingFileIsIoError) {
  try {
    load_wav("/nonexistent/entrain/file.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(Wav, Pcm16RoundTripWithinOneLsb) {
  testing::TempDir dir;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> x(4001);
  for (auto& v : x) v = u(rng);
  x[0] = 1.0f;
  x[1] = -1.0f;
  write_wav(dir / "a.wav", x, 16000);
  const auto back = load_wav(dir / "a.wav");
  ASSERT_EQ(back.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_LE(std::abs(back.samples()[i] - x[i]), 1.0 / 32768.0) << i;
  }
}

TEST(Wav, Float32RoundTripIsExact) {
  std::vector<float> x{0.0f, 0.1f, -0.7f, 1.0f, -1.0f, 1e-8f};
  const auto back = decode_wav(encode_wav(x, 48000, WavEncoding::kFloat32));
  ASSERT_EQ(back.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(back.samples()[i], x[i]);
  EXPECT_EQ(back.sample_rate(), 48000.0);
}

TEST(Wav, EncoderMatchesHandBuiltImage) {
  const std::vector<float> x{0.5f, -0.25f};
  EXPECT_EQ(encode_wav(x, 16000), wav_image(1, 1, 16000, 16, pcm16({16384, -8192})));
}

TEST(AudioBuffer, ClampsOutOfRangeSamples) {
  const AudioBuffer buf({2.0f, -3.0f, 0.5f, std::nanf("")}, 8000);
  EXPECT_EQ(buf.samples()[0], 1.0f);
  EXPECT_EQ(buf.samples()[1], -1.0f);
  EXPECT_EQ(buf.samples()[2], 0.5f);
  EXPECT_EQ(buf.samples()[3], 0.0f);
  EXPECT_THROW(AudioBuffer({0.0f}, 0.0), Error);
}

}  // namespace
}  // namespace entrain
