// Copyright 2026 The vcguard Authors
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

#include "support.hpp"
#include "vcguard/audio_io.hpp"

#include <doctest.h>

#include <cstring>
#include <vector>

using namespace vcguard;

namespace {

// Minimal RIFF writer used as an independent oracle for the reader.
std::string riff(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                 const std::string& data) {
  std::string s;
  auto u32 = [&](std::uint32_t v) { s.append(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { s.append(reinterpret_cast<const char*>(&v), 2); };
  s += "RIFF";
  u32(static_cast<std::uint32_t>(36 + data.size()));
  s += "WAVEfmt ";
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  s += "data";
  u32(static_cast<std::uint32_t>(data.size()));
  s += data;
  return s;
}

void dump(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

}  // namespace

TEST_CASE("float32 round trip preserves length and values") {
  test::TempDir dir("audio_rt");
  AudioClip clip{test::random_signal(1, 1600), 16000, "x"};
  const auto path = dir.path() / "clip.wav";
  write_wav(clip, path);
  const std::string bytes = test::slurp(path);
  const auto pos = bytes.find("data");
  REQUIRE(pos != std::string::npos);
  std::uint32_t data_size = 0;
  std::memcpy(&data_size, bytes.data() + pos + 4, 4);
  CHECK(data_size == 1600 * 4);

  const AudioClip back = read_wav(path);
  CHECK(back.id == "clip");
  CHECK(back.sample_rate_hz == 16000);
  REQUIRE(back.size() == 1600);
  for (Index i = 0; i < 1600; ++i) CHECK(back.samples[i] == static_cast<Real>(static_cast<float>(clip.samples[i])));
}

TEST_CASE("samples outside the unit range are written unchanged") {
  test::TempDir dir("audio_range");
  Vector v(4);
  v << 1.5, -2.25, 0.0, 3.0;
  write_wav({v, 8000, "loud"}, dir.path() / "loud.wav");
  const AudioClip back = read_wav(dir.path() / "loud.wav");
  CHECK(back.samples == v);
}

TEST_CASE("zero-length clip cannot be written") {
  test::TempDir dir("audio_empty");
  CHECK_THROWS_AS(write_wav({Vector(), 16000, "e"}, dir.path() / "e.wav"), Error);
}

TEST_CASE("pcm16 stereo input is scaled by 1/32768 and averaged per frame") {
  test::TempDir dir("audio_pcm");
  const std::int16_t frames[] = {32767, -32768, 16384, 0, -100, 300};
  const std::string data(reinterpret_cast<const char*>(frames), sizeof(frames));
  dump(dir.path() / "st.wav", riff(1, 2, 22050, 16, data));
  const AudioClip c = read_wav(dir.path() / "st.wav");
  CHECK(c.sample_rate_hz == 22050);
  REQUIRE(c.size() == 3);
  CHECK(c.samples[0] == doctest::Approx((32767.0 / 32768.0 - 1.0) / 2).epsilon(1e-15));
  CHECK(c.samples[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.samples[2] == doctest::Approx((-100.0 + 300.0) / 32768.0 / 2).epsilon(1e-15));
}

TEST_CASE("pcm16 writer rounds and saturates") {
  test::TempDir dir("audio_pcm_w");
  Vector v(3);
  v << 0.5, 2.0, -2.0;
  write_wav({v, 16000, "p"}, dir.path() / "p.wav", WavEncoding::Pcm16);
  const AudioClip c = read_wav(dir.path() / "p.wav");
  CHECK(c.samples[0] == 0.5);
  CHECK(c.samples[1] == 32767.0 / 32768.0);
  CHECK(c.samples[2] == -1.0);
}

TEST_CASE("malformed and unsupported files are rejected") {
  test::TempDir dir("audio_bad");
  dump(dir.path() / "junk.wav", "not a wave file at all, definitely not");
  CHECK_THROWS_AS(read_wav(dir.path() / "junk.wav"), Error);
  dump(dir.path() / "trunc.wav", riff(1, 1, 16000, 16, std::string(10, '\0')).substr(0, 30));
  CHECK_THROWS_AS(read_wav(dir.path() / "trunc.wav"), Error);
  dump(dir.path() / "alaw.wav", riff(6, 1, 8000, 8, std::string(8, '\x55')));
  CHECK_THROWS_AS(read_wav(dir.path() / "alaw.wav"), Error);
  dump(dir.path() / "empty.wav", riff(1, 1, 16000, 16, ""));
  CHECK_THROWS_AS(read_wav(dir.path() / "empty.wav"), Error);
  CHECK_THROWS_AS(read_wav(dir.path() / "missing.wav"), Error);
}

TEST_CASE("clip validation") {
  AudioClip c{Vector::Zero(4), 16000, "z"};
  CHECK_NOTHROW(c.validate());
  c.samples[2] = std::numeric_limits<Real>::quiet_NaN();
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS((AudioClip{Vector::Zero(4), 0, "r"}.validate()), Error);
}
