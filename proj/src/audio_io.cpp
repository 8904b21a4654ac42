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

#include "vcguard/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace vcguard {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

void AudioClip::validate() const {
  if (samples.size() == 0) throw Error("clip '" + id + "' is empty");
  if (sample_rate_hz <= 0) throw Error("clip '" + id + "' has non-positive sample rate");
  if (!samples.allFinite()) throw Error("clip '" + id + "' contains non-finite samples");
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(where + "malformed header (not RIFF/WAVE)");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) {
      // Some writers leave a bogus length on the trailing data chunk.
      if (std::memcmp(chunk, "data", 4) != 0) throw Error(where + "malformed header (truncated chunk)");
    }
    const std::size_t avail = std::min<std::size_t>(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw Error(where + "malformed header (short fmt chunk)");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw Error(where + "malformed header (short extensible fmt)");
        format = le16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + len + (len & 1);
  }

  if (!have_fmt) throw Error(where + "malformed header (no fmt chunk)");
  if (data == nullptr) throw Error(where + "malformed header (no data chunk)");
  if (channels == 0 || rate == 0) throw Error(where + "malformed header (zero channels or rate)");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw Error(where + "unsupported encoding (format " + std::to_string(format) + ", " +
                std::to_string(bits) + " bits)");
  }

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  const std::size_t n_frames = data_len / frame_bytes;
  if (n_frames == 0) throw Error(where + "empty data chunk");

  AudioClip clip;
  clip.id = path.stem().string();
  clip.sample_rate_hz = static_cast<int>(rate);
  clip.samples.resize(static_cast<Index>(n_frames));
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * (bits / 8);
      if (pcm16) {
        acc += static_cast<std::int16_t>(le16(p)) / 32768.0;
      } else {
        const std::uint32_t u = le32(p);
        float v;
        std::memcpy(&v, &u, sizeof v);
        acc += v;
      }
    }
    clip.samples[static_cast<Index>(i)] = channels == 1 ? acc : acc / channels;
  }
  clip.validate();
  return clip;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path, WavEncoding encoding) {
  clip.validate();
  const bool is_float = encoding == WavEncoding::Float32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint32_t block = bits / 8;
  const std::uint32_t data_len = static_cast<std::uint32_t>(clip.size()) * block;

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  put_tag(out, "RIFF");
  put32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, is_float ? kFormatFloat : kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * block);
  put16(out, static_cast<std::uint16_t>(block));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_len);
  for (Index i = 0; i < clip.size(); ++i) {
    if (is_float) {
      const float v = static_cast<float>(clip.samples[i]);
      std::uint32_t u;
      std::memcpy(&u, &v, sizeof u);
      put32(out, u);
    } else {
      const double scaled = std::round(clip.samples[i] * 32768.0);
      const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      put16(out, static_cast<std::uint16_t>(q));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("write failed for " + path.string());
}

}  // namespace vcguard
