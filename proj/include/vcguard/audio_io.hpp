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

#ifndef VCGUARD_AUDIO_IO_HPP
#define VCGUARD_AUDIO_IO_HPP

#include "vcguard/common.hpp"

#include <filesystem>
#include <string>

namespace vcguard {

// Mono waveform, nominal range [-1, 1].
struct AudioClip {
  Vector samples;
  int sample_rate_hz = 0;
  std::string id;

  Index size() const { return samples.size(); }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
  // Non-empty, positive rate, finite samples.
  void validate() const;
};

enum class WavEncoding { Pcm16, Float32 };

// RIFF/WAVE with format code 1 (16-bit) or 3 (32-bit float). Channels are
// averaged per frame. The clip id is the file stem.
AudioClip read_wav(const std::filesystem::path& path);

// Float32 unless asked otherwise; samples are written unclipped. PCM16 output
// rounds and saturates.
void write_wav(const AudioClip& clip, const std::filesystem::path& path,
               WavEncoding encoding = WavEncoding::Float32);

}  // namespace vcguard

#endif  // VCGUARD_AUDIO_IO_HPP
