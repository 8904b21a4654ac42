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

#ifndef VCGUARD_SYNTH_HPP
#define VCGUARD_SYNTH_HPP

// Synthetic harmonic "speakers" for desk-scale experiments and tests. Each
// speaker has its own pitch range and formant layout; each clip adds pitch
// drift and a syllable-rate amplitude envelope.

#include "vcguard/audio_io.hpp"

#include <cstdint>
#include <vector>

namespace vcguard {

struct ToySpeaker {
  Real f0_hz = 120;
  Real formants_hz[3] = {500, 1500, 2500};
  Real bandwidths_hz[3] = {80, 120, 160};
  Real tilt = 1.0;  // harmonic amplitude ~ h^-tilt before the envelope
};

ToySpeaker make_toy_speaker(std::uint64_t seed);

AudioClip synth_toy_clip(const ToySpeaker& speaker, std::uint64_t seed, Real duration_s, int sample_rate_hz = 16000);

// n clips from n distinct speakers, durations uniform in [min_s, max_s],
// ids "spk00", "spk01", ...
std::vector<AudioClip> toy_corpus(std::size_t n, std::uint64_t seed, int sample_rate_hz = 16000, Real min_s = 1.0,
                                  Real max_s = 2.0);

}  // namespace vcguard

#endif  // VCGUARD_SYNTH_HPP
