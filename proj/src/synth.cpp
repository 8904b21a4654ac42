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

#include "vcguard/synth.hpp"

#include <cmath>
#include <cstdio>

namespace vcguard {

ToySpeaker make_toy_speaker(std::uint64_t seed) {
  Rng rng(seed);
  ToySpeaker s;
  s.f0_hz = rng.uniform(90.0, 240.0);
  s.formants_hz[0] = rng.uniform(300.0, 900.0);
  s.formants_hz[1] = rng.uniform(1000.0, 2400.0);
  s.formants_hz[2] = rng.uniform(2500.0, 3800.0);
  for (int i = 0; i < 3; ++i) s.bandwidths_hz[i] = rng.uniform(60.0, 200.0) * (1.0 + 0.5 * i);
  s.tilt = rng.uniform(0.6, 1.4);
  return s;
}

AudioClip synth_toy_clip(const ToySpeaker& speaker, std::uint64_t seed, Real duration_s, int sample_rate_hz) {
  if (!(duration_s > 0) || sample_rate_hz <= 0) throw Error("synth_toy_clip: invalid duration or rate");
  Rng rng(seed);
  const Index n = static_cast<Index>(std::llround(duration_s * sample_rate_hz));
  const Real sr = sample_rate_hz;
  const Real nyquist_guard = 0.45 * sr;
  const Real drift_rate = rng.uniform(0.3, 1.2);
  const Real drift_phase = rng.uniform(0.0, 2 * M_PI);
  const Real syllable_rate = rng.uniform(3.0, 5.0);
  const Real syllable_phase = rng.uniform(0.0, 2 * M_PI);
  const int max_harmonics = 60;
  std::vector<Real> phase(max_harmonics, 0.0);
  for (auto& p : phase) p = rng.uniform(0.0, 2 * M_PI);

  auto envelope = [&](Real f) {
    Real a = 0.05;
    for (int i = 0; i < 3; ++i) {
      const Real z = (f - speaker.formants_hz[i]) / speaker.bandwidths_hz[i];
      a += std::exp(-0.5 * z * z) / (1.0 + i);
    }
    return a;
  };

  AudioClip clip;
  clip.sample_rate_hz = sample_rate_hz;
  clip.samples = Vector::Zero(n);
  Real f0_phase = 0;
  for (Index i = 0; i < n; ++i) {
    const Real t = i / sr;
    const Real f0 = speaker.f0_hz * (1.0 + 0.06 * std::sin(2 * M_PI * drift_rate * t + drift_phase));
    f0_phase += 2 * M_PI * f0 / sr;
    Real v = 0;
    for (int h = 1; h <= max_harmonics; ++h) {
      const Real f = h * f0;
      if (f >= nyquist_guard) break;
      v += std::pow(static_cast<Real>(h), -speaker.tilt) * envelope(f) * std::sin(h * f0_phase + phase[h - 1]);
    }
    const Real syl = 0.5 + 0.5 * std::sin(2 * M_PI * syllable_rate * t + syllable_phase);
    clip.samples[i] = v * (0.1 + 0.9 * syl * syl) + 0.002 * rng.normal();
  }
  // Short fades keep the edges from clicking.
  const Index fade = std::min<Index>(n / 4, static_cast<Index>(0.01 * sr));
  for (Index i = 0; i < fade; ++i) {
    const Real g = static_cast<Real>(i) / fade;
    clip.samples[i] *= g;
    clip.samples[n - 1 - i] *= g;
  }
  const Real peak = clip.samples.cwiseAbs().maxCoeff();
  if (peak > 0) clip.samples *= 0.5 / peak;
  return clip;
}

std::vector<AudioClip> toy_corpus(std::size_t n, std::uint64_t seed, int sample_rate_hz, Real min_s, Real max_s) {
  Rng rng(seed);
  std::vector<AudioClip> clips;
  clips.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t speaker_seed = rng.next_u64();
    const std::uint64_t clip_seed = rng.next_u64();
    const Real duration = rng.uniform(min_s, max_s);
    AudioClip c = synth_toy_clip(make_toy_speaker(speaker_seed), clip_seed, duration, sample_rate_hz);
    char id[32];
    std::snprintf(id, sizeof id, "spk%02zu", i);
    c.id = id;
    clips.push_back(std::move(c));
  }
  return clips;
}

}  // namespace vcguard
