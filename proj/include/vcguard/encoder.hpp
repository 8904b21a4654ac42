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

#ifndef VCGUARD_ENCODER_HPP
#define VCGUARD_ENCODER_HPP

// Surrogate speaker encoder: medium-resolution dB mel spectrogram, temporal
// mean, a two-layer ReLU perceptron with fixed random weights, then L2
// normalization. It is untrained; its similarities are not comparable with
// those of a real speaker verifier.

#include "vcguard/audio_io.hpp"
#include "vcguard/autodiff.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>

namespace vcguard {

inline constexpr Index kEncoderInputDim = 80;
inline constexpr Index kEncoderHiddenDim = 128;
inline constexpr Index kEmbeddingDim = 64;

struct EncoderWeights {
  Matrix w1;     // 80 x 128
  RowVector b1;  // 128
  Matrix w2;     // 128 x 64
  RowVector b2;  // 64
  std::uint64_t seed = 0;

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], drawn in the order w1, b1, w2, b2.
  static EncoderWeights generate(std::uint64_t seed);
};

// Flat little-endian file: "CSW1", uint32 x 3 dims, uint64 seed, then float32
// w1 (row-major), b1, w2 (row-major), b2.
void save_weights(const EncoderWeights& w, const std::filesystem::path& path);
EncoderWeights load_weights(const std::filesystem::path& path);

struct Embedding {
  Vector vector;  // unit L2 norm
};

// Dot product; the cosine for unit vectors.
Real similarity(const Embedding& a, const Embedding& b);

class SpeakerEncoder {
 public:
  static constexpr Index kMinSamples = 1024;

  explicit SpeakerEncoder(std::uint64_t seed);
  explicit SpeakerEncoder(EncoderWeights weights);

  // x is n x 1 on a tape; returns a 1 x 64 unit row.
  ad::Var embed(ad::Var x, int sample_rate_hz) const;
  Embedding embed(const Vector& x, int sample_rate_hz) const;
  Embedding embed(const AudioClip& clip) const { return embed(clip.samples, clip.sample_rate_hz); }

  // Stand-in for the cloning model's output. A real synthesis adapter would
  // replace this behind the same signature.
  ad::Var model_output_proxy(ad::Var x, int sample_rate_hz) const { return embed(x, sample_rate_hz); }
  Embedding model_output_proxy(const AudioClip& clip) const { return embed(clip); }

  const EncoderWeights& weights() const { return *weights_; }
  std::uint64_t seed() const { return weights_->seed; }

 private:
  std::shared_ptr<const EncoderWeights> weights_;
  std::shared_ptr<const Matrix> w1_;
  std::shared_ptr<const Matrix> w2_;
};

}  // namespace vcguard

#endif  // VCGUARD_ENCODER_HPP
