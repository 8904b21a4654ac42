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
#include "vcguard/encoder.hpp"
#include "vcguard/synth.hpp"

#include <doctest.h>

#include <cmath>

using namespace vcguard;

TEST_CASE("weights follow the fan-in bound and the seed") {
  const EncoderWeights w = EncoderWeights::generate(5);
  CHECK(w.w1.rows() == kEncoderInputDim);
  CHECK(w.w1.cols() == kEncoderHiddenDim);
  CHECK(w.w2.rows() == kEncoderHiddenDim);
  CHECK(w.w2.cols() == kEmbeddingDim);
  CHECK(w.w1.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(80.0));
  CHECK(w.w2.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(128.0));
  CHECK(w.b1.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(80.0));
  CHECK(EncoderWeights::generate(5).w1 == w.w1);
  CHECK(EncoderWeights::generate(6).w1 != w.w1);
}

TEST_CASE("embeddings are unit length and deterministic") {
  const SpeakerEncoder enc(42);
  const Vector x = test::random_signal(1, 8000, 0.3);
  const Embedding a = enc.embed(x, 16000);
  const Embedding b = enc.embed(x, 16000);
  CHECK(a.vector.size() == kEmbeddingDim);
  CHECK(a.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.vector == b.vector);
  CHECK(similarity(a, a) == doctest::Approx(1.0));
}

TEST_CASE("distinct seeds give distinct embeddings") {
  const Vector x = test::random_signal(2, 6000, 0.3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Embedding a = SpeakerEncoder(s).embed(x, 16000);
    const Embedding b = SpeakerEncoder(s + 100).embed(x, 16000);
    CHECK((a.vector - b.vector).norm() > 1e-3);
  }
}

TEST_CASE("tape embedding equals the plain one") {
  const SpeakerEncoder enc(3);
  const Vector x = test::random_signal(7, 4000, 0.3);
  ad::Tape t;
  const ad::Var e = enc.embed(t.leaf(x), 16000);
  CHECK(e.rows() == 1);
  CHECK(e.cols() == kEmbeddingDim);
  CHECK(Vector(e.value().transpose()).isApprox(enc.embed(x, 16000).vector, 1e-14));
  CHECK(enc.model_output_proxy(AudioClip{x, 16000, "p"}).vector == enc.embed(x, 16000).vector);
}

TEST_CASE("clips shorter than the minimum are rejected") {
  const SpeakerEncoder enc(1);
  CHECK_THROWS_AS(enc.embed(test::random_signal(1, SpeakerEncoder::kMinSamples - 1), 16000), Error);
  CHECK_NOTHROW(enc.embed(test::random_signal(1, SpeakerEncoder::kMinSamples), 16000));
}

TEST_CASE("weights survive a file round trip at float32 precision") {
  test::TempDir dir("encoder_w");
  const EncoderWeights w = EncoderWeights::generate(77);
  save_weights(w, dir.path() / "w.bin");
  const std::string bytes = test::slurp(dir.path() / "w.bin");
  CHECK(bytes.substr(0, 4) == "CSW1");
  CHECK(bytes.size() == 4 + 3 * 4 + 8 + 4 * (80 * 128 + 128 + 128 * 64 + 64));
  const EncoderWeights back = load_weights(dir.path() / "w.bin");
  CHECK(back.seed == 77);
  CHECK(back.w1 == w.w1.cast<float>().cast<Real>());
  CHECK(back.b2 == w.b2.cast<float>().cast<Real>());
  std::ofstream(dir.path() / "bad.bin", std::ios::binary) << "XXXX";
  CHECK_THROWS_AS(load_weights(dir.path() / "bad.bin"), Error);
}

TEST_CASE("toy speakers are distinguishable") {
  const SpeakerEncoder enc(1234);
  const auto clips = toy_corpus(4, 9);
  const ToySpeaker spk = make_toy_speaker(9);
  const Embedding a = enc.embed(synth_toy_clip(spk, 1, 1.0));
  const Embedding b = enc.embed(synth_toy_clip(spk, 2, 1.0));
  CHECK(similarity(a, b) > 0.9);
  CHECK(clips[0].id == "spk00");
  for (const auto& c : clips) {
    CHECK(c.duration_s() >= 1.0);
    CHECK(c.duration_s() <= 2.0);
    CHECK(c.samples.cwiseAbs().maxCoeff() == doctest::Approx(0.5));
  }
}
