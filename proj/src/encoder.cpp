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

#include "vcguard/encoder.hpp"

#include "vcguard/dsp_mel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace vcguard {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'W', '1'};

void fill_uniform(Rng& rng, Eigen::Ref<Matrix> m, Real bound) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
  }
}

template <typename T>
void put_le(std::vector<unsigned char>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

template <typename Derived>
void put_floats(std::vector<unsigned char>& out, const Eigen::DenseBase<Derived>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const float f = static_cast<float>(m(i, j));
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      put_le(out, u);
    }
  }
}

class Reader {
 public:
  explicit Reader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  void floats(Eigen::Ref<Matrix> m) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        const std::uint32_t u = get<std::uint32_t>();
        float f;
        std::memcpy(&f, &u, sizeof f);
        m(i, j) = f;
      }
    }
  }

  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error("encoder weight file truncated");
  }

  const unsigned char* at() const { return bytes_.data() + pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

EncoderWeights EncoderWeights::generate(std::uint64_t seed) {
  EncoderWeights w;
  w.seed = seed;
  Rng rng(seed);
  const Real bound1 = 1.0 / std::sqrt(static_cast<Real>(kEncoderInputDim));
  const Real bound2 = 1.0 / std::sqrt(static_cast<Real>(kEncoderHiddenDim));
  w.w1.resize(kEncoderInputDim, kEncoderHiddenDim);
  w.b1.resize(kEncoderHiddenDim);
  w.w2.resize(kEncoderHiddenDim, kEmbeddingDim);
  w.b2.resize(kEmbeddingDim);
  fill_uniform(rng, w.w1, bound1);
  for (Index i = 0; i < w.b1.size(); ++i) w.b1[i] = rng.uniform(-bound1, bound1);
  fill_uniform(rng, w.w2, bound2);
  for (Index i = 0; i < w.b2.size(); ++i) w.b2[i] = rng.uniform(-bound2, bound2);
  return w;
}

void save_weights(const EncoderWeights& w, const std::filesystem::path& path) {
  std::vector<unsigned char> out(kMagic, kMagic + 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.w1.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.w1.cols()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.w2.cols()));
  put_le<std::uint64_t>(out, w.seed);
  put_floats(out, w.w1);
  put_floats(out, w.b1);
  put_floats(out, w.w2);
  put_floats(out, w.b2);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("write failed for " + path.string());
}

EncoderWeights load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Reader r(std::vector<unsigned char>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()));
  r.need(4);
  if (std::memcmp(r.at(), kMagic, 4) != 0) throw Error(path.string() + ": bad encoder weight magic");
  r.skip(4);
  const Index in_dim = r.get<std::uint32_t>();
  const Index hidden = r.get<std::uint32_t>();
  const Index out_dim = r.get<std::uint32_t>();
  if (in_dim != kEncoderInputDim || hidden != kEncoderHiddenDim || out_dim != kEmbeddingDim) {
    throw Error(path.string() + ": unexpected encoder dimensions");
  }
  EncoderWeights w;
  w.seed = r.get<std::uint64_t>();
  w.w1.resize(in_dim, hidden);
  w.b1.resize(hidden);
  w.w2.resize(hidden, out_dim);
  w.b2.resize(out_dim);
  r.floats(w.w1);
  r.floats(w.b1);
  r.floats(w.w2);
  r.floats(w.b2);
  return w;
}

Real similarity(const Embedding& a, const Embedding& b) {
  if (a.vector.size() != b.vector.size()) throw Error("similarity: embedding sizes differ");
  return a.vector.dot(b.vector);
}

SpeakerEncoder::SpeakerEncoder(std::uint64_t seed) : SpeakerEncoder(EncoderWeights::generate(seed)) {}

SpeakerEncoder::SpeakerEncoder(EncoderWeights weights)
    : weights_(std::make_shared<const EncoderWeights>(std::move(weights))),
      w1_(std::make_shared<const Matrix>(weights_->w1)),
      w2_(std::make_shared<const Matrix>(weights_->w2)) {}

ad::Var SpeakerEncoder::embed(ad::Var x, int sample_rate_hz) const {
  if (x.rows() < kMinSamples) {
    throw Error("encoder input of " + std::to_string(x.rows()) + " samples is shorter than " +
                std::to_string(kMinSamples));
  }
  ad::Tape& tape = x.tape();
  ad::Var features = ad::mean_rows(mel_db(x, medium_mel_config(sample_rate_hz)));
  ad::Var hidden = ad::relu(ad::add(ad::matmul(features, w1_), tape.constant(weights_->b1)));
  ad::Var out = ad::add(ad::matmul(hidden, w2_), tape.constant(weights_->b2));
  return ad::l2_normalize(out);
}

Embedding SpeakerEncoder::embed(const Vector& x, int sample_rate_hz) const {
  ad::Tape tape;
  ad::Var e = embed(tape.constant(x), sample_rate_hz);
  return Embedding{e.value().transpose()};
}

}  // namespace vcguard
