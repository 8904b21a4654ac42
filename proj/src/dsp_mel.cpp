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

#include "vcguard/dsp_mel.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace vcguard {

void MelConfig::validate() const {
  if (n_fft < 2) throw Error("MelConfig: n_fft must be at least 2");
  if (hop_length < 1 || hop_length > n_fft) throw Error("MelConfig: hop_length must lie in [1, n_fft]");
  if (n_mels < 1) throw Error("MelConfig: n_mels must be positive");
  if (sample_rate_hz <= 0) throw Error("MelConfig: sample rate must be positive");
  if (top_db < 0) throw Error("MelConfig: top_db must be non-negative");
  const Real hi = upper_hz();
  if (!(fmin >= 0 && fmin < hi && hi <= sample_rate_hz / 2.0)) {
    throw Error("MelConfig: need 0 <= fmin < fmax <= sample_rate / 2");
  }
}

std::array<MelConfig, 3> canonical_mel_configs(int sample_rate_hz) {
  std::array<MelConfig, 3> cfgs;
  const Index sizes[3][2] = {{512, 128}, {1024, 256}, {2048, 512}};
  for (int i = 0; i < 3; ++i) {
    cfgs[i].n_fft = sizes[i][0];
    cfgs[i].hop_length = sizes[i][1];
    cfgs[i].sample_rate_hz = sample_rate_hz;
  }
  return cfgs;
}

MelConfig medium_mel_config(int sample_rate_hz) { return canonical_mel_configs(sample_rate_hz)[1]; }

Matrix mel_filterbank(const MelConfig& cfg) {
  cfg.validate();
  const Index bins = cfg.bins();
  const Index n_mels = cfg.n_mels;
  const Real mel_lo = hz_to_mel(cfg.fmin);
  const Real mel_hi = hz_to_mel(cfg.upper_hz());
  Vector edges(n_mels + 2);
  for (Index i = 0; i < n_mels + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<Real>(i) / static_cast<Real>(n_mels + 1));
  }
  Matrix fb = Matrix::Zero(n_mels, bins);
  for (Index m = 0; m < n_mels; ++m) {
    const Real left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (Index k = 0; k < bins; ++k) {
      const Real f = static_cast<Real>(k) * cfg.sample_rate_hz / static_cast<Real>(cfg.n_fft);
      const Real rise = (f - left) / (center - left);
      const Real fall = (right - f) / (right - center);
      fb(m, k) = std::max<Real>(0, std::min(rise, fall));
    }
    if (!(fb.row(m).maxCoeff() > 0)) {
      throw Error("mel_filterbank: band " + std::to_string(m) + " (" + std::to_string(left) + "-" +
                  std::to_string(right) + " Hz) covers no FFT bin at n_fft=" + std::to_string(cfg.n_fft));
    }
    if (cfg.area_normalize) fb.row(m) *= 2.0 / (right - left);
  }
  return fb;
}

Matrix windowed_dft_matrix(Index n_fft) {
  const Vector w = hann_window(n_fft);
  const Index bins = n_fft / 2 + 1;
  Matrix m(n_fft, 2 * bins);
  for (Index k = 0; k < bins; ++k) {
    for (Index n = 0; n < n_fft; ++n) {
      // Reduce the phase index exactly before converting to an angle.
      const Index r = (n * k) % n_fft;
      const Real angle = 2.0 * M_PI * static_cast<Real>(r) / static_cast<Real>(n_fft);
      m(n, k) = w[n] * std::cos(angle);
      m(n, bins + k) = -w[n] * std::sin(angle);
    }
  }
  return m;
}

MelTransform::MelTransform(const MelConfig& cfg)
    : cfg_(cfg),
      dft_(std::make_shared<const Matrix>(windowed_dft_matrix(cfg.n_fft))),
      filterbank_t_(std::make_shared<const Matrix>(mel_filterbank(cfg).transpose())) {}

std::shared_ptr<const MelTransform> mel_transform(const MelConfig& cfg) {
  using Key = std::tuple<Index, Index, Index, int, Real, Real, Real, bool>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const MelTransform>> cache;
  const Key key{cfg.n_fft, cfg.hop_length, cfg.n_mels, cfg.sample_rate_hz, cfg.fmin, cfg.upper_hz(), cfg.top_db,
                cfg.area_normalize};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const MelTransform>(cfg);
  cache.emplace(key, t);
  return t;
}

namespace {

ad::Var stft_power_with(ad::Var x, const MelTransform& t) {
  const MelConfig& cfg = t.config();
  if (x.cols() != 1) throw Error("stft_power: waveform must be a column vector");
  if (x.rows() < cfg.n_fft) {
    throw Error("stft_power: input of " + std::to_string(x.rows()) + " samples is shorter than one frame (" +
                std::to_string(cfg.n_fft) + ")");
  }
  const Index n_frames = frame_count(x.rows(), cfg.hop_length);
  ad::Var framed = ad::frames(x, cfg.n_fft, cfg.hop_length, n_frames);
  ad::Var spectrum = ad::matmul(framed, t.dft());
  return ad::complex_power(spectrum, cfg.bins());
}

ad::Var mel_db_with(ad::Var x, const MelTransform& t) {
  ad::Var power = stft_power_with(x, t);
  ad::Var mel = ad::matmul(power, t.filterbank_t());
  ad::Var db = ad::scale(ad::log_floor(mel, ad::kLogAmin), 10.0 / std::log(10.0));
  return ad::floor_below_max(db, t.config().top_db);
}

Spectrogram evaluate(const Vector& x, const MelConfig& cfg, SpectrogramKind kind) {
  ad::Tape tape;
  ad::Var in = tape.constant(x);
  ad::Var out;
  switch (kind) {
    case SpectrogramKind::Magnitude:
    case SpectrogramKind::Power:
      out = stft_power(in, cfg);
      break;
    case SpectrogramKind::MelPower:
      out = mel_power(in, cfg);
      break;
    case SpectrogramKind::MelDb:
      out = mel_db(in, cfg);
      break;
  }
  Spectrogram s{out.value(), kind, cfg};
  if (kind == SpectrogramKind::Magnitude) s.values = s.values.cwiseSqrt();
  return s;
}

}  // namespace

ad::Var stft_power(ad::Var x, const MelConfig& cfg) {
  cfg.validate();
  return stft_power_with(x, *mel_transform(cfg));
}

ad::Var mel_power(ad::Var x, const MelConfig& cfg) {
  cfg.validate();
  auto t = mel_transform(cfg);
  return ad::matmul(stft_power_with(x, *t), t->filterbank_t());
}

ad::Var mel_db(ad::Var x, const MelConfig& cfg) {
  cfg.validate();
  return mel_db_with(x, *mel_transform(cfg));
}

std::array<ad::Var, 3> multi_scale_mel(ad::Var x, int sample_rate_hz) {
  const auto cfgs = canonical_mel_configs(sample_rate_hz);
  return {mel_db(x, cfgs[0]), mel_db(x, cfgs[1]), mel_db(x, cfgs[2])};
}

ad::Var multi_scale_mel_l1(ad::Var x, const std::array<ad::Var, 3>& reference, int sample_rate_hz) {
  const auto mels = multi_scale_mel(x, sample_rate_hz);
  ad::Var total = ad::l1_distance(mels[0], reference[0], ad::Reduction::Mean);
  for (int s = 1; s < 3; ++s) total = ad::add(total, ad::l1_distance(mels[s], reference[s], ad::Reduction::Mean));
  return total;
}

Spectrogram stft_power(const Vector& x, const MelConfig& cfg) { return evaluate(x, cfg, SpectrogramKind::Power); }

Spectrogram stft_magnitude(const Vector& x, const MelConfig& cfg) {
  return evaluate(x, cfg, SpectrogramKind::Magnitude);
}

Spectrogram mel_power(const Vector& x, const MelConfig& cfg) { return evaluate(x, cfg, SpectrogramKind::MelPower); }

Spectrogram mel_db(const Vector& x, const MelConfig& cfg) { return evaluate(x, cfg, SpectrogramKind::MelDb); }

std::array<Spectrogram, 3> multi_scale_mel(const Vector& x, int sample_rate_hz) {
  const auto cfgs = canonical_mel_configs(sample_rate_hz);
  return {mel_db(x, cfgs[0]), mel_db(x, cfgs[1]), mel_db(x, cfgs[2])};
}

}  // namespace vcguard
