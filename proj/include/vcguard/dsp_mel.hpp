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

#ifndef VCGUARD_DSP_MEL_HPP
#define VCGUARD_DSP_MEL_HPP

// Differentiable STFT power and mel spectrograms.
//
// Frames start at t * hop_length (no centering) and the tail is zero-padded,
// so a signal of length n yields ceil(n / hop_length) frames. Each frame is
// multiplied by a periodic Hann window and a precomputed real DFT matrix
// covering bins 0 .. n_fft / 2. Mel filters use the HTK scale without area
// normalization unless `area_normalize` is set.

#include "vcguard/autodiff.hpp"
#include "vcguard/common.hpp"

#include <array>
#include <cmath>
#include <memory>

namespace vcguard {

struct MelConfig {
  Index n_fft = 1024;
  Index hop_length = 256;
  Index n_mels = 80;
  int sample_rate_hz = 16000;
  Real fmin = 0;
  // Zero means sample_rate_hz / 2.
  Real fmax = 0;
  Real top_db = 80;
  bool area_normalize = false;

  Index bins() const { return n_fft / 2 + 1; }
  Real upper_hz() const { return fmax > 0 ? fmax : sample_rate_hz / 2.0; }
  void validate() const;
  bool operator==(const MelConfig&) const = default;
};

// (512, 128), (1024, 256), (2048, 512), all with 80 bands and an 80 dB range.
std::array<MelConfig, 3> canonical_mel_configs(int sample_rate_hz);
// Resolution used by the speaker encoder and MCD.
MelConfig medium_mel_config(int sample_rate_hz);

template <typename Scalar = Real>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hann_window(Index n) {
  if (n < 2) throw Error("hann_window: length must be at least 2");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(n);
  for (Index k = 0; k < n; ++k) {
    w[k] = Scalar(0.5) * (Scalar(1) - std::cos(Scalar(2 * M_PI) * Scalar(k) / Scalar(n)));
  }
  return w;
}

inline Real hz_to_mel(Real hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline Real mel_to_hz(Real mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

inline Index frame_count(Index length, Index hop) { return (length + hop - 1) / hop; }

// n_mels x (n_fft / 2 + 1). Throws if a band covers no FFT bin.
Matrix mel_filterbank(const MelConfig& cfg);

// n_fft x 2 * bins: [window .* cos | -window .* sin].
Matrix windowed_dft_matrix(Index n_fft);

// Immutable transform matrices for one configuration; shared across threads.
class MelTransform {
 public:
  explicit MelTransform(const MelConfig& cfg);

  const MelConfig& config() const { return cfg_; }
  const std::shared_ptr<const Matrix>& dft() const { return dft_; }
  // bins x n_mels
  const std::shared_ptr<const Matrix>& filterbank_t() const { return filterbank_t_; }

 private:
  MelConfig cfg_;
  std::shared_ptr<const Matrix> dft_;
  std::shared_ptr<const Matrix> filterbank_t_;
};

// Cached per configuration.
std::shared_ptr<const MelTransform> mel_transform(const MelConfig& cfg);

enum class SpectrogramKind { Magnitude, Power, MelPower, MelDb };

struct Spectrogram {
  Matrix values;  // frames x bins (or frames x n_mels)
  SpectrogramKind kind = SpectrogramKind::Power;
  MelConfig config;
};

// Tape versions; x is an n x 1 waveform with n >= n_fft.
ad::Var stft_power(ad::Var x, const MelConfig& cfg);
ad::Var mel_power(ad::Var x, const MelConfig& cfg);
// 10 log10(max(mel_power, 1e-10)), floored at max - top_db.
ad::Var mel_db(ad::Var x, const MelConfig& cfg);
std::array<ad::Var, 3> multi_scale_mel(ad::Var x, int sample_rate_hz);
// Sum over the three scales of the mean absolute dB difference.
ad::Var multi_scale_mel_l1(ad::Var x, const std::array<ad::Var, 3>& reference, int sample_rate_hz);

// Plain evaluations of the same pipeline.
Spectrogram stft_power(const Vector& x, const MelConfig& cfg);
Spectrogram stft_magnitude(const Vector& x, const MelConfig& cfg);
Spectrogram mel_power(const Vector& x, const MelConfig& cfg);
Spectrogram mel_db(const Vector& x, const MelConfig& cfg);
std::array<Spectrogram, 3> multi_scale_mel(const Vector& x, int sample_rate_hz);

}  // namespace vcguard

#endif  // VCGUARD_DSP_MEL_HPP
