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

#ifndef VCGUARD_METRICS_HPP
#define VCGUARD_METRICS_HPP

// Objective quality and defense metrics. Infinite dB values are capped at
// +/-120 so reports stay serializable.

#include "vcguard/audio_io.hpp"
#include "vcguard/encoder.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vcguard {

inline constexpr Real kDbCap = 120.0;

// 10 log10(sum ref^2 / sum (ref - deg)^2).
Real snr_db(const Vector& ref, const Vector& deg);

// Scale-invariant: the target is the projection of est onto ref.
Real sdr_db(const Vector& ref, const Vector& est);

enum class LogBase { Natural, Base10 };

// Frame-wise RMS of log-magnitude differences (2048 / 512 Hann STFT),
// averaged over frames.
Real lsd(const Vector& ref, const Vector& deg, int sample_rate_hz, LogBase base = LogBase::Natural);

// frames x n_coeffs, coefficients 1..n_coeffs of the orthonormal DCT-II of the
// dB mel spectrum (80 bands, 1024 / 256).
Matrix mfcc(const Vector& x, int sample_rate_hz, Index n_coeffs = 13);

// Mean over frames of the Euclidean MFCC distance; frame counts are
// truncated to the shorter clip.
Real mcd(const Vector& ref, const Vector& deg, int sample_rate_hz);

// Short-time objective intelligibility (standard, non-extended), clamped to [0, 1].
Real stoi(const Vector& ref, const Vector& deg, int sample_rate_hz);

// Windowed-sinc rational resampler used by stoi (64 taps, Kaiser window).
Vector resample(const Vector& x, int from_hz, int to_hz);

Real srs(const AudioClip& a, const AudioClip& b, const SpeakerEncoder& encoder);

// Fraction of values strictly below the threshold.
Real dsr(std::span<const Real> srs_values, Real threshold = 0.5);

struct ErrorRates {
  Real cer = 0;
  Real wer = 0;
};

// Levenshtein distance (unit costs) normalized by the reference length;
// characters for CER, whitespace-separated tokens for WER.
ErrorRates cer_wer(const std::string& reference, const std::string& hypothesis);

template <typename T>
std::size_t edit_distance(std::span<const T> ref, std::span<const T> hyp) {
  std::vector<std::size_t> row(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[hyp.size()];
}

struct TranscriptPair {
  std::string reference;
  std::string hypothesis;
};

struct ClipMetrics {
  std::string id;
  std::optional<Real> snr_db, sdr_db, lsd, mcd, stoi, srs_input, srs_output, cer, wer;
  std::string error;
};

struct AggregateMetrics {
  std::optional<Real> snr_db, sdr_db, lsd, mcd, stoi, srs_input, srs_output, cer, wer;
  Real dsr = 0;        // on srs_output
  Real dsr_input = 0;  // on srs_input
  std::size_t clips = 0;
  std::size_t failed = 0;
};

struct MetricsReport {
  std::vector<ClipMetrics> per_clip;
  AggregateMetrics aggregate;
  // True when the output row is computed from the proxy model rather than
  // real synthesized audio.
  bool proxy = true;
};

// Means over clips with a value, DSR on both similarity rows, and the count
// of clips with an error.
AggregateMetrics aggregate_metrics(std::span<const ClipMetrics> per_clip);

struct ReportEncoders {
  const SpeakerEncoder& attacked;  // model the perturbation was optimized against
  const SpeakerEncoder& verifier;  // held-out encoder for input-side similarity
};

// originals and protected_clips are aligned. `outputs` (cloned audio), when
// non-empty, is aligned too and replaces the proxy output row. Transcripts
// may be empty or aligned with missing entries; missing data yields nulls.
MetricsReport build_report(std::span<const AudioClip> originals, std::span<const AudioClip> protected_clips,
                           std::span<const AudioClip> outputs,
                           std::span<const std::optional<TranscriptPair>> transcripts, const ReportEncoders& encoders,
                           int workers = 1);

}  // namespace vcguard

#endif  // VCGUARD_METRICS_HPP
