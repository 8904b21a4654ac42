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

#include "vcguard/metrics.hpp"

#include "vcguard/dsp_mel.hpp"
#include "vcguard/parallel.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace vcguard {

namespace {

void require_equal_length(const char* what, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw Error(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  if (a.size() == 0) throw Error(std::string(what) + ": empty input");
}

Real capped_db(Real num, Real den) {
  if (den <= 0) return num > 0 ? kDbCap : -kDbCap;
  if (num <= 0) return -kDbCap;
  return std::clamp(10.0 * std::log10(num / den), -kDbCap, kDbCap);
}

Matrix dct2_ortho(Index n) {
  Matrix m(n, n);
  for (Index k = 0; k < n; ++k) {
    const Real s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (Index i = 0; i < n; ++i) m(k, i) = s * std::cos(M_PI * k * (2.0 * i + 1.0) / (2.0 * n));
  }
  return m;
}

MelConfig lsd_config(int sample_rate_hz) {
  MelConfig cfg;
  cfg.n_fft = 2048;
  cfg.hop_length = 512;
  cfg.sample_rate_hz = sample_rate_hz;
  return cfg;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace

Real snr_db(const Vector& ref, const Vector& deg) {
  require_equal_length("snr", ref, deg);
  const Real signal = ref.squaredNorm();
  if (signal == 0) throw Error("snr: zero-energy reference");
  return capped_db(signal, (ref - deg).squaredNorm());
}

Real sdr_db(const Vector& ref, const Vector& est) {
  require_equal_length("sdr", ref, est);
  const Real ref_energy = ref.squaredNorm();
  if (ref_energy == 0) throw Error("sdr: zero-energy reference");
  const Vector target = (est.dot(ref) / ref_energy) * ref;
  return capped_db(target.squaredNorm(), (est - target).squaredNorm());
}

Real lsd(const Vector& ref, const Vector& deg, int sample_rate_hz, LogBase base) {
  require_equal_length("lsd", ref, deg);
  if (ref.size() < 2048) throw Error("lsd: need at least 2048 samples");
  const MelConfig cfg = lsd_config(sample_rate_hz);
  const Matrix a = stft_magnitude(ref, cfg).values.cwiseMax(ad::kLogAmin).array().log().matrix();
  const Matrix b = stft_magnitude(deg, cfg).values.cwiseMax(ad::kLogAmin).array().log().matrix();
  Matrix diff = a - b;
  if (base == LogBase::Base10) diff /= std::log(10.0);
  const Vector per_frame = diff.array().square().rowwise().mean().sqrt();
  return per_frame.mean();
}

Matrix mfcc(const Vector& x, int sample_rate_hz, Index n_coeffs) {
  const MelConfig cfg = medium_mel_config(sample_rate_hz);
  if (x.size() < cfg.n_fft) throw Error("mcd: clip shorter than one frame");
  if (n_coeffs < 1 || n_coeffs >= cfg.n_mels) throw Error("mfcc: coefficient count out of range");
  const Matrix mel = mel_power(x, cfg).values;
  const Matrix log_mel = 10.0 * mel.cwiseMax(ad::kLogAmin).array().log10().matrix();
  static const Matrix dct = dct2_ortho(80);
  const Matrix ceps = log_mel * dct.transpose();
  return ceps.middleCols(1, n_coeffs);
}

Real mcd(const Vector& ref, const Vector& deg, int sample_rate_hz) {
  const Matrix a = mfcc(ref, sample_rate_hz);
  const Matrix b = mfcc(deg, sample_rate_hz);
  const Index frames = std::min(a.rows(), b.rows());
  return (a.topRows(frames) - b.topRows(frames)).rowwise().norm().mean();
}

Real srs(const AudioClip& a, const AudioClip& b, const SpeakerEncoder& encoder) {
  return similarity(encoder.embed(a), encoder.embed(b));
}

Real dsr(std::span<const Real> srs_values, Real threshold) {
  if (srs_values.empty()) throw Error("dsr: empty list");
  std::size_t below = 0;
  for (Real v : srs_values) below += v < threshold ? 1 : 0;
  return static_cast<Real>(below) / static_cast<Real>(srs_values.size());
}

ErrorRates cer_wer(const std::string& reference, const std::string& hypothesis) {
  if (reference.empty()) throw Error("cer_wer: empty reference");
  ErrorRates r;
  r.cer = static_cast<Real>(edit_distance<char>(reference, hypothesis)) / static_cast<Real>(reference.size());
  const auto ref_words = split_words(reference);
  const auto hyp_words = split_words(hypothesis);
  if (ref_words.empty()) throw Error("cer_wer: reference has no words");
  r.wer = static_cast<Real>(edit_distance<std::string>(ref_words, hyp_words)) / static_cast<Real>(ref_words.size());
  return r;
}

AggregateMetrics aggregate_metrics(std::span<const ClipMetrics> per_clip) {
  AggregateMetrics agg;
  agg.clips = per_clip.size();
  auto mean_of = [&](auto member) -> std::optional<Real> {
    Real total = 0;
    std::size_t count = 0;
    for (const auto& m : per_clip) {
      if (m.*member) {
        total += *(m.*member);
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    return total / static_cast<Real>(count);
  };
  agg.snr_db = mean_of(&ClipMetrics::snr_db);
  agg.sdr_db = mean_of(&ClipMetrics::sdr_db);
  agg.lsd = mean_of(&ClipMetrics::lsd);
  agg.mcd = mean_of(&ClipMetrics::mcd);
  agg.stoi = mean_of(&ClipMetrics::stoi);
  agg.srs_input = mean_of(&ClipMetrics::srs_input);
  agg.srs_output = mean_of(&ClipMetrics::srs_output);
  agg.cer = mean_of(&ClipMetrics::cer);
  agg.wer = mean_of(&ClipMetrics::wer);
  std::vector<Real> out_values, in_values;
  for (const auto& m : per_clip) {
    if (!m.error.empty()) ++agg.failed;
    if (m.srs_output) out_values.push_back(*m.srs_output);
    if (m.srs_input) in_values.push_back(*m.srs_input);
  }
  agg.dsr = out_values.empty() ? 0.0 : dsr(out_values);
  agg.dsr_input = in_values.empty() ? 0.0 : dsr(in_values);
  return agg;
}

MetricsReport build_report(std::span<const AudioClip> originals, std::span<const AudioClip> protected_clips,
                           std::span<const AudioClip> outputs,
                           std::span<const std::optional<TranscriptPair>> transcripts, const ReportEncoders& encoders,
                           int workers) {
  if (originals.size() != protected_clips.size()) throw Error("build_report: originals and protected differ in count");
  if (!outputs.empty() && outputs.size() != originals.size()) throw Error("build_report: outputs misaligned");
  if (!transcripts.empty() && transcripts.size() != originals.size()) {
    throw Error("build_report: transcripts misaligned");
  }

  MetricsReport report;
  report.proxy = outputs.empty();
  report.per_clip.resize(originals.size());
  parallel_for(originals.size(), workers, [&](std::size_t i) {
    const AudioClip& ref = originals[i];
    const AudioClip& deg = protected_clips[i];
    ClipMetrics& m = report.per_clip[i];
    m.id = ref.id;
    auto attempt = [&](const char* name, std::optional<Real>& slot, const std::function<Real()>& fn) {
      try {
        slot = fn();
      } catch (const std::exception& e) {
        if (!m.error.empty()) m.error += "; ";
        m.error += std::string(name) + ": " + e.what();
      }
    };
    if (ref.sample_rate_hz != deg.sample_rate_hz || ref.size() != deg.size()) {
      m.error = "protected clip does not match the original in rate or length";
      return;
    }
    const int sr = ref.sample_rate_hz;
    attempt("snr", m.snr_db, [&] { return snr_db(ref.samples, deg.samples); });
    attempt("sdr", m.sdr_db, [&] { return sdr_db(ref.samples, deg.samples); });
    attempt("lsd", m.lsd, [&] { return lsd(ref.samples, deg.samples, sr); });
    attempt("mcd", m.mcd, [&] { return mcd(ref.samples, deg.samples, sr); });
    attempt("stoi", m.stoi, [&] { return stoi(ref.samples, deg.samples, sr); });
    attempt("srs_input", m.srs_input, [&] { return srs(ref, deg, encoders.verifier); });
    if (outputs.empty()) {
      attempt("srs_output", m.srs_output, [&] {
        return similarity(encoders.attacked.model_output_proxy(ref), encoders.attacked.model_output_proxy(deg));
      });
    } else {
      attempt("srs_output", m.srs_output, [&] { return srs(ref, outputs[i], encoders.verifier); });
    }
    if (!transcripts.empty() && transcripts[i]) {
      try {
        const ErrorRates er = cer_wer(transcripts[i]->reference, transcripts[i]->hypothesis);
        m.cer = er.cer;
        m.wer = er.wer;
      } catch (const std::exception& e) {
        if (!m.error.empty()) m.error += "; ";
        m.error += std::string("cer_wer: ") + e.what();
      }
    }
  });

  report.aggregate = aggregate_metrics(report.per_clip);
  return report;
}

}  // namespace vcguard
