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

#include <cmath>
#include <numeric>
#include <vector>

namespace vcguard {

namespace {

constexpr int kStoiRate = 10000;
constexpr Index kFrame = 256;
constexpr Index kHop = 128;
constexpr Index kFft = 512;
constexpr Index kBands = 15;
constexpr Real kMinFreq = 150;
constexpr Index kSegment = 30;
constexpr Real kBeta = -15;
constexpr Real kDynRange = 40;
constexpr Real kEps = 2.220446049250313e-16;

constexpr Index kResampleTaps = 64;
constexpr Real kKaiserBeta = 5.653;

// Symmetric Hann without the zero end points (MATLAB hanning(n)).
Vector stoi_window() {
  Vector w(kFrame);
  for (Index k = 0; k < kFrame; ++k) w[k] = 0.5 * (1.0 - std::cos(2.0 * M_PI * (k + 1) / (kFrame + 1)));
  return w;
}

// kFrame x 2 * bins real DFT of a zero-padded kFft-point frame.
Matrix stoi_dft() {
  const Index bins = kFft / 2 + 1;
  Matrix m(kFrame, 2 * bins);
  for (Index k = 0; k < bins; ++k) {
    for (Index n = 0; n < kFrame; ++n) {
      const Real angle = 2.0 * M_PI * static_cast<Real>((n * k) % kFft) / kFft;
      m(n, k) = std::cos(angle);
      m(n, bins + k) = -std::sin(angle);
    }
  }
  return m;
}

Matrix third_octave_bands() {
  const Index bins = kFft / 2 + 1;
  Vector f(bins);
  for (Index k = 0; k < bins; ++k) f[k] = static_cast<Real>(k) * kStoiRate / kFft;
  auto nearest = [&](Real hz) {
    Index best = 0;
    for (Index k = 1; k < bins; ++k) {
      if ((f[k] - hz) * (f[k] - hz) < (f[best] - hz) * (f[best] - hz)) best = k;
    }
    return best;
  };
  Matrix obm = Matrix::Zero(kBands, bins);
  for (Index i = 0; i < kBands; ++i) {
    const Index lo = nearest(kMinFreq * std::pow(2.0, (2.0 * i - 1) / 6.0));
    const Index hi = nearest(kMinFreq * std::pow(2.0, (2.0 * i + 1) / 6.0));
    for (Index k = lo; k < hi; ++k) obm(i, k) = 1.0;
  }
  return obm;
}

// Frame starts follow range(0, len - kFrame, kHop).
std::vector<Index> frame_starts(Index length) {
  std::vector<Index> starts;
  for (Index s = 0; s < length - kFrame; s += kHop) starts.push_back(s);
  return starts;
}

// Drops frames of x more than kDynRange dB below its loudest frame (and the
// same frames of y), then overlap-adds the windowed survivors.
void remove_silent_frames(const Vector& x, const Vector& y, Vector& x_out, Vector& y_out) {
  static const Vector w = stoi_window();
  const auto starts = frame_starts(x.size());
  std::vector<Real> energy(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    energy[i] = 20.0 * std::log10(x.segment(starts[i], kFrame).cwiseProduct(w).norm() + kEps);
  }
  const Real top = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  std::vector<Index> keep;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (top - kDynRange - energy[i] < 0) keep.push_back(starts[i]);
  }
  const Index n = keep.empty() ? 0 : static_cast<Index>(keep.size() - 1) * kHop + kFrame;
  x_out = Vector::Zero(n);
  y_out = Vector::Zero(n);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const Index at = static_cast<Index>(j) * kHop;
    x_out.segment(at, kFrame) += x.segment(keep[j], kFrame).cwiseProduct(w);
    y_out.segment(at, kFrame) += y.segment(keep[j], kFrame).cwiseProduct(w);
  }
}

// bands x frames one-third-octave envelope.
Matrix band_envelopes(const Vector& x) {
  static const Vector w = stoi_window();
  static const Matrix dft = stoi_dft();
  static const Matrix obm = third_octave_bands();
  const auto starts = frame_starts(x.size());
  Matrix framed(static_cast<Index>(starts.size()), kFrame);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    framed.row(static_cast<Index>(i)) = x.segment(starts[i], kFrame).cwiseProduct(w).transpose();
  }
  const Index bins = kFft / 2 + 1;
  const Matrix spec = framed * dft;
  const Matrix power = spec.leftCols(bins).array().square() + spec.rightCols(bins).array().square();
  return (obm * power.transpose()).cwiseSqrt();
}

Real kaiser(Real t, Real half) {
  const Real r = t / half;
  if (std::abs(r) > 1) return 0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) / std::cyl_bessel_i(0.0, kKaiserBeta);
}

Real sinc(Real v) { return v == 0 ? 1.0 : std::sin(M_PI * v) / (M_PI * v); }

}  // namespace

Vector resample(const Vector& x, int from_hz, int to_hz) {
  if (from_hz <= 0 || to_hz <= 0) throw Error("resample: rates must be positive");
  if (from_hz == to_hz) return x;
  const long g = std::gcd(from_hz, to_hz);
  const long up = to_hz / g;
  const long down = from_hz / g;
  const Index n_out = static_cast<Index>((x.size() * up + down - 1) / down);
  const Real cutoff = std::min<Real>(1.0, static_cast<Real>(up) / static_cast<Real>(down));
  const Real half = kResampleTaps / 2.0;
  // Output n sits at t = q + p / up with q = n * down / up and p = n * down % up;
  // its taps depend on the phase p only, so one normalized filter per phase.
  const Index first_offset = static_cast<Index>(half) - 1;
  Matrix taps(kResampleTaps, up);
  for (long p = 0; p < up; ++p) {
    Real norm = 0;
    for (Index j = 0; j < kResampleTaps; ++j) {
      const Real tau = static_cast<Real>(first_offset - j) + static_cast<Real>(p) / static_cast<Real>(up);
      taps(j, p) = cutoff * sinc(cutoff * tau) * kaiser(tau, half);
      norm += taps(j, p);
    }
    taps.col(p) /= norm;
  }
  Vector y(n_out);
  for (Index n = 0; n < n_out; ++n) {
    const long long pos = static_cast<long long>(n) * down;
    const Index q = static_cast<Index>(pos / up);
    const long p = static_cast<long>(pos % up);
    const Index first = q - first_offset;
    Real acc = 0;
    if (first >= 0 && first + kResampleTaps <= x.size()) {
      acc = taps.col(p).dot(x.segment(first, kResampleTaps));
    } else {
      for (Index j = 0; j < kResampleTaps; ++j) {
        const Index k = first + j;
        if (k >= 0 && k < x.size()) acc += taps(j, p) * x[k];
      }
    }
    y[n] = acc;
  }
  return y;
}

Real stoi(const Vector& ref, const Vector& deg, int sample_rate_hz) {
  if (ref.size() != deg.size()) throw Error("stoi: length mismatch");
  Vector x = resample(ref, sample_rate_hz, kStoiRate);
  Vector y = resample(deg, sample_rate_hz, kStoiRate);
  Vector xs, ys;
  remove_silent_frames(x, y, xs, ys);
  if (xs.size() <= kFrame) throw Error("stoi: fewer than 30 frames after silence removal");
  const Matrix x_tob = band_envelopes(xs);
  const Matrix y_tob = band_envelopes(ys);
  const Index frames = x_tob.cols();
  if (frames < kSegment) throw Error("stoi: fewer than 30 frames after silence removal");

  const Real clip = std::pow(10.0, -kBeta / 20.0);
  Real total = 0;
  Index segments = 0;
  for (Index m = kSegment; m <= frames; ++m, ++segments) {
    for (Index b = 0; b < kBands; ++b) {
      const RowVector xs_row = x_tob.row(b).segment(m - kSegment, kSegment);
      const RowVector ys_row = y_tob.row(b).segment(m - kSegment, kSegment);
      const Real alpha = xs_row.norm() / (ys_row.norm() + kEps);
      RowVector yp = (ys_row * alpha).cwiseMin(xs_row * (1.0 + clip));
      RowVector xc = xs_row.array() - xs_row.mean();
      yp.array() -= yp.mean();
      yp /= yp.norm() + kEps;
      xc /= xc.norm() + kEps;
      total += yp.dot(xc);
    }
  }
  const Real d = total / static_cast<Real>(segments * kBands);
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace vcguard
