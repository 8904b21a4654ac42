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

#ifndef VCGUARD_TESTS_ORACLES_HPP
#define VCGUARD_TESTS_ORACLES_HPP

// Slow reference computations that share no code with the library.

#include "vcguard/common.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace vcguard::oracle {

// Direct O(n^2) DFT power of each non-centered, zero-padded frame under a
// periodic Hann window.
inline Matrix naive_power(const Vector& x, Index n_fft, Index hop) {
  const Index frames = (x.size() + hop - 1) / hop;
  const Index bins = n_fft / 2 + 1;
  Matrix p(frames, bins);
  for (Index f = 0; f < frames; ++f) {
    for (Index k = 0; k < bins; ++k) {
      std::complex<long double> acc = 0;
      for (Index n = 0; n < n_fft; ++n) {
        const Index at = f * hop + n;
        if (at >= x.size()) break;
        const long double w = 0.5L - 0.5L * std::cos(2.0L * M_PI * n / n_fft);
        acc += std::polar<long double>(w * x[at], -2.0L * M_PI * k * n / n_fft);
      }
      p(f, k) = static_cast<Real>(std::norm(acc));
    }
  }
  return p;
}

// Plain recursive Levenshtein distance, no tables.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::string ta = a.substr(1), tb = b.substr(1);
  const std::size_t sub = levenshtein(ta, tb) + (a[0] == b[0] ? 0 : 1);
  return std::min({sub, levenshtein(ta, b) + 1, levenshtein(a, tb) + 1});
}

// Every string over {a, b} of length <= max_len, including the empty one.
inline std::vector<std::string> ab_strings(std::size_t max_len) {
  std::vector<std::string> out = {""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() < max_len) {
      out.push_back(out[i] + "a");
      out.push_back(out[i] + "b");
    }
  }
  return out;
}

// One word per character: "ab" -> "alpha beta".
inline std::string ab_words(const std::string& s) {
  std::string w;
  for (char c : s) {
    if (!w.empty()) w += ' ';
    w += c == 'a' ? "alpha" : "beta";
  }
  return w;
}

// Minimum squared norm of a convex combination of three columns, by grid
// search over the simplex with the given step.
inline Real grid_min_sq_norm(const Matrix& g, Real step = 0.005) {
  Real best = std::numeric_limits<Real>::infinity();
  const int steps = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const Real a = i / Real(steps), b = j / Real(steps);
      best = std::min(best, (a * g.col(0) + b * g.col(1) + (1 - a - b) * g.col(2)).squaredNorm());
    }
  }
  return best;
}

inline Matrix normal_matrix(Rng& rng, Index r, Index c) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace vcguard::oracle

#endif  // VCGUARD_TESTS_ORACLES_HPP
