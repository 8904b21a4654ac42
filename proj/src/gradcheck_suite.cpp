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

#include "vcguard/gradcheck_suite.hpp"

#include "vcguard/autodiff.hpp"
#include "vcguard/dsp_mel.hpp"
#include "vcguard/encoder.hpp"
#include "vcguard/mgda.hpp"
#include "vcguard/synth.hpp"

#include <cmath>
#include <functional>

namespace vcguard {

namespace {

using ad::Tape;
using ad::Var;

constexpr Real kCoreStep = 1e-4;
constexpr Real kStackStep = 1e-5;
constexpr std::size_t kStackCoords = 48;

Matrix random_matrix(Rng& rng, Index r, Index c, Real lo = -1, Real hi = 1) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

// Values pushed at least `gap` away from each kink.
Matrix away_from(Matrix m, std::initializer_list<Real> kinks, Real gap) {
  for (Index i = 0; i < m.size(); ++i) {
    for (Real k : kinks) {
      Real& v = m.data()[i];
      if (std::abs(v - k) < gap) v = v >= k ? k + gap : k - gap;
    }
  }
  return m;
}

// Contracts an op's output with fixed random weights so every Jacobian row
// contributes to the checked scalar.
Var contract(Var y, std::uint64_t seed) {
  Rng rng(seed);
  return ad::sum(ad::mul(y, y.tape().constant(random_matrix(rng, y.rows(), y.cols()))));
}

std::vector<Index> sample_coords(Rng& rng, Index n, std::size_t count) {
  std::vector<Index> coords;
  for (std::size_t i = 0; i < count; ++i) coords.push_back(static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n)));
  return coords;
}

}  // namespace

std::vector<GradCheckEntry> run_gradcheck_suite(std::uint64_t seed) {
  std::vector<GradCheckEntry> out;
  Rng rng(seed);

  auto core = [&](const std::string& name, const Matrix& x, const ad::ScalarFunction& f) {
    const auto r = ad::grad_check(f, x, kCoreStep);
    out.push_back({name, "core", r.max_rel_error, kCoreGradTolerance, r.finite && r.max_rel_error <= kCoreGradTolerance});
  };
  auto stack = [&](const std::string& name, const Matrix& x, const ad::ScalarFunction& f) {
    const auto coords = sample_coords(rng, x.size(), kStackCoords);
    const auto r = ad::grad_check(f, x, kStackStep, coords);
    out.push_back({name, "stack", r.max_rel_error, kStackGradTolerance, r.finite && r.max_rel_error <= kStackGradTolerance});
  };

  // Binary ops take a stacked [a; b] input split with frame_gather, which
  // checks both operands and the gather itself.
  const Index n = 8;
  auto binary = [&](const std::string& name, std::function<Var(Var, Var)> op, const Matrix& ab) {
    core(name, ab, [op, n](Tape&, Var x) {
      return contract(op(ad::frame_gather(x, 0, n), ad::frame_gather(x, n, n)), 11);
    });
  };
  auto unary = [&](const std::string& name, std::function<Var(Var)> op, const Matrix& x) {
    core(name, x, [op](Tape&, Var v) { return contract(op(v), 12); });
  };
  auto scalar_valued = [&](const std::string& name, std::function<Var(Var)> op, const Matrix& x) {
    core(name, x, [op](Tape&, Var v) { return op(v); });
  };

  binary("add", ad::add, random_matrix(rng, 2 * n, 1));
  binary("sub", ad::sub, random_matrix(rng, 2 * n, 1));
  binary("mul", ad::mul, random_matrix(rng, 2 * n, 1));
  binary("l1_distance", [](Var a, Var b) { return ad::l1_distance(a, b); },
         away_from(random_matrix(rng, 2 * n, 1, 0.1, 1.0), {}, 0).cwiseProduct(
             (Matrix(2 * n, 1) << Matrix::Ones(n, 1), -Matrix::Ones(n, 1)).finished()));
  binary("dot", ad::dot, random_matrix(rng, 2 * n, 1));
  binary("cosine_similarity", ad::cosine_similarity, random_matrix(rng, 2 * n, 1));
  unary("scale", [](Var a) { return ad::scale(a, -1.7); }, random_matrix(rng, n, 3));
  unary("add_scalar", [](Var a) { return ad::add_scalar(a, 0.3); }, random_matrix(rng, n, 3));
  unary("square", ad::square, random_matrix(rng, n, 3));
  unary("sqrt_eps", [](Var a) { return ad::sqrt_eps(a); }, random_matrix(rng, n, 3, 0.1, 2.0));
  unary("abs", ad::abs, away_from(random_matrix(rng, n, 3), {0.0}, 1e-2));
  unary("log_floor", [](Var a) { return ad::log_floor(a); }, random_matrix(rng, n, 3, 0.1, 2.0));
  unary("relu", ad::relu, away_from(random_matrix(rng, n, 3), {0.0}, 1e-2));
  unary("clamp_minmax", [](Var a) { return ad::clamp_minmax(a, -0.5, 0.5); },
        away_from(random_matrix(rng, n, 3), {-0.5, 0.5}, 1e-2));
  unary("floor_below_max", [](Var a) { return ad::floor_below_max(a, 1.0); },
        away_from(random_matrix(rng, n, 3, -2.0, 2.0), {-2.0 + 1.0}, 5e-2));
  unary("l2_normalize", ad::l2_normalize, random_matrix(rng, n, 1));
  unary("mean_rows", ad::mean_rows, random_matrix(rng, n, 3));
  unary("frames", [](Var a) { return ad::frames(a, 5, 3, 4); }, random_matrix(rng, 11, 1));
  unary("zero_pad", [](Var a) { return ad::zero_pad(a, 12); }, random_matrix(rng, n, 1));
  unary("complex_power", [](Var a) { return ad::complex_power(a, 2); }, random_matrix(rng, n, 4));
  scalar_valued("mean", ad::mean, random_matrix(rng, n, 3));
  scalar_valued("sum", ad::sum, random_matrix(rng, n, 3));
  scalar_valued("l2_norm", ad::l2_norm, random_matrix(rng, n, 3));
  {
    // 6x4 * 4x3 * 3x2 chain, differentiated w.r.t. the left factor and the middle factor.
    const Matrix b = random_matrix(rng, 4, 3);
    const Matrix c = random_matrix(rng, 3, 2);
    core("matmul", random_matrix(rng, 6, 4), [b, c](Tape& t, Var a) {
      return contract(ad::matmul(ad::matmul(a, t.constant(b)), t.constant(c)), 13);
    });
    const Matrix a = random_matrix(rng, 6, 4);
    core("matmul_rhs", b, [a, c](Tape& t, Var bv) {
      return contract(ad::matmul(ad::matmul(t.constant(a), bv), t.constant(c)), 14);
    });
  }

  const int sr = 16000;
  const auto clips = toy_corpus(1, seed, sr, 0.2, 0.2);
  const Vector speech = clips.front().samples;

  {
    MelConfig small;
    small.n_fft = 256;
    small.hop_length = 64;
    small.n_mels = 20;
    small.sample_rate_hz = sr;
    const Vector clean = speech.head(256);
    const Matrix ref = mel_db(clean, small).values;
    const Matrix x = clean + uniform_vector(rng, 256, 0.01);
    const auto r = ad::grad_check(
        [small, ref](Tape& t, Var v) { return ad::l1_distance(mel_db(v, small), t.constant(ref), ad::Reduction::Mean); },
        x, kStackStep);
    out.push_back({"mel_db_l1", "stack", r.max_rel_error, kStackGradTolerance,
                   r.finite && r.max_rel_error <= kStackGradTolerance});
  }

  const Vector clean2048 = speech.head(2048);
  const auto clean_mels = multi_scale_mel(clean2048, sr);
  std::array<Matrix, 3> mel_refs = {clean_mels[0].values, clean_mels[1].values, clean_mels[2].values};
  const Vector delta2048 = uniform_vector(rng, 2048, 0.02);
  stack("multi_scale_mel_l1", delta2048, [clean2048, mel_refs, sr](Tape& t, Var d) {
    std::array<Var, 3> refs = {t.constant(mel_refs[0]), t.constant(mel_refs[1]), t.constant(mel_refs[2])};
    return multi_scale_mel_l1(ad::add(t.constant(clean2048), d), refs, sr);
  });

  const SpeakerEncoder encoder(seed);
  const Vector clean1200 = speech.head(1200);
  const Embedding target = encoder.embed(clean1200, sr);
  stack("encoder_cosine", uniform_vector(rng, 1200, 0.02), [&encoder, clean1200, target, sr](Tape& t, Var d) {
    Var e = encoder.embed(ad::add(t.constant(clean1200), d), sr);
    return ad::cosine_similarity(e, t.constant(target.vector.transpose()));
  });

  {
    AudioClip clip{clean1200, sr, "gradcheck"};
    const TaskTarget repel{LossMode::RepelOriginal, target};
    stack("stage1_task_loss", uniform_vector(rng, 1100, 0.05),
          [&encoder, clip, repel](Tape&, Var d) { return task_loss(d, clip, repel, encoder); });
  }

  {
    const Embedding out_ref = encoder.embed(clean2048, sr);
    stack("stage2_total", delta2048, [&encoder, clean2048, mel_refs, out_ref, sr](Tape& t, Var d) {
      Var adv = ad::add(t.constant(clean2048), d);
      std::array<Var, 3> refs = {t.constant(mel_refs[0]), t.constant(mel_refs[1]), t.constant(mel_refs[2])};
      Var l_ref = multi_scale_mel_l1(adv, refs, sr);
      Var l_out = ad::add_scalar(ad::dot(encoder.model_output_proxy(adv, sr), t.constant(out_ref.vector.transpose())), 1.0);
      return ad::add(ad::scale(l_ref, 0.4 * 7.0 / 200.0), ad::scale(l_out, 0.6 / 600.0));
    });
  }
  return out;
}

}  // namespace vcguard
