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

#include "oracles.hpp"
#include "support.hpp"
#include "vcguard/mgda.hpp"
#include "vcguard/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

using namespace vcguard;

TEST_CASE("single task gets weight one") {
  Matrix g(3, 1);
  g << 1, 2, 3;
  const MinNormResult r = min_norm_point(g);
  CHECK(r.weights.alpha.size() == 1);
  CHECK(r.weights.alpha[0] == 1.0);
  CHECK(r.combined == g.col(0));
}

TEST_CASE("two-task closed form") {
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(min_norm_two(a, b).isApprox(Vector::Constant(2, 0.5)));
  CHECK(min_norm_two(a, a) == Vector::Constant(2, 0.5));
  Vector c(2);
  c << 2, 0;
  // a lies on the segment's short end: all weight on a.
  CHECK(min_norm_two(a, c)[0] == doctest::Approx(1.0));
  Matrix opp(2, 2);
  opp.col(0) = a;
  opp.col(1) = -a;
  CHECK(min_norm_point(opp).combined.norm() == doctest::Approx(0.0));
}

TEST_CASE("Frank-Wolfe agrees with the closed form for two tasks") {
  Rng rng(1);
  for (int d = 0; d < 300; ++d) {
    const Matrix g = oracle::normal_matrix(rng, 6, 2);
    const Vector closed = min_norm_two(g.col(0), g.col(1));
    const Vector fw = frank_wolfe_simplex(g.transpose() * g);
    CHECK((closed - fw).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("three tasks match a simplex grid search") {
  Rng rng(2);
  for (int d = 0; d < 40; ++d) {
    const Matrix g = oracle::normal_matrix(rng, 5, 3);
    const MinNormResult r = min_norm_point(g);
    CHECK(r.combined.squaredNorm() <= oracle::grid_min_sq_norm(g) + 1e-3);
    CHECK(std::abs(r.combined.squaredNorm() - oracle::grid_min_sq_norm(g)) <= 1e-3);
  }
}

TEST_CASE("simplex constraints and norm dominance on random draws") {
  Rng rng(3);
  for (int d = 0; d < 1000; ++d) {
    const Index n = 1 + static_cast<Index>(rng.next_u64() % 6);
    const Matrix g = oracle::normal_matrix(rng, 1 + static_cast<Index>(rng.next_u64() % 10), n);
    const MinNormResult r = min_norm_point(g);
    CHECK(r.weights.valid(1e-9));
    CHECK(r.weights.alpha.minCoeff() >= 0.0);
    CHECK(std::abs(r.weights.alpha.sum() - 1.0) <= 1e-9);
    CHECK(r.combined.norm() <= g.colwise().norm().minCoeff() + 1e-9);
    CHECK((g * r.weights.alpha - r.combined).norm() <= 1e-12);
  }
}

TEST_CASE("non-finite gradients are rejected") {
  Matrix g = Matrix::Ones(3, 2);
  g(1, 1) = std::numeric_limits<Real>::quiet_NaN();
  CHECK_THROWS_AS(min_norm_point(g), Error);
}

TEST_CASE("linf projection") {
  Vector v(4);
  v << -0.3, 0.1, 0.2, -0.05;
  Vector expected(4);
  expected << -0.15, 0.1, 0.15, -0.05;
  CHECK(project_linf(v, 0.15) == expected);
}

TEST_CASE("stage 1 config validation") {
  Stage1Config c;
  c.epsilon = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = Stage1Config{};
  c.loss_mode = LossMode::AttractDecoy;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("stage 1 stays inside the bound and is deterministic") {
  const auto clips = toy_corpus(3, 21, 16000, 0.3, 0.5);
  const SpeakerEncoder enc(1234);
  Stage1Config cfg;
  cfg.iterations = 6;
  cfg.learning_rate = 0.1;
  cfg.seed = 8;
  const Stage1Result a = generate_universal(clips, cfg, enc);
  const Stage1Result b = generate_universal(clips, cfg, enc, 3);
  Index shortest = clips[0].size();
  for (const auto& c : clips) shortest = std::min(shortest, c.size());
  CHECK(a.perturbation.delta.size() == shortest);
  REQUIRE(a.deltas.size() == 6);
  for (std::size_t t = 0; t < a.deltas.size(); ++t) {
    CHECK(a.deltas[t].cwiseAbs().maxCoeff() <= cfg.epsilon);
    CHECK(a.deltas[t] == b.deltas[t]);
    CHECK(a.trace[t].linf <= cfg.epsilon);
    CHECK(a.trace[t].alpha == b.trace[t].alpha);
    CHECK(a.trace[t].losses == b.trace[t].losses);
  }
}

TEST_CASE("batch of one is projected gradient descent on the cosine") {
  const AudioClip clip = toy_corpus(1, 5, 16000, 0.4, 0.4).front();
  const SpeakerEncoder enc(1234);
  Stage1Config cfg;
  cfg.iterations = 4;
  cfg.learning_rate = 0.05;
  cfg.seed = 17;
  const Stage1Result r = generate_universal(std::span(&clip, 1), cfg, enc);

  // Independent loop: cosine of the embedding of x + delta to the clean one.
  const Embedding clean = enc.embed(clip);
  Rng rng(cfg.seed);
  Vector delta = uniform_vector(rng, clip.size(), cfg.init_range);
  for (int t = 0; t < cfg.iterations; ++t) {
    ad::Tape tape;
    ad::Var d = tape.leaf(delta);
    ad::Var e = enc.embed(ad::add(tape.constant(clip.samples), d), clip.sample_rate_hz);
    ad::Var loss = ad::cosine_similarity(e, tape.constant(clean.vector.transpose()));
    tape.backward(loss);
    CHECK(r.trace[t].alpha.size() == 1);
    CHECK(r.trace[t].alpha[0] == 1.0);
    CHECK(r.trace[t].losses[0] == doctest::Approx(loss.scalar()).epsilon(1e-12));
    delta = project_linf(delta - cfg.learning_rate * Vector(tape.grad(d)), cfg.epsilon);
    CHECK((r.deltas[t] - delta).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("stage 1 lowers the mean loss on a seeded toy batch") {
  // Four one-second speakers, T = 60, step 0.5 * epsilon.
  const auto clips = toy_corpus(4, 100, 16000, 1.0, 1.0);
  const SpeakerEncoder enc(1234);
  Stage1Config cfg;
  cfg.learning_rate = 0.5 * cfg.epsilon;
  cfg.seed = 100;
  const Stage1Result r = generate_universal(clips, cfg, enc);
  auto mean = [](const std::vector<Real>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  const Real first = mean(r.trace.front().losses);
  const Real last = mean(r.trace.back().losses);
  CHECK(last < first);
  // Frozen from the first run of this scenario.
  CHECK(first == doctest::Approx(0.30319038165283413).epsilon(1e-6));
  CHECK(last == doctest::Approx(0.23196679973837964).epsilon(1e-6));
}

TEST_CASE("attract mode pulls toward the decoy") {
  const auto clips = toy_corpus(2, 31, 16000, 0.4, 0.4);
  const SpeakerEncoder enc(1234);
  Stage1Config cfg;
  cfg.iterations = 8;
  cfg.learning_rate = 0.075;
  cfg.loss_mode = LossMode::AttractDecoy;
  cfg.decoy = enc.embed(toy_corpus(3, 77, 16000, 0.5, 0.5).back());
  const Stage1Result r = generate_universal(clips, cfg, enc);
  CHECK(r.trace.back().total < r.trace.front().total);
  for (const auto& l : r.trace.front().losses) CHECK(l >= 0.0);
}

TEST_CASE("batch errors") {
  const SpeakerEncoder enc(1);
  Stage1Config cfg;
  cfg.iterations = 1;
  std::vector<AudioClip> mixed = {AudioClip{test::random_signal(1, 2000), 16000, "a"},
                                  AudioClip{test::random_signal(2, 2000), 22050, "b"}};
  CHECK_THROWS_WITH_AS(generate_universal(mixed, cfg, enc), doctest::Contains("mixed sample rates"), Error);
  std::vector<AudioClip> tiny = {AudioClip{test::random_signal(1, 100), 16000, "t"}};
  CHECK_THROWS_AS(generate_universal(tiny, cfg, enc), Error);
  CHECK_THROWS_AS(generate_universal(std::span<const AudioClip>(), cfg, enc), Error);
}

TEST_CASE("perturbation covers the first samples only") {
  const AudioClip clip{Vector::Zero(6), 16000, "c"};
  Vector d(4);
  d << 1, 2, 3, 4;
  const AudioClip out = apply_perturbation(clip, d);
  Vector expected(6);
  expected << 1, 2, 3, 4, 0, 0;
  CHECK(out.samples == expected);
  const AudioClip short_clip{Vector::Zero(2), 16000, "s"};
  CHECK(apply_perturbation(short_clip, d).samples == d.head(2));
}
