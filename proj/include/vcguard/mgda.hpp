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

#ifndef VCGUARD_MGDA_HPP
#define VCGUARD_MGDA_HPP

// Universal perturbation for a batch of clips: one loss per clip, combined by
// the minimum-norm point of the per-clip gradients (MGDA), followed by a
// projected step onto the L-infinity ball.

#include "vcguard/audio_io.hpp"
#include "vcguard/autodiff.hpp"
#include "vcguard/encoder.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace vcguard {

struct SimplexWeights {
  Vector alpha;

  // alpha_i >= 0 and |sum - 1| <= tol.
  bool valid(Real tol = 1e-9) const;
};

struct MinNormResult {
  SimplexWeights weights;
  Vector combined;
  int iterations = 0;
};

// Closed form for two vectors. Returns (gamma, 1 - gamma); equal vectors give
// (0.5, 0.5).
Vector min_norm_two(const Eigen::Ref<const Vector>& g1, const Eigen::Ref<const Vector>& g2);

// Frank-Wolfe with away steps on min_a a^T G a over the simplex, started at
// the shortest vertex. Stops when an iteration improves the squared norm by
// less than `tol` or after `max_iterations`.
Vector frank_wolfe_simplex(const Eigen::Ref<const Matrix>& gram, int max_iterations = 200, Real tol = 1e-9,
                           int* iterations_used = nullptr);

// Columns of `gradients` are the per-task gradients.
MinNormResult min_norm_point(const Eigen::Ref<const Matrix>& gradients);

inline Vector project_linf(const Eigen::Ref<const Vector>& v, Real epsilon) {
  return v.cwiseMax(-epsilon).cwiseMin(epsilon);
}

enum class LossMode { RepelOriginal, AttractDecoy };

struct Stage1Config {
  Real epsilon = 0.15;
  Real init_range = 0.1;
  int iterations = 60;
  Real learning_rate = 0.01;
  LossMode loss_mode = LossMode::RepelOriginal;
  std::optional<Embedding> decoy;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Perturbation {
  Vector delta;
  Real epsilon = 0;

  Real linf() const { return delta.size() ? delta.cwiseAbs().maxCoeff() : 0.0; }
};

// Per-clip target: the clip's clean embedding (repel) or the decoy (attract).
struct TaskTarget {
  LossMode mode = LossMode::RepelOriginal;
  Embedding reference;
};

TaskTarget make_task_target(const AudioClip& clip, const Stage1Config& cfg, const SpeakerEncoder& encoder);

// Repel: cos(embed(x + delta), reference). Attract: 1 - cos(embed(x + delta), reference).
// delta covers the first min(|delta|, |x|) samples of the clip.
ad::Var task_loss(ad::Var delta, const AudioClip& clip, const TaskTarget& target, const SpeakerEncoder& encoder);

struct TaskEvaluation {
  Real loss = 0;
  Vector gradient;
};

TaskEvaluation evaluate_task(const Vector& delta, const AudioClip& clip, const TaskTarget& target,
                             const SpeakerEncoder& encoder);

struct Stage1Record {
  int iteration = 0;
  std::vector<Real> losses;  // at the start of the iteration
  Vector alpha;
  Real total = 0;  // sum alpha_i * loss_i
  Real linf = 0;   // after the projected update
};

struct Stage1Result {
  Perturbation perturbation;
  std::vector<Stage1Record> trace;
  std::vector<Vector> deltas;  // delta after each iteration
};

// The batch must be non-empty with a single sample rate; delta has the
// length of the shortest clip.
Stage1Result generate_universal(std::span<const AudioClip> batch, const Stage1Config& cfg,
                                const SpeakerEncoder& encoder, int workers = 1);

// Clip with delta added to its first min(|delta|, |clip|) samples.
AudioClip apply_perturbation(const AudioClip& clip, const Vector& delta);

}  // namespace vcguard

#endif  // VCGUARD_MGDA_HPP
