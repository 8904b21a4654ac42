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

#include "vcguard/mgda.hpp"

#include "vcguard/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vcguard {

bool SimplexWeights::valid(Real tol) const {
  if (alpha.size() == 0) return false;
  if ((alpha.array() < 0).any()) return false;
  return std::abs(alpha.sum() - 1.0) <= tol;
}

Vector min_norm_two(const Eigen::Ref<const Vector>& g1, const Eigen::Ref<const Vector>& g2) {
  const Vector diff = g1 - g2;
  const Real denom = diff.squaredNorm();
  Vector alpha(2);
  if (denom == 0) {
    alpha << 0.5, 0.5;
    return alpha;
  }
  const Real gamma = std::clamp((g2 - g1).dot(g2) / denom, 0.0, 1.0);
  alpha << gamma, 1.0 - gamma;
  return alpha;
}

Vector frank_wolfe_simplex(const Eigen::Ref<const Matrix>& gram, int max_iterations, Real tol,
                           int* iterations_used) {
  const Index n = gram.rows();
  if (n == 0 || gram.cols() != n) throw Error("frank_wolfe_simplex: gram matrix must be square and non-empty");
  Index start = 0;
  gram.diagonal().minCoeff(&start);
  Vector alpha = Vector::Zero(n);
  alpha[start] = 1.0;

  Vector g_alpha = gram.col(start);  // G * alpha
  Real value = alpha.dot(g_alpha);
  int it = 0;
  for (; it < max_iterations; ++it) {
    Index fw = 0;
    g_alpha.minCoeff(&fw);
    Index away = -1;
    for (Index i = 0; i < n; ++i) {
      if (alpha[i] > 0 && (away < 0 || g_alpha[i] > g_alpha[away])) away = i;
    }
    const Real fw_gap = value - g_alpha[fw];
    const Real away_gap = g_alpha[away] - value;
    if (std::max(fw_gap, away_gap) <= 0) break;

    // Direction d and the largest feasible step along it.
    Vector d;
    Real max_step;
    if (fw_gap >= away_gap) {
      d = -alpha;
      d[fw] += 1.0;
      max_step = 1.0;
    } else {
      d = alpha;
      d[away] -= 1.0;
      max_step = alpha[away] / (1.0 - alpha[away]);
    }
    const Vector g_d = gram * d;
    const Real curvature = d.dot(g_d);
    const Real slope = d.dot(g_alpha);
    Real step = curvature > 0 ? -slope / curvature : max_step;
    step = std::clamp(step, 0.0, max_step);

    alpha += step * d;
    alpha = alpha.cwiseMax(0.0);
    alpha /= alpha.sum();
    g_alpha = gram * alpha;
    const Real next = alpha.dot(g_alpha);
    const Real improvement = value - next;
    value = next;
    if (improvement < tol) {
      ++it;
      break;
    }
  }
  if (iterations_used) *iterations_used = it;
  return alpha;
}

MinNormResult min_norm_point(const Eigen::Ref<const Matrix>& gradients) {
  const Index n = gradients.cols();
  if (n < 1) throw Error("min_norm_point: need at least one gradient");
  if (!gradients.allFinite()) throw Error("min_norm_point: non-finite gradient");
  MinNormResult r;
  if (n == 1) {
    r.weights.alpha = Vector::Ones(1);
  } else if (n == 2) {
    r.weights.alpha = min_norm_two(gradients.col(0), gradients.col(1));
    r.iterations = 1;
  } else {
    const Matrix gram = gradients.transpose() * gradients;
    r.weights.alpha = frank_wolfe_simplex(gram, 200, 1e-9, &r.iterations);
  }
  r.combined = gradients * r.weights.alpha;
  return r;
}

void Stage1Config::validate() const {
  if (!(epsilon > 0)) throw Error("stage1: epsilon must be positive");
  if (!(init_range > 0 && init_range <= epsilon)) throw Error("stage1: need 0 < init_range <= epsilon");
  if (iterations < 1) throw Error("stage1: iterations must be at least 1");
  if (!(learning_rate > 0)) throw Error("stage1: learning_rate must be positive");
  if (loss_mode == LossMode::AttractDecoy && !decoy) throw Error("stage1: attract mode needs a decoy embedding");
}

TaskTarget make_task_target(const AudioClip& clip, const Stage1Config& cfg, const SpeakerEncoder& encoder) {
  if (cfg.loss_mode == LossMode::AttractDecoy) {
    if (!cfg.decoy) throw Error("stage1: attract mode needs a decoy embedding");
    return {LossMode::AttractDecoy, *cfg.decoy};
  }
  return {LossMode::RepelOriginal, encoder.embed(clip)};
}

ad::Var task_loss(ad::Var delta, const AudioClip& clip, const TaskTarget& target, const SpeakerEncoder& encoder) {
  ad::Tape& tape = delta.tape();
  const Index n = clip.size();
  if (n < SpeakerEncoder::kMinSamples) {
    throw Error("clip '" + clip.id + "' has " + std::to_string(n) + " samples, below the encoder minimum");
  }
  ad::Var applied = delta.rows() >= n ? ad::frame_gather(delta, 0, n) : ad::zero_pad(delta, n);
  ad::Var x = ad::add(tape.constant(clip.samples), applied);
  ad::Var e = encoder.embed(x, clip.sample_rate_hz);
  ad::Var ref = tape.constant(target.reference.vector.transpose());
  ad::Var cos = ad::dot(e, ref);
  if (target.mode == LossMode::RepelOriginal) return cos;
  return ad::add_scalar(ad::scale(cos, -1.0), 1.0);
}

TaskEvaluation evaluate_task(const Vector& delta, const AudioClip& clip, const TaskTarget& target,
                             const SpeakerEncoder& encoder) {
  ad::Tape tape;
  ad::Var d = tape.leaf(delta);
  ad::Var loss = task_loss(d, clip, target, encoder);
  tape.backward(loss);
  return {loss.scalar(), tape.grad(d).col(0)};
}

AudioClip apply_perturbation(const AudioClip& clip, const Vector& delta) {
  AudioClip out = clip;
  const Index n = std::min(clip.size(), delta.size());
  out.samples.head(n) += delta.head(n);
  return out;
}

Stage1Result generate_universal(std::span<const AudioClip> batch, const Stage1Config& cfg,
                                const SpeakerEncoder& encoder, int workers) {
  cfg.validate();
  if (batch.empty()) throw Error("stage1: empty batch");
  Index length = batch.front().size();
  for (const AudioClip& c : batch) {
    c.validate();
    if (c.sample_rate_hz != batch.front().sample_rate_hz) {
      throw Error("stage1: mixed sample rates in batch ('" + batch.front().id + "' vs '" + c.id + "')");
    }
    length = std::min(length, c.size());
  }

  std::vector<TaskTarget> targets(batch.size());
  parallel_for(batch.size(), workers, [&](std::size_t i) { targets[i] = make_task_target(batch[i], cfg, encoder); });

  Rng rng(cfg.seed);
  Stage1Result result;
  result.perturbation.epsilon = cfg.epsilon;
  Vector& delta = result.perturbation.delta;
  delta = uniform_vector(rng, length, cfg.init_range);

  const std::size_t n = batch.size();
  Matrix grads(length, static_cast<Index>(n));
  std::vector<Real> losses(n);
  for (int t = 1; t <= cfg.iterations; ++t) {
    try {
      parallel_for(n, workers, [&](std::size_t i) {
        TaskEvaluation ev = evaluate_task(delta, batch[i], targets[i], encoder);
        losses[i] = ev.loss;
        grads.col(static_cast<Index>(i)) = ev.gradient;
      });
    } catch (const Error& e) {
      throw Error("stage1: iteration " + std::to_string(t) + ": " + e.what());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(losses[i])) {
        throw Error("stage1: non-finite loss for clip '" + batch[i].id + "' at iteration " + std::to_string(t));
      }
    }
    const MinNormResult mgda = min_norm_point(grads);
    Stage1Record rec;
    rec.iteration = t;
    rec.losses = losses;
    rec.alpha = mgda.weights.alpha;
    for (std::size_t i = 0; i < n; ++i) rec.total += rec.alpha[static_cast<Index>(i)] * losses[i];
    delta = project_linf(delta - cfg.learning_rate * mgda.combined, cfg.epsilon);
    rec.linf = result.perturbation.linf();
    result.trace.push_back(std::move(rec));
    result.deltas.push_back(delta);
  }
  return result;
}

}  // namespace vcguard
