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

#include "vcguard/refiner.hpp"

#include "vcguard/dsp_mel.hpp"
#include "vcguard/parallel.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace vcguard {

namespace {

// Values from the published per-model settings.
constexpr RefinePreset kPresets[] = {
    {"yourtts", 7.0 / 200.0, 1.0 / 600.0, {SaveStrategyKind::Final, 1.65, 30}},
    {"xtts", 1.0 / 100.0, 3.0 / 1000.0, {SaveStrategyKind::MinOutUnderRefThreshold, 1.65, 30}},
    {"indextts", 3.0 / 25.0, 13.0 / 100.0, {SaveStrategyKind::MinOutLastK, 1.65, 30}},
};

}  // namespace

void RefineConfig::validate() const {
  if (steps < 1) throw Error("stage2: steps must be at least 1");
  if (!(learning_rate > 0)) throw Error("stage2: learning_rate must be positive");
  if (scheduler_step < 1) throw Error("stage2: scheduler_step must be at least 1");
  if (!(scheduler_gamma > 0 && scheduler_gamma <= 1)) throw Error("stage2: need 0 < scheduler_gamma <= 1");
  if (buffer_size < 1) throw Error("stage2: buffer_size must be at least 1");
  if (!(coeff_ref > 0 && coeff_out > 0)) throw Error("stage2: coefficients must be positive");
  if (save.kind == SaveStrategyKind::MinOutLastK && save.last_k < 1) throw Error("stage2: last_k must be at least 1");
  if (clip_epsilon && !(*clip_epsilon > 0)) throw Error("stage2: clip_epsilon must be positive");
}

Real RefineConfig::lr_at(int t) const { return learning_rate * std::pow(scheduler_gamma, t / scheduler_step); }

std::span<const RefinePreset> refine_presets() { return kPresets; }

const RefinePreset& refine_preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p;
  }
  throw Error("unknown stage2 preset '" + name + "'");
}

DynamicWeights dynamic_weights(Real l_ref, Real l_out, const LossBuffers& buffers, std::size_t c) {
  if (c >= buffers.ref.size() || c >= buffers.out.size()) throw Error("dynamic_weights: buffer index out of range");
  if (!(buffers.ref[c] > 0 && buffers.out[c] > 0)) return {};
  const Real a = l_ref / buffers.ref[c];
  const Real b = l_out / buffers.out[c];
  const Real m = std::max(a, b);
  const Real ea = std::exp(a - m);
  const Real eb = std::exp(b - m);
  return {ea / (ea + eb), eb / (ea + eb)};
}

int select_snapshot(std::span<const RefineStep> trace, const SaveStrategy& strategy) {
  if (trace.empty()) throw Error("select_snapshot: empty trace");
  const int last = trace.back().t;
  auto argmin_out = [&](std::size_t from, auto&& accept) {
    int best = -1;
    Real best_out = std::numeric_limits<Real>::infinity();
    for (std::size_t i = from; i < trace.size(); ++i) {
      if (accept(trace[i]) && trace[i].l_out < best_out) {
        best_out = trace[i].l_out;
        best = trace[i].t;
      }
    }
    return best;
  };
  switch (strategy.kind) {
    case SaveStrategyKind::Final:
      return last;
    case SaveStrategyKind::MinOutUnderRefThreshold: {
      const int best = argmin_out(0, [&](const RefineStep& s) { return s.l_ref < strategy.threshold; });
      return best < 0 ? last : best;
    }
    case SaveStrategyKind::MinOutLastK: {
      const std::size_t k = static_cast<std::size_t>(std::max(1, strategy.last_k));
      const std::size_t from = trace.size() > k ? trace.size() - k : 0;
      return argmin_out(from, [](const RefineStep&) { return true; });
    }
  }
  return last;
}

RefineResult refine(const AudioClip& x, const AudioClip& x_adv, const RefineConfig& cfg, const SpeakerEncoder& encoder) {
  cfg.validate();
  x.validate();
  x_adv.validate();
  if (x.size() != x_adv.size()) {
    throw Error("stage2: length mismatch for '" + x.id + "' (" + std::to_string(x.size()) + " vs " +
                std::to_string(x_adv.size()) + ")");
  }
  if (x.sample_rate_hz != x_adv.sample_rate_hz) throw Error("stage2: sample rate mismatch for '" + x.id + "'");
  const int sr = x.sample_rate_hz;

  std::array<Matrix, 3> clean_mels;
  {
    const auto mels = multi_scale_mel(x.samples, sr);
    for (int s = 0; s < 3; ++s) clean_mels[s] = mels[s].values;
  }
  const Embedding clean_out = encoder.model_output_proxy(x);

  RefineResult result;
  result.initial_delta = x_adv.samples - x.samples;
  Vector delta = result.initial_delta;
  LossBuffers buffers(cfg.buffer_size);
  const bool keep_snapshots = cfg.save.kind != SaveStrategyKind::Final;
  std::vector<Vector> snapshots;

  for (int t = 1; t <= cfg.steps; ++t) {
    RefineStep step;
    step.t = t;
    step.buffer_index = static_cast<std::size_t>(t % cfg.buffer_size);
    const std::size_t c = step.buffer_index;

    ad::Tape tape;
    ad::Var d = tape.leaf(delta);
    ad::Var adv = ad::add(tape.constant(x.samples), d);
    std::array<ad::Var, 3> ref;
    for (int s = 0; s < 3; ++s) ref[s] = tape.constant(clean_mels[s]);
    ad::Var l_ref = multi_scale_mel_l1(adv, ref, sr);
    ad::Var proxy = encoder.model_output_proxy(adv, sr);
    ad::Var l_out = ad::add_scalar(ad::dot(proxy, tape.constant(clean_out.vector.transpose())), 1.0);
    step.l_ref = l_ref.scalar();
    step.l_out = l_out.scalar();
    if (!std::isfinite(step.l_ref) || !std::isfinite(step.l_out)) {
      throw Error("stage2: non-finite loss for '" + x.id + "' at step " + std::to_string(t));
    }
    step.scaled_ref = cfg.coeff_ref * step.l_ref;
    step.scaled_out = cfg.coeff_out * step.l_out;
    step.buffer_ref_read = buffers.ref[c];
    step.buffer_out_read = buffers.out[c];
    const DynamicWeights w = dynamic_weights(step.scaled_ref, step.scaled_out, buffers, c);
    step.w_ref = w.ref;
    step.w_out = w.out;
    // The weights are constants for the gradient step.
    ad::Var total = ad::add(ad::scale(l_ref, w.ref * cfg.coeff_ref), ad::scale(l_out, w.out * cfg.coeff_out));
    step.total = total.scalar();
    tape.backward(total);

    if (keep_snapshots) snapshots.push_back(delta);
    step.lr = cfg.lr_at(t);
    delta -= step.lr * tape.grad(d).col(0);
    if (cfg.clip_epsilon) {
      const Real eps = *cfg.clip_epsilon;
      step.projected = (delta.array().abs() > eps).any();
      delta = delta.cwiseMax(-eps).cwiseMin(eps);
    }
    buffers.ref[c] = step.scaled_ref;
    buffers.out[c] = step.scaled_out;
    result.trace.push_back(step);
  }

  result.selected_step = select_snapshot(result.trace, cfg.save);
  if (cfg.save.kind == SaveStrategyKind::Final) {
    result.delta = std::move(delta);
  } else {
    result.delta = snapshots[static_cast<std::size_t>(result.selected_step - 1)];
  }
  return result;
}

std::vector<RefineOutcome> refine_batch(std::span<const CleanAdvPair> pairs, const RefineConfig& cfg,
                                        const SpeakerEncoder& encoder, int workers) {
  std::vector<RefineOutcome> outcomes(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    try {
      outcomes[i].result = refine(pairs[i].first, pairs[i].second, cfg, encoder);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });
  return outcomes;
}

}  // namespace vcguard
