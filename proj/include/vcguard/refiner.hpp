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

#ifndef VCGUARD_REFINER_HPP
#define VCGUARD_REFINER_HPP

// Per-clip refinement of a universal perturbation in the multi-resolution mel
// domain. Each step balances a reference loss (mel distance to the clean clip)
// against an output loss (proxy-model similarity to the clean clip, shifted
// by +1 so it is non-negative) with softmax weights computed from a ring
// buffer of earlier losses. Plain gradient descent with step decay; no
// L-infinity projection unless `clip_epsilon` is set.

#include "vcguard/audio_io.hpp"
#include "vcguard/encoder.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vcguard {

enum class SaveStrategyKind { Final, MinOutUnderRefThreshold, MinOutLastK };

struct SaveStrategy {
  SaveStrategyKind kind = SaveStrategyKind::Final;
  Real threshold = 1.65;
  int last_k = 30;

  static SaveStrategy final_step() { return {}; }
  static SaveStrategy min_out_under_ref(Real tau) { return {SaveStrategyKind::MinOutUnderRefThreshold, tau, 30}; }
  static SaveStrategy min_out_last_k(int k) { return {SaveStrategyKind::MinOutLastK, 1.65, k}; }
};

struct RefineConfig {
  int steps = 60;
  Real learning_rate = 0.001;
  int scheduler_step = 30;
  Real scheduler_gamma = 0.7;
  Real coeff_ref = 7.0 / 200.0;
  Real coeff_out = 1.0 / 600.0;
  int buffer_size = 5;
  SaveStrategy save;
  std::optional<Real> clip_epsilon;

  void validate() const;
  // learning_rate * gamma^floor(t / scheduler_step) for 1-based t.
  Real lr_at(int t) const;
};

// Coefficient and save-strategy presets tuned per cloning model family.
struct RefinePreset {
  const char* name;
  Real coeff_ref;
  Real coeff_out;
  SaveStrategy save;
};
std::span<const RefinePreset> refine_presets();
// Throws for unknown names.
const RefinePreset& refine_preset(const std::string& name);

struct LossBuffers {
  std::vector<Real> ref;
  std::vector<Real> out;

  explicit LossBuffers(int size) : ref(static_cast<std::size_t>(size), 0.0), out(static_cast<std::size_t>(size), 0.0) {}
};

struct DynamicWeights {
  Real ref = 0.5;
  Real out = 0.5;
};

// softmax(l_ref / ref[c], l_out / out[c]) when both slots are positive,
// otherwise equal weights.
DynamicWeights dynamic_weights(Real l_ref, Real l_out, const LossBuffers& buffers, std::size_t c);

struct RefineStep {
  int t = 0;
  std::size_t buffer_index = 0;
  Real l_ref = 0;  // sum over scales of mean |dB difference|
  Real l_out = 0;  // proxy similarity + 1
  Real scaled_ref = 0;
  Real scaled_out = 0;
  Real buffer_ref_read = 0;
  Real buffer_out_read = 0;
  Real w_ref = 0.5;
  Real w_out = 0.5;
  Real lr = 0;
  Real total = 0;
  bool projected = false;
};

// 1-based step. Final -> T; threshold -> argmin l_out among steps with
// l_ref < tau (Final if none); last-k -> argmin l_out over the last k steps.
int select_snapshot(std::span<const RefineStep> trace, const SaveStrategy& strategy);

struct RefineResult {
  Vector delta;  // the selected perturbation
  Vector initial_delta;
  std::vector<RefineStep> trace;
  int selected_step = 0;
};

// x and x_adv must share length and rate. For the Final strategy the result
// is delta after the last update; otherwise it is the delta whose losses were
// recorded at the selected step.
RefineResult refine(const AudioClip& x, const AudioClip& x_adv, const RefineConfig& cfg, const SpeakerEncoder& encoder);

struct RefineOutcome {
  std::optional<RefineResult> result;
  std::string error;
};

using CleanAdvPair = std::pair<AudioClip, AudioClip>;

// Independent per pair; failures are reported per index.
std::vector<RefineOutcome> refine_batch(std::span<const CleanAdvPair> pairs, const RefineConfig& cfg,
                                        const SpeakerEncoder& encoder, int workers = 1);

}  // namespace vcguard

#endif  // VCGUARD_REFINER_HPP
