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

#include "vcguard/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> batch_size;
  std::optional<double> epsilon;
  bool no_stage2 = false;
  std::optional<int> workers;
  std::string input_dir;
  std::string output_dir;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration or a manifest from an earlier run");
  cmd->add_option("--seed", o.seed, "Stage-1 seed (batch k uses seed + k)");
  cmd->add_option("--batch-size", o.batch_size, "Clips per universal perturbation")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", o.epsilon, "L-infinity bound of the universal perturbation")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-stage2", o.no_stage2, "Skip per-clip mel-domain refinement");
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--input-dir", o.input_dir, "Directory of input .wav files");
  cmd->add_option("--output-dir", o.output_dir, "Directory for protected clips and artifacts");
}

vcguard::RunConfig resolve(const Overrides& o) {
  vcguard::RunConfig cfg = o.config.empty() ? vcguard::RunConfig{} : vcguard::load_run_config(o.config);
  if (!o.input_dir.empty()) cfg.input_dir = o.input_dir;
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (o.seed) cfg.stage1.seed = *o.seed;
  if (o.batch_size) cfg.batch_size = *o.batch_size;
  if (o.epsilon) cfg.stage1.epsilon = *o.epsilon;
  if (o.no_stage2) cfg.stage2_enabled = false;
  if (o.workers) cfg.workers = *o.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Protect speech clips against voice cloning with universal and mel-refined perturbations"};
  app.require_subcommand(1);

  Overrides protect_opts, evaluate_opts;
  auto* protect = app.add_subcommand("protect", "Run both protection stages over a directory of clips");
  add_run_flags(protect, protect_opts);
  auto* evaluate = app.add_subcommand("evaluate", "Score protected clips listed in a manifest");
  add_run_flags(evaluate, evaluate_opts);

  std::string corrupt;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every tape op and loss stack");
  gradcheck->add_option("--corrupt", corrupt, "Perturb the backward rule of this op (self-test)");

  vcguard::MgdaDemoOptions demo;
  auto* mgda = app.add_subcommand("mgda-demo", "Min-norm weights on random gradient sets, as JSON lines");
  mgda->add_option("--tasks", demo.tasks, "Gradients per draw")->check(CLI::PositiveNumber);
  mgda->add_option("--dim", demo.dim, "Gradient dimension")->check(CLI::PositiveNumber);
  mgda->add_option("--draws", demo.draws, "Number of random draws")->check(CLI::PositiveNumber);
  mgda->add_option("--seed", demo.seed, "Generator seed");
  mgda->add_flag("--opposing", demo.opposing, "Single draw of g and -g");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*protect) return vcguard::cmd_protect(resolve(protect_opts), std::cerr);
    if (*evaluate) return vcguard::cmd_evaluate(resolve(evaluate_opts), std::cerr);
    if (*gradcheck) return vcguard::cmd_gradcheck(std::cout, corrupt);
    if (*mgda) return vcguard::cmd_mgda_demo(demo, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
