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

#ifndef VCGUARD_PIPELINE_HPP
#define VCGUARD_PIPELINE_HPP

// Batch orchestration behind the command-line tool: configuration, corpus
// batching, both protection stages, artifact output and evaluation.

#include "vcguard/metrics.hpp"
#include "vcguard/mgda.hpp"
#include "vcguard/refiner.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vcguard {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Environment variable naming the root of the versioned test-data tree.
inline constexpr const char* kTestDataEnv = "VCGUARD_TEST_DATA";

struct RunConfig {
  std::string input_dir;
  std::string output_dir;
  int batch_size = 3;
  bool shuffle = false;  // seeded by stage1.seed
  std::uint64_t encoder_seed = 1234;
  std::optional<std::uint64_t> verifier_seed;  // encoder_seed + 1 when unset
  std::string report_path;                     // output_dir/report.json when empty
  std::string transcripts_path;                // optional {id: {reference, hypothesis}}
  std::string outputs_dir;                     // optional cloned audio, <id>.wav

  Stage1Config stage1;
  std::string decoy_path;  // required for the attract loss

  bool stage2_enabled = true;
  std::string stage2_preset;  // applied before explicit stage2 keys
  RefineConfig stage2;

  int workers = 1;  // not part of the echoed configuration

  void validate() const;
  std::uint64_t verifier() const { return verifier_seed.value_or(encoder_seed + 1); }
  fs::path report_file() const;
};

Json to_json(const RunConfig& cfg);
// Unknown keys are rejected. Keys absent from `j` keep the value in `base`.
RunConfig run_config_from_json(const Json& j, RunConfig base = {});
// Accepts a configuration object or a manifest (its "config" member).
RunConfig load_run_config(const fs::path& path);

// Index groups of size batch_size in order; the remainder forms a final
// smaller batch. With a shuffle seed the order is permuted first.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, int batch_size,
                                                   std::optional<std::uint64_t> shuffle_seed = std::nullopt);

// *.wav files directly under dir, sorted by filename.
std::vector<fs::path> list_wavs(const fs::path& dir);

Json stage1_record_json(const Stage1Record& r);
Json refine_step_json(const RefineStep& s);
Json report_to_json(const MetricsReport& report, const Json& config_echo);

// Each returns a process exit status and writes progress to `log`.
int cmd_protect(const RunConfig& cfg, std::ostream& log);
int cmd_evaluate(const RunConfig& cfg, std::ostream& log);
// `corrupt_op` names a tape op whose backward rule is perturbed for the run.
int cmd_gradcheck(std::ostream& out, const std::string& corrupt_op = {});

struct MgdaDemoOptions {
  int tasks = 3;
  int dim = 8;
  int draws = 1000;
  std::uint64_t seed = 0;
  bool opposing = false;  // a single draw of g and -g
};
// One JSON line per draw, then a summary line.
int cmd_mgda_demo(const MgdaDemoOptions& opt, std::ostream& out);

}  // namespace vcguard

#endif  // VCGUARD_PIPELINE_HPP
