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

#include "vcguard/gradcheck_suite.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace vcguard {

namespace {

using KeyHandlers = std::map<std::string, std::function<void(const Json&)>>;

void dispatch(const Json& j, const std::string& where, const KeyHandlers& handlers) {
  if (!j.is_object()) throw Error("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw Error("config: unknown key '" + where + key + "'");
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw Error("config: bad value for '" + where + key + "': " + e.what());
    }
  }
}

const char* loss_mode_name(LossMode m) { return m == LossMode::RepelOriginal ? "repel" : "attract"; }

LossMode parse_loss_mode(const std::string& s) {
  if (s == "repel") return LossMode::RepelOriginal;
  if (s == "attract") return LossMode::AttractDecoy;
  throw Error("config: loss_mode must be 'repel' or 'attract', got '" + s + "'");
}

const char* save_kind_name(SaveStrategyKind k) {
  switch (k) {
    case SaveStrategyKind::Final: return "final";
    case SaveStrategyKind::MinOutUnderRefThreshold: return "min_out_under_ref";
    case SaveStrategyKind::MinOutLastK: return "min_out_last_k";
  }
  return "final";
}

SaveStrategyKind parse_save_kind(const std::string& s) {
  if (s == "final") return SaveStrategyKind::Final;
  if (s == "min_out_under_ref") return SaveStrategyKind::MinOutUnderRefThreshold;
  if (s == "min_out_last_k") return SaveStrategyKind::MinOutLastK;
  throw Error("config: unknown save_strategy kind '" + s + "'");
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string json_lines(const std::vector<Json>& records) {
  std::string s;
  for (const auto& r : records) s += r.dump() + "\n";
  return s;
}

Json optional_json(const std::optional<Real>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<Real> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector fit_length(const Vector& delta, Index n) {
  Vector out = Vector::Zero(n);
  const Index m = std::min(n, delta.size());
  out.head(m) = delta.head(m);
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (input_dir.empty()) throw Error("config: input_dir is required");
  if (output_dir.empty()) throw Error("config: output_dir is required");
  if (batch_size < 1) throw Error("config: batch_size must be >= 1");
  if (workers < 1) throw Error("config: workers must be >= 1");
  stage1.validate();
  if (stage1.loss_mode == LossMode::AttractDecoy && decoy_path.empty()) {
    throw Error("config: stage1.loss_mode 'attract' needs stage1.decoy_path");
  }
  if (stage2_enabled) stage2.validate();
}

fs::path RunConfig::report_file() const {
  return report_path.empty() ? fs::path(output_dir) / "report.json" : fs::path(report_path);
}

Json to_json(const RunConfig& cfg) {
  Json s1;
  s1["epsilon"] = cfg.stage1.epsilon;
  s1["init_range"] = cfg.stage1.init_range;
  s1["iterations"] = cfg.stage1.iterations;
  s1["learning_rate"] = cfg.stage1.learning_rate;
  s1["loss_mode"] = loss_mode_name(cfg.stage1.loss_mode);
  s1["decoy_path"] = cfg.decoy_path;
  s1["seed"] = cfg.stage1.seed;

  const RefineConfig& r = cfg.stage2;
  Json s2;
  s2["enabled"] = cfg.stage2_enabled;
  s2["preset"] = cfg.stage2_preset;
  s2["steps"] = r.steps;
  s2["learning_rate"] = r.learning_rate;
  s2["scheduler_step"] = r.scheduler_step;
  s2["scheduler_gamma"] = r.scheduler_gamma;
  s2["coeff_ref"] = r.coeff_ref;
  s2["coeff_out"] = r.coeff_out;
  s2["buffer_size"] = r.buffer_size;
  s2["save_strategy"] = {{"kind", save_kind_name(r.save.kind)}, {"threshold", r.save.threshold}, {"last_k", r.save.last_k}};
  s2["clip_epsilon"] = optional_json(r.clip_epsilon);

  Json j;
  j["input_dir"] = cfg.input_dir;
  j["output_dir"] = cfg.output_dir;
  j["batch_size"] = cfg.batch_size;
  j["shuffle"] = cfg.shuffle;
  j["encoder_seed"] = cfg.encoder_seed;
  j["verifier_seed"] = cfg.verifier();
  j["report_path"] = cfg.report_path;
  j["transcripts_path"] = cfg.transcripts_path;
  j["outputs_dir"] = cfg.outputs_dir;
  j["stage1"] = s1;
  j["stage2"] = s2;
  return j;
}

RunConfig run_config_from_json(const Json& j, RunConfig base) {
  RunConfig c = std::move(base);
  auto str = [](std::string& slot) { return [&slot](const Json& v) { slot = v.get<std::string>(); }; };
  auto real = [](Real& slot) { return [&slot](const Json& v) { slot = v.get<Real>(); }; };
  auto integer = [](int& slot) { return [&slot](const Json& v) { slot = v.get<int>(); }; };
  auto seed = [](std::uint64_t& slot) { return [&slot](const Json& v) { slot = v.get<std::uint64_t>(); }; };

  KeyHandlers stage1{
      {"epsilon", real(c.stage1.epsilon)},
      {"init_range", real(c.stage1.init_range)},
      {"iterations", integer(c.stage1.iterations)},
      {"learning_rate", real(c.stage1.learning_rate)},
      {"loss_mode", [&](const Json& v) { c.stage1.loss_mode = parse_loss_mode(v.get<std::string>()); }},
      {"decoy_path", str(c.decoy_path)},
      {"seed", seed(c.stage1.seed)},
  };
  KeyHandlers save{
      {"kind", [&](const Json& v) { c.stage2.save.kind = parse_save_kind(v.get<std::string>()); }},
      {"threshold", real(c.stage2.save.threshold)},
      {"last_k", integer(c.stage2.save.last_k)},
  };
  KeyHandlers stage2{
      {"enabled", [&](const Json& v) { c.stage2_enabled = v.get<bool>(); }},
      {"preset", [](const Json&) {}},  // applied first, below
      {"steps", integer(c.stage2.steps)},
      {"learning_rate", real(c.stage2.learning_rate)},
      {"scheduler_step", integer(c.stage2.scheduler_step)},
      {"scheduler_gamma", real(c.stage2.scheduler_gamma)},
      {"coeff_ref", real(c.stage2.coeff_ref)},
      {"coeff_out", real(c.stage2.coeff_out)},
      {"buffer_size", integer(c.stage2.buffer_size)},
      {"save_strategy", [&](const Json& v) { dispatch(v, "stage2.save_strategy.", save); }},
      {"clip_epsilon",
       [&](const Json& v) {
         if (v.is_null()) {
           c.stage2.clip_epsilon.reset();
         } else {
           c.stage2.clip_epsilon = v.get<Real>();
         }
       }},
  };
  KeyHandlers top{
      {"input_dir", str(c.input_dir)},
      {"output_dir", str(c.output_dir)},
      {"batch_size", integer(c.batch_size)},
      {"shuffle", [&](const Json& v) { c.shuffle = v.get<bool>(); }},
      {"encoder_seed", seed(c.encoder_seed)},
      {"verifier_seed", [&](const Json& v) { c.verifier_seed = v.get<std::uint64_t>(); }},
      {"report_path", str(c.report_path)},
      {"transcripts_path", str(c.transcripts_path)},
      {"outputs_dir", str(c.outputs_dir)},
      {"workers", integer(c.workers)},
      {"stage1", [&](const Json& v) { dispatch(v, "stage1.", stage1); }},
      {"stage2",
       [&](const Json& v) {
         if (v.is_object() && v.contains("preset")) {
           c.stage2_preset = v.at("preset").get<std::string>();
           if (!c.stage2_preset.empty()) {
             const RefinePreset& p = refine_preset(c.stage2_preset);
             c.stage2.coeff_ref = p.coeff_ref;
             c.stage2.coeff_out = p.coeff_out;
             c.stage2.save = p.save;
           }
         }
         dispatch(v, "stage2.", stage2);
       }},
  };
  dispatch(j, "", top);
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  const Json j = read_json(path);
  if (j.is_object() && j.contains("config") && j.contains("entries")) return run_config_from_json(j.at("config"));
  return run_config_from_json(j);
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t n, int batch_size,
                                                   std::optional<std::uint64_t> shuffle_seed) {
  if (batch_size < 1) throw Error("make_batches: batch_size must be >= 1");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (shuffle_seed) {
    // Fisher-Yates on the project generator so the order is portable.
    Rng rng(*shuffle_seed);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(order[i - 1], order[j]);
    }
  }
  std::vector<std::vector<std::size_t>> batches;
  const std::size_t b = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < n; start += b) {
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + b)));
  }
  return batches;
}

std::vector<fs::path> list_wavs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

Json stage1_record_json(const Stage1Record& r) {
  Json j;
  j["iter"] = r.iteration;
  j["losses"] = r.losses;
  j["alpha"] = to_std(r.alpha);
  j["total"] = r.total;
  j["linf"] = r.linf;
  return j;
}

Json refine_step_json(const RefineStep& s) {
  Json j;
  j["t"] = s.t;
  j["buffer_index"] = s.buffer_index;
  j["l_ref"] = s.l_ref;
  j["l_out"] = s.l_out;
  j["scaled_ref"] = s.scaled_ref;
  j["scaled_out"] = s.scaled_out;
  j["buffer_ref_read"] = s.buffer_ref_read;
  j["buffer_out_read"] = s.buffer_out_read;
  j["w_ref"] = s.w_ref;
  j["w_out"] = s.w_out;
  j["lr"] = s.lr;
  j["total"] = s.total;
  j["projected"] = s.projected;
  return j;
}

Json report_to_json(const MetricsReport& report, const Json& config_echo) {
  auto metric_fields = [](Json& j, const auto& m) {
    j["snr_db"] = optional_json(m.snr_db);
    j["sdr_db"] = optional_json(m.sdr_db);
    j["lsd"] = optional_json(m.lsd);
    j["mcd"] = optional_json(m.mcd);
    j["stoi"] = optional_json(m.stoi);
    j["srs_input"] = optional_json(m.srs_input);
    j["srs_output"] = optional_json(m.srs_output);
    j["cer"] = optional_json(m.cer);
    j["wer"] = optional_json(m.wer);
  };
  Json per_clip = Json::array();
  for (const ClipMetrics& m : report.per_clip) {
    Json row;
    row["id"] = m.id;
    metric_fields(row, m);
    row["error"] = m.error.empty() ? Json(nullptr) : Json(m.error);
    per_clip.push_back(row);
  }
  Json agg;
  metric_fields(agg, report.aggregate);
  agg["dsr"] = report.aggregate.dsr;
  agg["dsr_input"] = report.aggregate.dsr_input;
  agg["clips"] = report.aggregate.clips;
  agg["failed"] = report.aggregate.failed;

  Json j;
  j["proxy"] = report.proxy;
  j["per_clip"] = per_clip;
  j["aggregate"] = agg;
  j["config_echo"] = config_echo;
  return j;
}

int cmd_protect(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    const auto files = list_wavs(cfg.input_dir);
    if (files.empty()) throw Error("no .wav files in " + cfg.input_dir);
    std::vector<AudioClip> clips;
    std::set<std::string> ids;
    for (const auto& f : files) {
      clips.push_back(read_wav(f));
      if (!ids.insert(clips.back().id).second) throw Error("duplicate clip id " + clips.back().id);
    }

    const fs::path out(cfg.output_dir);
    fs::create_directories(out / "protected");
    fs::create_directories(out / "deltas");
    fs::create_directories(out / "traces");

    const SpeakerEncoder encoder(cfg.encoder_seed);
    save_weights(encoder.weights(), out / "encoder.bin");

    Stage1Config base = cfg.stage1;
    if (base.loss_mode == LossMode::AttractDecoy) base.decoy = encoder.embed(read_wav(cfg.decoy_path));

    const auto batches =
        make_batches(clips.size(), cfg.batch_size, cfg.shuffle ? std::optional(cfg.stage1.seed) : std::nullopt);
    Json batch_list = Json::array();
    std::vector<Json> entries(clips.size());
    int exit_code = 0;

    for (std::size_t k = 0; k < batches.size(); ++k) {
      std::vector<AudioClip> batch;
      std::string names;
      for (std::size_t i : batches[k]) {
        batch.push_back(clips[i]);
        names += (names.empty() ? "" : ",") + clips[i].id;
      }
      Stage1Config s1 = base;
      s1.seed = base.seed + k;
      Stage1Result universal;
      try {
        universal = generate_universal(batch, s1, encoder, cfg.workers);
      } catch (const std::exception& e) {
        throw Error("batch " + std::to_string(k) + " [" + names + "]: " + e.what());
      }
      log << "batch " << k << " [" << names << "]: stage 1 loss " << universal.trace.front().total << " -> "
          << universal.trace.back().total << "\n";

      const std::string stem = "batch_" + std::to_string(k);
      std::vector<Json> trace;
      for (const auto& r : universal.trace) trace.push_back(stage1_record_json(r));
      write_text(out / "traces" / (stem + "_stage1.jsonl"), json_lines(trace));
      write_wav({universal.perturbation.delta, batch.front().sample_rate_hz, stem}, out / "deltas" / (stem + ".wav"));

      std::vector<CleanAdvPair> pairs;
      for (const auto& c : batch) pairs.emplace_back(c, apply_perturbation(c, universal.perturbation.delta));
      std::vector<RefineOutcome> refined;
      if (cfg.stage2_enabled) refined = refine_batch(pairs, cfg.stage2, encoder, cfg.workers);

      Json members = Json::array();
      for (std::size_t b = 0; b < batch.size(); ++b) {
        const AudioClip& clip = batch[b];
        Json entry;
        entry["id"] = clip.id;
        entry["input"] = files[batches[k][b]].filename().string();
        entry["batch"] = k;
        entry["seed"] = s1.seed;
        Vector delta = fit_length(universal.perturbation.delta, clip.size());
        if (cfg.stage2_enabled) {
          const RefineOutcome& r = refined[b];
          if (!r.result) {
            entry["error"] = "stage2: " + r.error;
            log << "clip " << clip.id << ": stage 2 failed: " << r.error << "\n";
            exit_code = 1;
            entries[batches[k][b]] = entry;
            members.push_back(clip.id);
            continue;
          }
          delta = r.result->delta;
          std::vector<Json> steps;
          for (const auto& s : r.result->trace) steps.push_back(refine_step_json(s));
          write_text(out / "traces" / (clip.id + "_stage2.jsonl"), json_lines(steps));
          entry["stage2_selected_step"] = r.result->selected_step;
          entry["stage2_trace"] = "traces/" + clip.id + "_stage2.jsonl";
        }
        const AudioClip prot{clip.samples + delta, clip.sample_rate_hz, clip.id};
        write_wav(prot, out / "protected" / (clip.id + ".wav"));
        write_wav({delta, clip.sample_rate_hz, clip.id}, out / "deltas" / (clip.id + ".wav"));
        entry["protected"] = "protected/" + clip.id + ".wav";
        entry["delta"] = "deltas/" + clip.id + ".wav";
        entry["delta_linf"] = delta.cwiseAbs().maxCoeff();
        entries[batches[k][b]] = entry;
        members.push_back(clip.id);
      }

      Json bj;
      bj["index"] = k;
      bj["seed"] = s1.seed;
      bj["clips"] = members;
      bj["delta_length"] = universal.perturbation.delta.size();
      bj["delta_linf"] = universal.perturbation.linf();
      bj["universal_delta"] = "deltas/" + stem + ".wav";
      bj["stage1_trace"] = "traces/" + stem + "_stage1.jsonl";
      batch_list.push_back(bj);
    }

    Json manifest;
    manifest["config"] = to_json(cfg);
    manifest["encoder"] = {{"seed", cfg.encoder_seed}, {"weights", "encoder.bin"}};
    manifest["batches"] = batch_list;
    manifest["entries"] = entries;
    write_text(out / "manifest.json", manifest.dump(2) + "\n");
    log << "protected " << clips.size() << " clips in " << batches.size() << " batches -> " << out.string() << "\n";
    return exit_code;
  } catch (const std::exception& e) {
    log << "protect: " << e.what() << "\n";
    return 2;
  }
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    const fs::path out(cfg.output_dir);
    const Json manifest = read_json(out / "manifest.json");
    const Json& mc = manifest.at("config");
    if (mc.at("input_dir") != cfg.input_dir || mc.at("output_dir") != cfg.output_dir ||
        mc.at("encoder_seed") != cfg.encoder_seed) {
      throw Error("manifest mismatch: input_dir, output_dir or encoder_seed differ from the configuration");
    }

    std::map<std::string, TranscriptPair> transcripts;
    if (!cfg.transcripts_path.empty()) {
      const Json texts_json = read_json(cfg.transcripts_path);
      for (const auto& [id, v] : texts_json.items()) {
        transcripts[id] = {v.at("reference").get<std::string>(), v.at("hypothesis").get<std::string>()};
      }
    }

    const Json& entries = manifest.at("entries");
    std::vector<ClipMetrics> rows(entries.size());
    std::vector<std::size_t> loaded;
    std::vector<AudioClip> originals, protected_clips, outputs;
    std::vector<std::optional<TranscriptPair>> texts;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Json& e = entries[i];
      rows[i].id = e.at("id").get<std::string>();
      try {
        if (e.contains("error")) throw Error(e.at("error").get<std::string>());
        AudioClip orig = read_wav(fs::path(cfg.input_dir) / e.at("input").get<std::string>());
        AudioClip prot = read_wav(out / e.at("protected").get<std::string>());
        std::optional<AudioClip> cloned;
        if (!cfg.outputs_dir.empty()) cloned = read_wav(fs::path(cfg.outputs_dir) / (rows[i].id + ".wav"));
        originals.push_back(std::move(orig));
        protected_clips.push_back(std::move(prot));
        if (cloned) outputs.push_back(std::move(*cloned));
        const auto t = transcripts.find(rows[i].id);
        texts.push_back(t == transcripts.end() ? std::nullopt : std::optional(t->second));
        loaded.push_back(i);
      } catch (const std::exception& ex) {
        rows[i].error = ex.what();
      }
    }

    const SpeakerEncoder attacked(cfg.encoder_seed);
    const SpeakerEncoder verifier(cfg.verifier());
    MetricsReport report = build_report(originals, protected_clips, outputs, texts, {attacked, verifier}, cfg.workers);
    for (std::size_t j = 0; j < loaded.size(); ++j) rows[loaded[j]] = report.per_clip[j];
    report.per_clip = std::move(rows);
    report.aggregate = aggregate_metrics(report.per_clip);

    const fs::path report_file = cfg.report_file();
    if (report_file.has_parent_path()) fs::create_directories(report_file.parent_path());
    write_text(report_file, report_to_json(report, to_json(cfg)).dump(2) + "\n");
    log << "evaluated " << report.aggregate.clips << " clips (" << report.aggregate.failed << " failed), dsr "
        << report.aggregate.dsr << " -> " << report_file.string() << "\n";
    return report.aggregate.failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    log << "evaluate: " << e.what() << "\n";
    return 2;
  }
}

int cmd_gradcheck(std::ostream& out, const std::string& corrupt_op) {
  if (!corrupt_op.empty()) ad::testing::corrupt_backward(corrupt_op);
  std::vector<GradCheckEntry> entries;
  try {
    entries = run_gradcheck_suite();
  } catch (...) {
    ad::testing::clear_corruption();
    throw;
  }
  ad::testing::clear_corruption();
  bool ok = true;
  for (const auto& e : entries) {
    std::ostringstream line;
    line << std::left << std::setw(6) << e.group << std::setw(22) << e.name << std::scientific << std::setprecision(3)
         << e.max_rel_error << "  <= " << e.tolerance << "  " << (e.passed ? "PASS" : "FAIL");
    out << line.str() << "\n";
    ok = ok && e.passed;
  }
  out << (ok ? "gradcheck: all checks passed" : "gradcheck: FAILED") << "\n";
  return ok ? 0 : 1;
}

int cmd_mgda_demo(const MgdaDemoOptions& opt, std::ostream& out) {
  Rng rng(opt.seed);
  const int draws = opt.opposing ? 1 : std::max(1, opt.draws);
  Real worst_margin = std::numeric_limits<Real>::infinity();
  Real worst_simplex = 0;
  for (int d = 0; d < draws; ++d) {
    Matrix g(opt.dim, opt.opposing ? 2 : opt.tasks);
    if (opt.opposing) {
      for (Index i = 0; i < g.rows(); ++i) g(i, 0) = rng.normal();
      g.col(1) = -g.col(0);
    } else {
      for (Index c = 0; c < g.cols(); ++c) {
        for (Index i = 0; i < g.rows(); ++i) g(i, c) = rng.normal();
      }
    }
    const MinNormResult r = min_norm_point(g);
    const Vector norms = g.colwise().norm().transpose();
    const Real combined = r.combined.norm();
    const Real margin = norms.minCoeff() - combined;
    worst_margin = std::min(worst_margin, margin);
    worst_simplex = std::max({worst_simplex, std::abs(r.weights.alpha.sum() - 1.0),
                              std::max(0.0, -r.weights.alpha.minCoeff())});
    Json line;
    line["draw"] = d;
    line["alpha"] = to_std(r.weights.alpha);
    line["vertex_norms"] = to_std(norms);
    line["combined_norm"] = combined;
    line["dominance_margin"] = margin;
    line["iterations"] = r.iterations;
    out << line.dump() << "\n";
  }
  Json summary;
  summary["summary"] = true;
  summary["draws"] = draws;
  summary["tasks"] = opt.opposing ? 2 : opt.tasks;
  summary["dim"] = opt.dim;
  summary["min_dominance_margin"] = worst_margin;
  summary["dominance_holds"] = worst_margin >= -1e-9;
  summary["max_simplex_violation"] = worst_simplex;
  out << summary.dump() << "\n";
  return 0;
}

}  // namespace vcguard
