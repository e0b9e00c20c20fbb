// Copyright 2026 The glyphsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef GLYPHSIM_CLI_HPP_
#define GLYPHSIM_CLI_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/glyphsim.hpp"

// Pipeline commands behind the glyphsim executable. Every command writes
// its artifacts below the run's output directory and stamps them with the
// tool version and config hash.
namespace glyphsim::cli {

namespace fs = std::filesystem;

struct Context {
  RunConfig config;
  std::string hash;
  std::ostream* log = &std::cerr;
  int log_every = 10;
  Diagnostics diagnostics;

  explicit Context(RunConfig cfg) : config(std::move(cfg)) {
    config.validate(&diagnostics);
    hash = config_hash(config);
  }

  fs::path out() const { return config.paths.out; }

  void info(const std::string& msg) const { *log << msg << '\n'; }

  void flush_warnings() {
    const auto w = diagnostics.warnings();
    for (const auto& m : w) *log << "warning: " << m << '\n';
    diagnostics.clear();
  }
};

inline void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

/// provenance.json: tool version, config hash and the full config.
inline void write_provenance(const Context& ctx, const fs::path& dir, const std::string& command,
                             nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json j;
  j["tool_version"] = kVersion;
  j["config_hash"] = ctx.hash;
  j["command"] = command;
  j["config"] = to_json(ctx.config, /*with_runtime=*/false);
  j["details"] = std::move(extra);
  write_json(dir / "provenance.json", j);
}

inline void require_path(const std::string& p, const char* what) {
  if (p.empty()) throw Error(std::string("no ") + what + " given");
  if (!fs::exists(p)) throw Error(std::string(what) + " does not exist: " + p);
}

inline fs::path prepared_dir(const Context& ctx) { return ctx.out() / "prepared"; }

inline fs::path split_dir(const Context& ctx, dataset::Split s) {
  return prepared_dir(ctx) / dataset::to_string(s);
}

// ---------------------------------------------------------------------------
// prepare

/// Loads the Omniglot-style root, writes the three splits (the supervised
/// split with its offline augmented copies) and echoes the manifest.
inline void cmd_prepare(Context& ctx) {
  const auto& p = ctx.config.paths;
  require_path(p.data_root, "data root");
  require_path(p.manifest, "split manifest");
  const auto manifest = dataset::read_split_manifest(p.manifest);
  const auto corpus = dataset::load_omniglot(p.data_root, manifest, ctx.config.threads);
  const fs::path dir = prepared_dir(ctx);

  const dataset::Dataset augmented = dataset::generate_augmented_set(
      corpus.supervised_invented, ctx.config.augmentation,
      derive_seed_str(ctx.config.seed, "augmentation"), ctx.config.threads, &ctx.diagnostics);
  dataset::save_dataset_dir(augmented, split_dir(ctx, dataset::Split::kSupervisedInvented));
  dataset::save_dataset_dir(corpus.unsupervised_historical,
                            split_dir(ctx, dataset::Split::kUnsupervisedHistorical));
  dataset::save_dataset_dir(corpus.evaluation, split_dir(ctx, dataset::Split::kEvaluation));
  {
    std::ofstream echo(dir / "manifest.tsv", std::ios::binary | std::ios::trunc);
    for (const auto& [script, split] : manifest)
      echo << script << '\t' << dataset::to_string(split) << '\n';
  }
  nlohmann::json counts;
  for (auto s : {dataset::Split::kSupervisedInvented, dataset::Split::kUnsupervisedHistorical,
                 dataset::Split::kEvaluation}) {
    const auto& ds = s == dataset::Split::kSupervisedInvented ? augmented : corpus.split(s);
    counts[dataset::to_string(s)] = {{"scripts", ds.script_ids.size()},
                                     {"classes", ds.class_count},
                                     {"glyphs", ds.size()}};
  }
  write_provenance(ctx, dir, "prepare", counts);
  ctx.flush_warnings();
  ctx.info("prepared " + std::to_string(corpus.total_scripts()) + " scripts, " +
           std::to_string(corpus.total_classes()) + " classes into " + dir.string());
}

// ---------------------------------------------------------------------------
// render-unicode

inline void cmd_render_unicode(Context& ctx) {
  const auto& p = ctx.config.paths;
  require_path(p.ranges, "ranges file");
  require_path(p.fonts, "fonts directory");
  const fs::path dir = ctx.out() / "unicode";
  const auto build = dataset::build_unicode_dataset(p.ranges, p.fonts, dir);
  write_provenance(ctx, dir, "render-unicode",
                   {{"glyphs", build.dataset.size()},
                    {"scripts", build.dataset.script_ids},
                    {"omissions", build.omissions.size()}});
  ctx.info("rendered " + std::to_string(build.dataset.size()) + " glyphs (" +
           std::to_string(build.omissions.size()) + " omitted) into " + dir.string());
}

// ---------------------------------------------------------------------------
// training

inline training::StepCallback progress(const Context& ctx, const char* stage) {
  return [&ctx, stage](const training::StepRecord& r) {
    if (ctx.log_every > 0 && r.step % ctx.log_every == 0) {
      char line[200];
      std::snprintf(line, sizeof line, "%s step %lld epoch %d lr %.3g loss %.5f grad %.3g%s",
                    stage, static_cast<long long>(r.step), r.epoch, r.lr, r.loss, r.grad_norm,
                    r.probe_cosine ? (" probe_cos " + std::to_string(*r.probe_cosine)).c_str() : "");
      ctx.info(line);
    }
  };
}

inline encoder::Checkpoint make_checkpoint(const Context& ctx,
                                           const encoder::EncoderParams<float>& params,
                                           std::optional<encoder::PredictorParams<float>> pred,
                                           const std::string& stage, std::int64_t step) {
  encoder::Checkpoint c;
  c.encoder = params;
  c.predictor = std::move(pred);
  c.meta.stage = stage;
  c.meta.step = step;
  c.meta.config_hash = ctx.hash;
  return c;
}

inline void write_log(const fs::path& dir, const training::TrainingLog& log,
                      nlohmann::json summary_extra) {
  log.write_csv(dir / "train_log.csv");
  log.write_validation_csv(dir / "validation.csv");
  nlohmann::json s = log.summary();
  for (auto& [k, v] : summary_extra.items()) s[k] = v;
  write_json(dir / "summary.json", s);
}

inline dataset::Dataset load_split(const Context& ctx, const std::string& override_dir,
                                   dataset::Split s) {
  const fs::path dir = override_dir.empty() ? split_dir(ctx, s) : fs::path(override_dir);
  if (!fs::exists(dir / "index.tsv"))
    throw Error("dataset not found: " + dir.string() + " (run prepare first)");
  return dataset::load_dataset_dir(dir);
}

inline void cmd_train_teacher(Context& ctx, const std::string& data_dir) {
  const dataset::Dataset ds = load_split(ctx, data_dir, dataset::Split::kSupervisedInvented);
  ctx.info("stage 1: " + std::to_string(ds.class_count) + " classes, " +
           std::to_string(ds.size()) + " glyphs");
  const auto result = training::train_stage1(ctx.config.stage1, ds, ctx.config.encoder,
                                             ctx.config.threads, &ctx.diagnostics,
                                             progress(ctx, "stage1"));
  const fs::path dir = ctx.out() / "teacher";
  encoder::save_checkpoint(dir / "teacher.ckpt",
                           make_checkpoint(ctx, result.teacher, std::nullopt, "stage1", result.steps));
  nlohmann::json extra{{"config_hash", ctx.hash},
                       {"tool_version", kVersion},
                       {"validation_class_ids", result.validation_class_ids}};
  if (result.final_validation_top1) extra["final_val_top1"] = *result.final_validation_top1;
  write_log(dir, result.log, extra);
  write_provenance(ctx, dir, "train-teacher");
  ctx.flush_warnings();
  ctx.info("teacher written to " + (dir / "teacher.ckpt").string());
}

/// `init` is a teacher checkpoint path or "random". Random initialization
/// trains on the supervised and unsupervised pools combined (labels unused);
/// teacher initialization uses only the unsupervised split.
inline void cmd_train_student(Context& ctx, const std::string& init, const std::string& name,
                              const std::string& data_dir, const std::string& extra_dir) {
  training::Stage2Config cfg = ctx.config.stage2;
  std::optional<encoder::EncoderParams<float>> teacher;
  if (init == "random") {
    cfg.init_mode = training::InitMode::kRandom;
  } else {
    cfg.init_mode = training::InitMode::kTeacher;
    if (!fs::exists(init)) throw Error("teacher checkpoint not found: " + init);
    teacher = encoder::load_checkpoint(init).encoder;
  }
  dataset::Dataset ds = load_split(ctx, data_dir, dataset::Split::kUnsupervisedHistorical);
  if (cfg.init_mode == training::InitMode::kRandom) {
    const dataset::Dataset sup = load_split(ctx, extra_dir, dataset::Split::kSupervisedInvented);
    ds = dataset::merge(sup, ds, dataset::Split::kUnsupervisedHistorical);
  }
  ctx.info("stage 2 (" + training::to_string(cfg.init_mode) + " init): " +
           std::to_string(ds.class_count) + " classes");
  const auto r = training::train_stage2(cfg, ds, ctx.config.encoder, teacher, ctx.config.threads,
                                        &ctx.diagnostics, progress(ctx, "stage2"));
  const std::string run = name.empty()
                              ? (cfg.init_mode == training::InitMode::kTeacher ? "student" : "baseline")
                              : name;
  const fs::path dir = ctx.out() / run;
  encoder::save_checkpoint(dir / "student.ckpt",
                           make_checkpoint(ctx, r.student, r.predictor, "stage2", r.steps));
  encoder::save_checkpoint(dir / "target.ckpt",
                           make_checkpoint(ctx, r.target, std::nullopt, "stage2", r.steps));
  nlohmann::json extra{{"config_hash", ctx.hash},
                       {"tool_version", kVersion},
                       {"init_mode", training::to_string(cfg.init_mode)},
                       {"target_gradient_max", r.target_gradient_max},
                       {"max_probe_cosine", r.max_probe_cosine},
                       {"student_significant_dims", r.student_significant_dims},
                       {"target_significant_dims", r.target_significant_dims},
                       {"embedding_dim", ctx.config.encoder.embedding_dim}};
  if (r.final_probe_cosine) extra["final_probe_cosine"] = *r.final_probe_cosine;
  write_log(dir, r.log, extra);
  write_provenance(ctx, dir, "train-student", {{"init", init}});
  ctx.flush_warnings();
  ctx.info("student and target written to " + dir.string());
}

// ---------------------------------------------------------------------------
// embed

inline void cmd_embed(Context& ctx, const std::string& checkpoint, const std::string& data_dir,
                      const std::string& name, int expected_dim) {
  if (!fs::exists(checkpoint)) throw Error("checkpoint not found: " + checkpoint);
  const auto ckpt = encoder::load_checkpoint(checkpoint);
  if (expected_dim > 0 && expected_dim != ckpt.encoder.config.embedding_dim)
    throw Error("checkpoint embedding dimension " +
                std::to_string(ckpt.encoder.config.embedding_dim) +
                " does not match requested " + std::to_string(expected_dim));
  const dataset::Dataset ds = load_split(ctx, data_dir, dataset::Split::kEvaluation);
  if (ds.empty()) throw Error("cannot embed an empty dataset");
  const auto stores = similarity::build_stores(ckpt.encoder, ds, ctx.hash, ctx.config.threads,
                                               &ctx.diagnostics);
  const std::string run = name.empty() ? fs::path(checkpoint).stem().string() : name;
  const fs::path dir = ctx.out() / "embeddings" / run;
  similarity::write_store_dir(dir, stores);
  write_provenance(ctx, dir, "embed", {{"checkpoint", checkpoint}, {"scripts", stores.size()}});
  ctx.flush_warnings();
  ctx.info("wrote " + std::to_string(stores.size()) + " embedding stores to " + dir.string());
}

// ---------------------------------------------------------------------------
// eval

struct EvalModel {
  std::string name;
  Mat<float> table;  // one row per dataset glyph
};

/// Glyph retrieval, script ranking, Spearman correlation and separability
/// for every model; writes report.json / report.txt and per-model CSVs.
inline nlohmann::json evaluate_models(Context& ctx, const dataset::Dataset& ds,
                                      const std::vector<EvalModel>& models,
                                      const std::optional<dataset::SimilarityLevelTable>& levels,
                                      const fs::path& dir) {
  const auto& ec = ctx.config.eval;
  fs::create_directories(dir);
  std::vector<std::string> notices;
  // Rendered sets hold one instance per class, so retrieval may not apply.
  std::vector<evaluation::Episode> episodes;
  try {
    episodes = evaluation::sample_episodes(ds, ec.n_way, ec.episodes, ec.seed);
  } catch (const Error& e) {
    notices.push_back(std::string("glyph retrieval skipped: ") + e.what());
  }
  if (ec.n_way != 20)
    notices.push_back("retrieval uses " + std::to_string(ec.n_way) + "-way episodes");
  if (!levels) notices.push_back("no similarity level table; script ranking metrics skipped");

  std::vector<std::string> script_of(ds.size());
  std::vector<int> class_of(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    script_of[i] = ds.glyphs[i].script_id;
    class_of[i] = ds.glyphs[i].class_id;
  }

  std::vector<evaluation::ModelMetrics> rows;
  evaluation::SeparabilityTable sep;
  for (const auto& m : models) {
    evaluation::ModelMetrics mm(m.name);
    if (episodes.empty()) {
      mm.skip("n20r1").skip("n20r5");
    } else {
      const auto ranks = evaluation::positive_ranks(evaluation::table_embedder(m.table), episodes);
      // The report columns keep their customary names; metadata records the
      // actual N when it differs from 20.
      mm.set("n20r1", evaluation::topk_accuracy(ranks, 1));
      mm.set("n20r5", evaluation::topk_accuracy(ranks, std::min(5, ec.n_way)));
      for (int k : ec.k_values)
        if (k != 1 && k != 5) mm.set("top" + std::to_string(k), evaluation::topk_accuracy(ranks, k));
      evaluation::write_episode_csv(dir / ("episodes_" + m.name + ".csv"), episodes, ranks);
    }

    const auto sets = similarity::group_scripts(m.table, script_of, class_of, ctx.config.granularity);
    if (sets.size() >= 2) {
      std::vector<std::string> ids;
      for (const auto& s : sets) ids.push_back(s.script_id);
      const Eigen::MatrixXd dist = similarity::script_distance_matrix(sets, ctx.config.threads);
      similarity::write_distance_csv(dir / ("distances_" + m.name + ".csv"), ids, dist);
      if (levels) {
        const auto ranking = evaluation::script_ranking_eval(ids, dist, *levels, ec.ndcg_k);
        mm.set("ndcg10", ranking.mean);
        mm.set("ndcg_effective_k", ranking.effective_k);
        evaluation::write_ndcg_csv(dir / ("ndcg_" + m.name + ".csv"), ranking);
        const auto pairs = evaluation::script_pairs(ids, dist, *levels);
        try {
          const auto sp = evaluation::spearman_rho(pairs.distances, pairs.levels, true);
          mm.set("spearman_rho", sp.rho);
          mm.set("spearman_p", *sp.p_value);
        } catch (const Error& e) {
          notices.push_back(m.name + ": spearman skipped: " + e.what());
        }
      }
      std::map<std::string, std::size_t> pos;
      for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;
      for (const auto& t : ctx.config.separability_triples) {
        const std::string key = t[0] + "/" + t[1] + "/" + t[2];
        if (!pos.contains(t[0]) || !pos.contains(t[1]) || !pos.contains(t[2])) {
          if (&m == &models.front())
            notices.push_back("separability triple " + key + " skipped: script not in data");
          continue;
        }
        const auto a = static_cast<Eigen::Index>(pos[t[0]]);
        const auto b = static_cast<Eigen::Index>(pos[t[1]]);
        const auto c = static_cast<Eigen::Index>(pos[t[2]]);
        sep[key][m.name] = similarity::separability_ratio(dist(a, b), dist(c, a), dist(c, b));
      }
    } else if (&m == &models.front()) {
      notices.push_back("fewer than 2 scripts; script metrics skipped");
    }
    rows.push_back(std::move(mm));
  }
  evaluation::RunMetadata meta{ctx.hash, ctx.config.seed, {}};
  meta.extra["episodes"] = ec.episodes;
  meta.extra["n_way"] = ec.n_way;
  meta.extra["granularity"] = similarity::to_string(ctx.config.granularity);
  meta.extra["scripts"] = ds.script_ids;
  const auto report = evaluation::build_report(rows, sep, meta, notices);
  evaluation::write_report(dir, report);
  return report;
}

inline void cmd_eval(Context& ctx, const std::vector<std::string>& checkpoints,
                     bool random_embedding, const std::string& data_dir,
                     const std::string& report_name) {
  if (checkpoints.empty() && !random_embedding)
    throw Error("eval needs at least one --checkpoint or --random-embedding");
  const dataset::Dataset ds = load_split(ctx, data_dir, dataset::Split::kEvaluation);
  if (ds.empty()) throw Error("evaluation dataset is empty");
  std::optional<dataset::SimilarityLevelTable> levels;
  if (!ctx.config.paths.levels.empty()) {
    require_path(ctx.config.paths.levels, "levels table");
    levels = dataset::read_similarity_table(ctx.config.paths.levels);
  }
  std::vector<EvalModel> models;
  std::set<std::string> names;
  for (const auto& path : checkpoints) {
    if (!fs::exists(path)) throw Error("checkpoint not found: " + path);
    const auto ckpt = encoder::load_checkpoint(path);
    std::string name = encoder::to_string(ckpt.encoder.role);
    if (names.contains(name)) name = fs::path(path).stem().string();
    if (!names.insert(name).second) throw Error("two checkpoints named " + name);
    ctx.info("embedding " + std::to_string(ds.size()) + " glyphs with " + name);
    models.push_back({name, encoder::embed_matrix(ckpt.encoder,
                                                  std::span<const dataset::GlyphImage>(ds.glyphs),
                                                  ctx.config.threads, &ctx.diagnostics)});
  }
  if (random_embedding) {
    if (!names.insert("random").second) throw Error("two models named random");
    models.push_back({"random", evaluation::random_embedding_table(
                                    ds, ctx.config.encoder.embedding_dim,
                                    derive_seed_str(ctx.config.seed, "random-embedding"))});
  }
  const fs::path dir = ctx.out() / (report_name.empty() ? "eval" : report_name);
  const auto report = evaluate_models(ctx, ds, models, levels, dir);
  write_provenance(ctx, dir, "eval", {{"checkpoints", checkpoints}});
  ctx.flush_warnings();
  *ctx.log << evaluation::format_report_table(report);
}

// ---------------------------------------------------------------------------
// report

/// Merges the model rows of several report.json files into one report.
inline void cmd_report(Context& ctx, const std::vector<std::string>& inputs) {
  if (inputs.empty()) throw Error("report needs at least one --input report.json");
  std::vector<evaluation::ModelMetrics> rows;
  evaluation::SeparabilityTable sep;
  std::vector<std::string> notices;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open report " + path);
    const auto j = nlohmann::json::parse(in);
    for (const auto& row : j.at("models")) {
      evaluation::ModelMetrics mm(row.at("model").get<std::string>());
      for (const auto& [k, v] : row.items())
        if (k != "model") mm.set(k, v);
      rows.push_back(std::move(mm));
    }
    const auto separability = j.value("separability", nlohmann::json::object());
    for (const auto& [triple, by_model] : separability.items())
      for (const auto& [model, v] : by_model.items()) sep[triple][model] = v.get<double>();
    for (const auto& n : j.value("notices", nlohmann::json::array()))
      notices.push_back(n.get<std::string>());
  }
  evaluation::RunMetadata meta{ctx.hash, ctx.config.seed, {{"inputs", inputs}}};
  const auto report = evaluation::build_report(rows, sep, meta, notices);
  const fs::path dir = ctx.out() / "report";
  evaluation::write_report(dir, report);
  *ctx.log << evaluation::format_report_table(report);
}

}  // namespace glyphsim::cli

#endif  // GLYPHSIM_CLI_HPP_
