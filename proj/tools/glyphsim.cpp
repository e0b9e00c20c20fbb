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


// glyphsim: dataset preparation, two-stage training, embedding export and
// evaluation from one executable.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glyphsim/cli.hpp"

int main(int argc, char** argv) {
  using namespace glyphsim;
  CLI::App app{"glyphsim: glyph and script similarity pipeline", "glyphsim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  int log_every = 10;
  app.add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides config)");
  app.add_option("--threads", threads, "worker threads; 1 gives bit-exact replay")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory (overrides config)");
  app.add_option("--log-every", log_every, "print training progress every N steps (0: off)");

  std::string data_root, manifest, ranges, fonts, levels;
  auto* prepare = app.add_subcommand("prepare", "materialize splits and augmented sets");
  prepare->add_option("--data-root", data_root, "Omniglot-style image root");
  prepare->add_option("--manifest", manifest, "script-to-split manifest");

  auto* render = app.add_subcommand("render-unicode", "render Unicode script ranges");
  render->add_option("--ranges", ranges, "script ranges file");
  render->add_option("--fonts", fonts, "directory of font files");

  std::string data_dir, extra_dir, init, name, checkpoint, report_name;
  auto* teacher = app.add_subcommand("train-teacher", "stage 1: supervised contrastive teacher");
  teacher->add_option("--data", data_dir, "supervised dataset dir (default: prepared split)");

  auto* student = app.add_subcommand("train-student", "stage 2: self-distillation");
  student->add_option("--init", init, "teacher checkpoint path, or 'random'")->required();
  student->add_option("--data", data_dir, "unsupervised dataset dir (default: prepared split)");
  student->add_option("--supervised-data", extra_dir,
                      "supervised dataset dir pooled in for --init random");
  student->add_option("--name", name, "output subdirectory");

  int dim = 0;
  auto* embed = app.add_subcommand("embed", "export embedding stores");
  embed->add_option("--checkpoint", checkpoint, "encoder checkpoint")->required();
  embed->add_option("--data", data_dir, "dataset dir (default: prepared evaluation split)");
  embed->add_option("--name", name, "output subdirectory");
  embed->add_option("--dim", dim, "expected embedding dimension");

  std::vector<std::string> checkpoints, inputs;
  bool random_embedding = false;
  auto* eval = app.add_subcommand("eval", "retrieval, ranking and separability report");
  eval->add_option("--checkpoint", checkpoints, "checkpoint(s) to evaluate");
  eval->add_flag("--random-embedding", random_embedding,
                 "also evaluate the chance-level random-embedding model");
  eval->add_option("--data", data_dir, "evaluation dataset dir (default: prepared split)");
  eval->add_option("--levels", levels, "script similarity level table");
  eval->add_option("--name", report_name, "output subdirectory (default: eval)");

  auto* report = app.add_subcommand("report", "merge report.json files");
  report->add_option("--input", inputs, "report.json file(s)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    cfg.derive_seeds();
    if (threads) cfg.threads = *threads;
    if (!out.empty()) cfg.paths.out = out;
    if (!data_root.empty()) cfg.paths.data_root = data_root;
    if (!manifest.empty()) cfg.paths.manifest = manifest;
    if (!ranges.empty()) cfg.paths.ranges = ranges;
    if (!fonts.empty()) cfg.paths.fonts = fonts;
    if (!levels.empty()) cfg.paths.levels = levels;

    cli::Context ctx(cfg);
    ctx.log_every = log_every;
    ctx.flush_warnings();
    if (*prepare) cli::cmd_prepare(ctx);
    if (*render) cli::cmd_render_unicode(ctx);
    if (*teacher) cli::cmd_train_teacher(ctx, data_dir);
    if (*student) cli::cmd_train_student(ctx, init, name, data_dir, extra_dir);
    if (*embed) cli::cmd_embed(ctx, checkpoint, data_dir, name, dim);
    if (*eval) cli::cmd_eval(ctx, checkpoints, random_embedding, data_dir, report_name);
    if (*report) cli::cmd_report(ctx, inputs);
  } catch (const std::exception& e) {
    std::cerr << "glyphsim: error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
