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


#include <gtest/gtest.h>

#include "json.hpp"

#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/encoder/checkpoint.hpp"
#include "support/cli_runner.hpp"
#include "support/synthetic_corpus.hpp"
#include "support/temp_dir.hpp"

namespace glyphsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::run_command;

const std::string kCli = GLYPHSIM_CLI_PATH;
const std::string kSmoke = std::string(GLYPHSIM_SOURCE_DIR) + "/configs/smoke.json";

json read_json(const fs::path& p) { return json::parse(testing::read_file(p)); }

/// One prepared corpus and one trained teacher shared by the suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    tmp_ = new testing::TempDir("glyphsim-cli");
    fixture_ = testing::write_cli_fixture(tmp_->path());
    out_ = (*tmp_ / "out").string();
    prepare_ = run({"prepare", "--data-root", fixture_.data_root.string(), "--manifest",
                    fixture_.manifest.string()});
    teacher_ = run({"train-teacher"});
  }
  static void TearDownTestSuite() {
    delete tmp_;
    tmp_ = nullptr;
  }

  static testing::CommandResult run(std::vector<std::string> args) {
    args.insert(args.end(), {"--config", kSmoke, "--out", out_, "--log-every", "0"});
    return run_command(kCli, args);
  }
  static fs::path out() { return out_; }
  static fs::path teacher_ckpt() { return out() / "teacher" / "teacher.ckpt"; }

  static inline testing::TempDir* tmp_ = nullptr;
  static inline testing::CliFixture fixture_;
  static inline std::string out_;
  static inline testing::CommandResult prepare_, teacher_;
};

TEST_F(Cli, PrepareWritesThreeSplitsAndManifestEcho) {
  ASSERT_EQ(prepare_.exit_code, 0) << prepare_.output;
  for (const char* split : {"supervised_invented", "unsupervised_historical", "evaluation"})
    EXPECT_TRUE(fs::exists(out() / "prepared" / split / "index.tsv")) << split;
  EXPECT_TRUE(fs::exists(out() / "prepared" / "manifest.tsv"));
  const auto prov = read_json(out() / "prepared" / "provenance.json");
  EXPECT_EQ(prov["command"], "prepare");
  // 24 classes x 4 instances x (1 + 2 augmented copies)
  EXPECT_EQ(prov["details"]["supervised_invented"]["glyphs"], 288);
  EXPECT_EQ(prov["details"]["evaluation"]["classes"], 24);
}

TEST_F(Cli, PrepareIsIdempotent) {
  ASSERT_EQ(prepare_.exit_code, 0);
  const auto before = testing::read_file(out() / "prepared" / "supervised_invented" / "index.tsv");
  const auto png = out() / "prepared" / "supervised_invented";
  const auto again = run({"prepare", "--data-root", fixture_.data_root.string(), "--manifest",
                          fixture_.manifest.string()});
  ASSERT_EQ(again.exit_code, 0) << again.output;
  EXPECT_EQ(testing::read_file(png / "index.tsv"), before);
}

TEST_F(Cli, ManifestNamingAbsentScriptFails) {
  testing::TempDir tmp;
  testing::write_file(tmp / "m.tsv", "Script_A0\tsupervised_invented\nKlingon\tevaluation\n");
  const auto r = run_command(kCli, {"prepare", "--data-root", fixture_.data_root.string(),
                                    "--manifest", (tmp / "m.tsv").string(), "--out",
                                    (tmp / "out").string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("Klingon"), std::string::npos) << r.output;
}

TEST_F(Cli, TeacherCheckpointAndLogs) {
  ASSERT_EQ(teacher_.exit_code, 0) << teacher_.output;
  const auto ckpt = encoder::load_checkpoint(teacher_ckpt());
  EXPECT_EQ(ckpt.encoder.role, encoder::Role::kTeacher);
  EXPECT_EQ(ckpt.encoder.config.architecture, "compact_cnn");
  EXPECT_EQ(ckpt.meta.stage, "stage1");
  const auto summary = read_json(out() / "teacher" / "summary.json");
  EXPECT_EQ(summary["validation_class_ids"].size(), 2u);
  EXPECT_TRUE(fs::exists(out() / "teacher" / "train_log.csv"));
}

TEST_F(Cli, MissingTeacherCheckpointFails) {
  const auto r = run({"train-student", "--init", (out() / "nope.ckpt").string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("teacher checkpoint not found"), std::string::npos) << r.output;
}

TEST_F(Cli, StudentFromTeacher) {
  ASSERT_EQ(teacher_.exit_code, 0);
  const auto r = run({"train-student", "--init", teacher_ckpt().string()});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("stage 2 (teacher init): 24 classes"), std::string::npos) << r.output;
  const auto student = encoder::load_checkpoint(out() / "student" / "student.ckpt");
  const auto target = encoder::load_checkpoint(out() / "student" / "target.ckpt");
  EXPECT_EQ(student.encoder.role, encoder::Role::kStudent);
  EXPECT_TRUE(student.predictor.has_value());
  EXPECT_EQ(target.encoder.role, encoder::Role::kTarget);
  EXPECT_FALSE(target.predictor.has_value());
  const auto summary = read_json(out() / "student" / "summary.json");
  EXPECT_EQ(summary["target_gradient_max"], 0.0);
  EXPECT_LT(summary["max_probe_cosine"].get<double>(), 0.99);
}

TEST_F(Cli, RandomInitPoolsSupervisedAndUnsupervisedData) {
  ASSERT_EQ(prepare_.exit_code, 0);
  const auto r = run({"train-student", "--init", "random", "--name", "baseline"});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("stage 2 (random init): 48 classes"), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(out() / "baseline" / "target.ckpt"));
}

TEST_F(Cli, EmbedWritesStoresAndChecksDimension) {
  ASSERT_EQ(teacher_.exit_code, 0);
  const auto r = run({"embed", "--checkpoint", teacher_ckpt().string()});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* s : {"Script_A2.emb", "Script_B2.emb", "Script_C2.emb", "embeddings.csv"})
    EXPECT_TRUE(fs::exists(out() / "embeddings" / "teacher" / s)) << s;
  const auto bad = run({"embed", "--checkpoint", teacher_ckpt().string(), "--dim", "64"});
  EXPECT_NE(bad.exit_code, 0);
  EXPECT_NE(bad.output.find("does not match requested 64"), std::string::npos) << bad.output;
}

TEST_F(Cli, EmbedRejectsEmptyDataset) {
  ASSERT_EQ(teacher_.exit_code, 0);
  testing::TempDir tmp;
  dataset::save_dataset_dir(dataset::Dataset{}, tmp / "empty");
  const auto r = run({"embed", "--checkpoint", teacher_ckpt().string(), "--data",
                      (tmp / "empty").string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("empty dataset"), std::string::npos) << r.output;
}

TEST_F(Cli, EvalWithLevelsProducesFullReport) {
  ASSERT_EQ(teacher_.exit_code, 0);
  const auto r = run({"eval", "--checkpoint", teacher_ckpt().string(), "--random-embedding",
                      "--levels", fixture_.levels.string(), "--name", "eval_levels"});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto report = read_json(out() / "eval_levels" / "report.json");
  for (const char* key : {"n20r1", "n20r5", "ndcg10", "spearman_rho"}) {
    EXPECT_TRUE(report.contains(key)) << key;
    EXPECT_FALSE(report[key].is_null()) << key;
  }
  EXPECT_EQ(report["models"].size(), 2u);
  EXPECT_EQ(report["models"][1]["model"], "random");
  EXPECT_TRUE(report["separability"].contains("Script_A2/Script_B2/Script_C2"));
  EXPECT_TRUE(fs::exists(out() / "eval_levels" / "report.txt"));
  EXPECT_TRUE(fs::exists(out() / "eval_levels" / "episodes_teacher.csv"));
  EXPECT_NE(r.output.find("N20R1"), std::string::npos);
}

TEST_F(Cli, EvalWithoutLevelsSkipsScriptMetricsWithNotice) {
  ASSERT_EQ(teacher_.exit_code, 0);
  const auto r = run({"eval", "--checkpoint", teacher_ckpt().string(), "--name", "eval_plain"});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto report = read_json(out() / "eval_plain" / "report.json");
  EXPECT_TRUE(report["ndcg10"].is_null());
  EXPECT_TRUE(report["spearman_rho"].is_null());
  const auto notices = report["notices"].dump();
  EXPECT_NE(notices.find("no similarity level table"), std::string::npos) << notices;
}

TEST_F(Cli, EvalOnSingleInstanceScriptsSkipsRetrieval) {
  testing::TempDir tmp;
  testing::SyntheticSpec spec;
  spec.families = 3;
  spec.scripts_per_family = 1;
  spec.characters_per_script = 5;
  spec.instances = 1;
  dataset::save_dataset_dir(testing::make_dataset(spec), tmp / "rendered");
  testing::write_file(tmp / "levels.tsv", "Script_A0\tScript_B0\t1\n");
  const auto r = run({"eval", "--random-embedding", "--data", (tmp / "rendered").string(),
                      "--levels", (tmp / "levels.tsv").string(), "--name", "eval_rendered"});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto report = read_json(out() / "eval_rendered" / "report.json");
  EXPECT_TRUE(report["n20r1"].is_null());
  EXPECT_FALSE(report["ndcg10"].is_null());
  EXPECT_NE(report["notices"].dump().find("glyph retrieval skipped"), std::string::npos);
  const auto merged = run({"report", "--input", (out() / "eval_rendered" / "report.json").string()});
  EXPECT_EQ(merged.exit_code, 0) << merged.output;
}

TEST_F(Cli, EvalNeedsAModel) {
  const auto r = run({"eval"});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("at least one --checkpoint"), std::string::npos) << r.output;
}

TEST_F(Cli, ReportMergesRuns) {
  ASSERT_EQ(teacher_.exit_code, 0);
  ASSERT_EQ(run({"eval", "--random-embedding", "--name", "eval_random"}).exit_code, 0);
  ASSERT_EQ(run({"eval", "--checkpoint", teacher_ckpt().string(), "--name", "eval_teacher"}).exit_code,
            0);
  const auto r = run({"report", "--input", (out() / "eval_teacher" / "report.json").string(),
                      "--input", (out() / "eval_random" / "report.json").string()});
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto merged = read_json(out() / "report" / "report.json");
  ASSERT_EQ(merged["models"].size(), 2u);
  EXPECT_EQ(merged["models"][0]["model"], "teacher");
  EXPECT_EQ(merged["models"][1]["model"], "random");
}

TEST(CliBasics, VersionAndUsage) {
  const auto v = run_command(kCli, {"--version"});
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_NE(v.output.find(kVersion), std::string::npos);
  EXPECT_NE(run_command(kCli, {}).exit_code, 0);
  EXPECT_NE(run_command(kCli, {"frobnicate"}).exit_code, 0);
}

}  // namespace
}  // namespace glyphsim
