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

#include "glyphsim/run_config.hpp"
#include "support/temp_dir.hpp"

namespace glyphsim {
namespace {

using nlohmann::json;

TEST(RunConfig, CanonicalFormRoundTrips) {
  RunConfig c;
  c.seed = 11;
  c.threads = 3;
  c.stage2.init_mode = training::InitMode::kRandom;
  c.separability_triples.push_back({"Greek", "Latin", "CJK"});
  c.paths.out = "runs/x";
  const json j = to_json(c);
  const RunConfig back = run_config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.threads, 3);
  EXPECT_EQ(back.stage2.init_mode, training::InitMode::kRandom);
}

TEST(RunConfig, DefaultsFillMissingSections) {
  const RunConfig c = run_config_from_json(json::parse(R"({"seed": 5})"));
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.encoder.architecture, "simple_cnn");
  EXPECT_EQ(c.encoder.embedding_dim, 128);
  EXPECT_EQ(c.stage1.temperature, 0.1);
  EXPECT_EQ(c.stage2.ema_decay, 0.996);
  EXPECT_EQ(c.eval.n_way, 20);
  EXPECT_EQ(c.eval.ndcg_k, 10);
}

TEST(RunConfig, SeedsDeriveFromMasterSeed) {
  const RunConfig a = run_config_from_json(json::parse(R"({"seed": 1})"));
  const RunConfig b = run_config_from_json(json::parse(R"({"seed": 2})"));
  const std::set<std::uint64_t> seeds{a.encoder.seed, a.stage1.seed, a.stage2.seed, a.eval.seed};
  EXPECT_EQ(seeds.size(), 4u);
  EXPECT_NE(a.stage1.seed, b.stage1.seed);
  EXPECT_EQ(a.stage1.seed, run_config_from_json(json::parse(R"({"seed": 1})")).stage1.seed);
}

TEST(RunConfig, UnknownKeysAreErrors) {
  EXPECT_THROW(run_config_from_json(json::parse(R"({"sede": 1})")), Error);
  try {
    run_config_from_json(json::parse(R"({"stage2": {"kappa": 0.99}})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("stage2.kappa"), std::string::npos);
  }
}

TEST(RunConfig, TypeAndValueErrors) {
  EXPECT_THROW(run_config_from_json(json::parse(R"({"stage1": {"epochs": "many"}})")), Error);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"stage2": {"init_mode": "imagenet"}})")),
               Error);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"eval": {"granularity": "glyphs"}})")), Error);
  EXPECT_THROW(
      run_config_from_json(json::parse(R"({"eval": {"separability_triples": [["a", "b"]]}})")),
      Error);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"encoder": 3})")), Error);
}

TEST(RunConfig, HashIgnoresRuntimeFields) {
  RunConfig a;
  a.seed = 3;
  RunConfig b = a;
  b.threads = 8;
  b.paths.data_root = "/elsewhere";
  b.paths.out = "other";
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.stage1.temperature = 0.07;
  EXPECT_NE(config_hash(a), config_hash(b));
  RunConfig c = a;
  c.seed = 4;
  EXPECT_NE(config_hash(a), config_hash(c));
}

TEST(RunConfig, HashIsStableAcrossParses) {
  const char* text = R"({"seed": 9, "encoder": {"architecture": "compact_cnn", "embedding_dim": 32}})";
  EXPECT_EQ(config_hash(run_config_from_json(json::parse(text))),
            config_hash(run_config_from_json(json::parse(text))));
}

TEST(RunConfig, LoadFromFile) {
  testing::TempDir tmp;
  testing::write_file(tmp / "ok.json", R"({"seed": 2, "threads": 2})");
  EXPECT_EQ(load_run_config(tmp / "ok.json").threads, 2);
  testing::write_file(tmp / "bad.json", "{seed: ");
  EXPECT_THROW(load_run_config(tmp / "bad.json"), Error);
  EXPECT_THROW(load_run_config(tmp / "missing.json"), Error);
}

TEST(RunConfig, ShippedConfigsParse) {
  for (const char* name : {"default.json", "smoke.json"}) {
    const auto path = std::filesystem::path(GLYPHSIM_SOURCE_DIR) / "configs" / name;
    SCOPED_TRACE(path.string());
    RunConfig c = load_run_config(path);
    EXPECT_NO_THROW(c.validate());
  }
}

}  // namespace
}  // namespace glyphsim
