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

#ifndef GLYPHSIM_ENCODER_CHECKPOINT_HPP_
#define GLYPHSIM_ENCODER_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/encoder/predictor.hpp"
#include "glyphsim/framed.hpp"

// Checkpoints use the framed container with magic "GLYPHSIM". The header
// lists tensor names, shapes, dtype and byte offsets, plus run metadata;
// the payload holds the tensors in header order.
namespace glyphsim::encoder {

inline constexpr char kCheckpointMagic[8] = {'G', 'L', 'Y', 'P', 'H', 'S', 'I', 'M'};
inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointMetadata {
  std::string stage;  // "stage1", "stage2", "init"
  std::int64_t step = 0;
  std::string config_hash;
  nlohmann::json extra = nlohmann::json::object();
};

struct Checkpoint {
  EncoderParams<float> encoder;
  std::optional<PredictorParams<float>> predictor;
  CheckpointMetadata meta;
};


inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  framed::Framed f;
  f.header["format"] = "glyphsim-checkpoint";
  f.header["format_version"] = kCheckpointFormatVersion;
  f.header["tensors"] = nlohmann::json::array();
  framed::add_tensors(f, ckpt.encoder.tensors);
  if (ckpt.predictor) framed::add_tensors(f, ckpt.predictor->tensors);
  nlohmann::json meta;
  meta["architecture"] = ckpt.encoder.config.architecture;
  meta["embedding_dim"] = ckpt.encoder.config.embedding_dim;
  meta["seed"] = ckpt.encoder.config.seed;
  meta["role"] = to_string(ckpt.encoder.role);
  meta["normalization"] = kNormalization;
  meta["activation"] = kActivation;
  meta["stage"] = ckpt.meta.stage;
  meta["step"] = ckpt.meta.step;
  meta["config_hash"] = ckpt.meta.config_hash;
  meta["tool_version"] = kVersion;
  meta["extra"] = ckpt.meta.extra;
  if (ckpt.predictor) {
    meta["predictor"] = {{"dim", ckpt.predictor->dim}, {"hidden", ckpt.predictor->hidden}};
  }
  f.header["metadata"] = meta;
  framed::write_framed(path, kCheckpointMagic, std::move(f));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const framed::Framed f = framed::read_framed(path, kCheckpointMagic, "checkpoint");
  const int version = f.header.value("format_version", -1);
  if (version != kCheckpointFormatVersion)
    throw Error("checkpoint format version " + std::to_string(version) +
                " is not supported (expected " +
                std::to_string(kCheckpointFormatVersion) + ")");
  const auto& meta = f.header.at("metadata");
  Checkpoint ckpt;
  ckpt.encoder.config.architecture = meta.at("architecture");
  ckpt.encoder.config.embedding_dim = meta.at("embedding_dim");
  ckpt.encoder.config.seed = meta.at("seed");
  ckpt.encoder.role = parse_role(meta.at("role"));
  ckpt.encoder.tensors = framed::extract_tensors(f, "pred.", false);
  if (!ckpt.encoder.tensors.same_layout(encoder_layout<float>(ckpt.encoder.config)))
    throw Error("checkpoint tensors do not match architecture " +
                ckpt.encoder.config.architecture);
  if (meta.contains("predictor")) {
    PredictorParams<float> p;
    p.dim = meta["predictor"].at("dim");
    p.hidden = meta["predictor"].at("hidden");
    p.tensors = framed::extract_tensors(f, "pred.", true);
    ckpt.predictor = std::move(p);
  }
  ckpt.meta.stage = meta.value("stage", "");
  ckpt.meta.step = meta.value("step", std::int64_t{0});
  ckpt.meta.config_hash = meta.value("config_hash", "");
  ckpt.meta.extra = meta.value("extra", nlohmann::json::object());
  return ckpt;
}

/// Re-labels a loaded checkpoint's encoder, e.g. a teacher reused as the
/// student or target initialization.
inline EncoderParams<float> with_role(EncoderParams<float> params, Role role) {
  params.role = role;
  return params;
}

}  // namespace glyphsim::encoder

#endif  // GLYPHSIM_ENCODER_CHECKPOINT_HPP_
