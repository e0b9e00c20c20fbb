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


#ifndef GLYPHSIM_GLYPHSIM_HPP_
#define GLYPHSIM_GLYPHSIM_HPP_

#include "glyphsim/core.hpp"
#include "glyphsim/dataset/augment.hpp"
#include "glyphsim/dataset/dataset.hpp"
#include "glyphsim/dataset/glyph_image.hpp"
#include "glyphsim/dataset/omniglot.hpp"
#include "glyphsim/dataset/png_io.hpp"
#include "glyphsim/dataset/sampling.hpp"
#include "glyphsim/dataset/similarity_levels.hpp"
#include "glyphsim/dataset/unicode.hpp"
#include "glyphsim/encoder/checkpoint.hpp"
#include "glyphsim/encoder/ema.hpp"
#include "glyphsim/encoder/encoder.hpp"
#include "glyphsim/encoder/predictor.hpp"
#include "glyphsim/evaluation/baselines.hpp"
#include "glyphsim/evaluation/episodes.hpp"
#include "glyphsim/evaluation/ranking.hpp"
#include "glyphsim/evaluation/report.hpp"
#include "glyphsim/evaluation/retrieval.hpp"
#include "glyphsim/evaluation/spearman.hpp"
#include "glyphsim/losses/byol.hpp"
#include "glyphsim/losses/supcon.hpp"
#include "glyphsim/rng.hpp"
#include "glyphsim/run_config.hpp"
#include "glyphsim/similarity/embedding_store.hpp"
#include "glyphsim/similarity/similarity.hpp"
#include "glyphsim/training/stage1.hpp"
#include "glyphsim/training/stage2.hpp"

#endif  // GLYPHSIM_GLYPHSIM_HPP_
