// Copyright 2026 The neurotalk-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// pipeline/config.h
//
// The run configuration: one JSON document with sections corpus, dsp,
// embedding, model, train and eval. Keys missing from the document take the
// defaults below; unknown keys are rejected.

#ifndef NEUROTALK_PIPELINE_CONFIG_H_
#define NEUROTALK_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asr/recognizer.h"
#include "asr/train_asr.h"
#include "corpus/synth.h"
#include "dsp/preprocess.h"
#include "dsp/spectral.h"
#include "embedding/csp.h"
#include "eval/evaluate.h"
#include "model/discriminator.h"
#include "model/generator.h"
#include "train/losses.h"
#include "train/trainer.h"
#include "vocoder/griffin_lim.h"

namespace neurotalk::pipeline {

inline const std::vector<std::string> kAblationSwitches{"gru", "gan_loss", "rec_loss", "ctc_loss", "da"};

struct CorpusSection {
  corpus::CorpusConfig synth;
  std::optional<std::uint64_t> seed;  // defaults to the master seed
  std::vector<std::string> unseen{"stop"};
  int fold = 0;
  std::string storage = "float32";  // dtype of EEG arrays on disk
};

struct DspSection {
  dsp::PreprocessConfig preprocess;
  dsp::StftConfig stft;
};

struct ModelSection {
  model::GeneratorConfig generator;
  model::DiscriminatorConfig discriminator;
  asr::RecognizerConfig asr;
};

struct AsrTrainSection {
  asr::AsrTrainConfig schedule;
  int clips_per_class = 6;  // per subject
  int heldout_per_class = 1;
};

struct TrainSection {
  train::LossWeights weights;
  train::StageConfig spoken;
  train::StageConfig adapt{.lr = 1e-5};
  AsrTrainSection asr;
  std::set<std::string> ablation;
  int loo_subject = 0;
};

struct EvalSection {
  eval::AsrRoute asr_route = eval::AsrRoute::kVocoder;
  vocoder::VocoderSpec vocoder;
  int shuffle_permutations = 20;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "neurotalk-run";
  CorpusSection corpus;
  DspSection dsp;
  embedding::CspConfig embedding;
  ModelSection model;
  TrainSection train;
  EvalSection eval;

  std::uint64_t CorpusSeed() const { return corpus.seed.value_or(seed); }
  // Cross-field checks; throws kConfig.
  void Validate() const;
};

// Throws kConfig on unknown keys, wrong types, or invalid values.
RunConfig ParseRunConfig(const nlohmann::json &doc);
RunConfig LoadRunConfig(const std::filesystem::path &path);

// Full document including defaults; ParseRunConfig(ToJson(c)) == c.
nlohmann::json ToJson(const RunConfig &config);

// Section serialisers used for fingerprints.
nlohmann::json CorpusJson(const RunConfig &c);
nlohmann::json SplitJson(const RunConfig &c);
nlohmann::json DspJson(const RunConfig &c);
nlohmann::json EmbeddingJson(const RunConfig &c);
nlohmann::json GeneratorJson(const model::GeneratorConfig &g);
nlohmann::json DiscriminatorJson(const model::DiscriminatorConfig &d);
nlohmann::json RecognizerJson(const asr::RecognizerConfig &a);
nlohmann::json StageJson(const train::StageConfig &s);
nlohmann::json WeightsJson(const train::LossWeights &w);
nlohmann::json AsrTrainJson(const AsrTrainSection &a);
nlohmann::json EvalJson(const EvalSection &e);

// The configuration a single ablation switch produces from `base`.
RunConfig ApplyAblation(const RunConfig &base, const std::set<std::string> &disabled);

}  // namespace neurotalk::pipeline

#endif  // NEUROTALK_PIPELINE_CONFIG_H_
