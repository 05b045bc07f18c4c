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

// pipeline/stages.h
//
// Stage orchestration. Each stage writes into
// <output_dir>/<stage>/<fingerprint>/ and marks completion with stage.json;
// the fingerprint hashes the configuration the stage depends on together
// with the fingerprints of its upstream stages.

#ifndef NEUROTALK_PIPELINE_STAGES_H_
#define NEUROTALK_PIPELINE_STAGES_H_

#include <filesystem>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "corpus/splits.h"
#include "embedding/csp.h"
#include "eval/evaluate.h"
#include "pipeline/config.h"
#include "train/trainer.h"

namespace neurotalk::pipeline {

inline const std::vector<std::string> kStages{"corpus",      "preprocess", "fit-csp", "train-asr", "train-spoken",
                                              "adapt",       "loo",        "evaluate", "ablate"};

struct StageOutcome {
  std::string stage;
  std::string fingerprint;
  std::filesystem::path dir;
  bool reused = false;
  nlohmann::json summary;
};

struct InferResult {
  std::string trial_id;
  std::string transcript;
  std::string reference;
  double cer = 0.0;
  double rms_dbfs = 0.0;
  std::filesystem::path wave_path;
};

// Exclusive advisory lock on <dir>/.lock for the lifetime of the object.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path &dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock &) = delete;
  DirectoryLock &operator=(const DirectoryLock &) = delete;

 private:
  int fd_ = -1;
};

// Everything the generator stages read from the fit-csp stage.
struct FeatureSet {
  corpus::SplitPlan plan;
  embedding::CspBank bank;
  dsp::MelNormStats norm;
  std::vector<corpus::TrialRef> trials;
  std::filesystem::path dir;
  std::filesystem::path mel_dir;
};

class Pipeline {
 public:
  Pipeline(RunConfig config, bool force);

  const RunConfig &config() const { return config_; }

  StageOutcome Run(const std::string &stage);
  StageOutcome Corpus();
  StageOutcome Preprocess();
  StageOutcome FitCsp();
  StageOutcome TrainAsr();
  StageOutcome TrainSpoken();
  StageOutcome Adapt();
  StageOutcome Loo();
  StageOutcome Evaluate();
  StageOutcome Ablate();
  InferResult Infer(const std::string &trial_id, const std::filesystem::path &wave_path);

  std::string Fingerprint(const std::string &stage) const;
  std::filesystem::path StageDir(const std::string &stage) const;
  bool Complete(const std::string &stage) const;

  // Loaders for completed stages.
  FeatureSet LoadFeatures() const;
  std::vector<train::TrainItem> LoadItems(const FeatureSet &fs, corpus::Condition condition, corpus::Split split,
                                          const corpus::SplitPlan &plan, bool unseen_only = false,
                                          bool seen_only = false) const;

 private:
  nlohmann::json FingerprintDoc(const std::string &stage) const;
  void RequireStage(const std::string &stage) const;
  // Returns true when the stage must be (re)computed; prepares its directory.
  bool Begin(const std::string &stage, StageOutcome &out);
  void Finish(StageOutcome &out, const nlohmann::json &summary);
  bool DaDisabled() const { return config_.train.ablation.count("da") > 0; }

  RunConfig config_;  // with ablation switches applied
  bool force_;
};

}  // namespace neurotalk::pipeline

#endif  // NEUROTALK_PIPELINE_STAGES_H_
