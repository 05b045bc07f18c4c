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

// train/trainer.h
//
// Adversarial training of the generator/discriminator pair on
// (embedding, voice mel, transcript) items.

#ifndef NEUROTALK_TRAIN_TRAINER_H_
#define NEUROTALK_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "asr/recognizer.h"
#include "common/types.h"
#include "model/discriminator.h"
#include "model/generator.h"
#include "nn/optim.h"
#include "train/losses.h"

namespace neurotalk::train {

struct TrainItem {
  std::string id;
  Mat embedding;  // normalised, features x segments
  Mat target;     // normalised voice mel, bands x frames
  std::vector<int> transcript;
  std::string text;
  int class_index = 0;
  int subject = 0;
};

struct StageConfig {
  double lr = 1e-4;
  int max_epochs = 500;
  int batch = 10;
  int patience = 50;
  double lr_decay = 0.999;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double weight_decay = 0.01;
  double clip_norm = 0.0;  // 0 disables clipping
  std::uint64_t seed = 1;

  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double rec = 0.0;
  double adv = 0.0;
  double ctc = 0.0;
  double gen_total = 0.0;
  double disc = 0.0;
  double val_rmse = 0.0;
  double val_cer = 0.0;
};

struct ValidationMetrics {
  double rmse = 0.0;
  double cer = 0.0;
};

// RMSE on the [0, 1] rescaled mel and CER of the recognizer run on the
// generated mel, averaged over `items`.
ValidationMetrics Validate(const model::Generator &gen, const asr::Recognizer &asr,
                           const std::vector<TrainItem> &items);

struct StageResult {
  std::vector<EpochRecord> log;
  int best_epoch = -1;
  ValidationMetrics best;
  bool early_stopped = false;
};

class Trainer {
 public:
  // `asr` stays frozen; it may be null when the CTC weight is zero, but is
  // then also unavailable for validation CER.
  Trainer(model::Generator &gen, model::Discriminator &disc, const asr::Recognizer *asr,
          const LossWeights &weights, const StageConfig &config);

  // Trains and leaves the best-validation parameters in both networks.
  StageResult Run(const std::vector<TrainItem> &train, const std::vector<TrainItem> &val,
                  const std::function<void(const EpochRecord &)> &on_epoch = {});

 private:
  void Batch(const std::vector<const TrainItem *> &batch, EpochRecord &acc);

  model::Generator &gen_;
  model::Discriminator &disc_;
  const asr::Recognizer *asr_;
  LossWeights weights_;
  StageConfig config_;
  nn::AdamW gen_opt_;
  nn::AdamW disc_opt_;
};

}  // namespace neurotalk::train

#endif  // NEUROTALK_TRAIN_TRAINER_H_
