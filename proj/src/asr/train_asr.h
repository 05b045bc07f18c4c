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

// asr/train_asr.h

#ifndef NEUROTALK_ASR_TRAIN_ASR_H_
#define NEUROTALK_ASR_TRAIN_ASR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "asr/recognizer.h"
#include "common/types.h"

namespace neurotalk::asr {

struct AsrExample {
  Mat mel;  // normalised log-mel, bands x frames
  std::string transcript;
};

struct AsrTrainConfig {
  int max_epochs = 80;
  int batch = 10;
  double lr = 1e-3;
  double clip_norm = 5.0;
  double target_cer = 10.0;
  // Random time stretch applied to training mels.
  double stretch_min = 0.9;
  double stretch_max = 1.25;
  int patience = 15;
  std::uint64_t seed = 7;
};

struct AsrTrainReport {
  int epochs = 0;
  int best_epoch = -1;
  double best_cer = 100.0;
  bool reached_target = false;
  std::vector<double> train_loss;
  std::vector<double> heldout_cer;
};

// Resamples columns by linear interpolation to `frames` columns.
Mat TimeStretch(const Mat &mel, int frames);

double CorpusCer(const Recognizer &model, const std::vector<AsrExample> &examples);

// Trains in place and leaves the best held-out parameters in `model`.
AsrTrainReport TrainRecognizer(Recognizer &model, const std::vector<AsrExample> &train,
                               const std::vector<AsrExample> &heldout, const AsrTrainConfig &config);

}  // namespace neurotalk::asr

#endif  // NEUROTALK_ASR_TRAIN_ASR_H_
