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

// eval/evaluate.h

#ifndef NEUROTALK_EVAL_EVALUATE_H_
#define NEUROTALK_EVAL_EVALUATE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "asr/recognizer.h"
#include "dsp/spectral.h"
#include "model/generator.h"
#include "train/trainer.h"
#include "vocoder/griffin_lim.h"

namespace neurotalk::eval {

// Table rows, in display order.
inline const std::vector<std::string> kConditions{"spoken", "imagined", "unseen_spoken", "unseen_imagined"};

enum class AsrRoute {
  kVocoder,  // vocode, re-extract the mel, then recognise
  kDirect,   // recognise the generated mel
};

const char *AsrRouteName(AsrRoute route);
AsrRoute ParseAsrRoute(const std::string &name);

struct EvalItem {
  train::TrainItem item;
  std::string condition;  // one of kConditions
};

struct TrialRecord {
  std::string id;
  int subject = 0;
  int class_index = 0;
  std::string condition;
  double rmse = 0.0;
  std::string reference;
  std::string hypothesis;
  double cer = 0.0;
};

struct ConditionRow {
  std::string condition;
  int trials = 0;
  int subjects = 0;
  double rmse_mean = 0.0, rmse_std = 0.0;  // over per-subject means
  double cer_mean = 0.0, cer_std = 0.0;
  double shuffle_cer = 0.0;  // hypotheses permuted across trials
  int silence_trials = 0;
  int silence_empty = 0;
};

struct EvalReport {
  std::vector<ConditionRow> rows;
  std::vector<TrialRecord> records;
  std::string fingerprint;

  const ConditionRow *Row(const std::string &condition) const;
};

struct EvalOptions {
  AsrRoute route = AsrRoute::kVocoder;
  vocoder::VocoderSpec vocoder;
  std::optional<dsp::MelNormStats> norm;  // required for the vocoder route
  int shuffle_permutations = 20;
  std::uint64_t seed = 1;
};

// Hypothesis for a generated mel under the configured route.
std::string Recognize(const Mat &gen_mel, const asr::Recognizer &asr, const EvalOptions &options);

TrialRecord EvaluateTrial(const EvalItem &item, const model::Generator &gen,
                          const asr::Recognizer &asr, const EvalOptions &options);

// Mean CER of each record's reference against hypotheses drawn by random
// permutations of `pool`.
double ShuffleCer(const std::vector<const TrialRecord *> &records,
                  const std::vector<const TrialRecord *> &pool, int permutations, std::uint64_t seed);

// Spoken-domain or imagined-domain records pool their hypotheses for the
// shuffle baseline, so unseen rows are compared with other classes' outputs.
std::string ConditionDomain(const std::string &condition);

// Per-condition aggregates; std is taken over per-subject means.
std::vector<ConditionRow> Aggregate(const std::vector<TrialRecord> &records, int shuffle_permutations,
                                    std::uint64_t seed);

// Tab-separated table, one row per condition.
void WriteTable(std::ostream &out, const EvalReport &report);

}  // namespace neurotalk::eval

#endif  // NEUROTALK_EVAL_EVALUATE_H_
