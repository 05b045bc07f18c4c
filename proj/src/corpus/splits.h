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

// corpus/splits.h

#ifndef NEUROTALK_CORPUS_SPLITS_H_
#define NEUROTALK_CORPUS_SPLITS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpus/synth.h"

namespace neurotalk::corpus {

struct TrialRef {
  int subject = 0;
  int class_index = 0;
  int index = 0;  // repetition number within (subject, class)
  Condition condition = Condition::kSpoken;
  std::uint64_t seed = 0;

  std::string Id() const;
};

// Seed shared by the spoken and imagined trial with the same repetition
// number, so that both are paired with the same voice clip.
std::uint64_t TrialSeed(const CorpusConfig &config, int subject, int class_index, int index);

std::vector<TrialRef> EnumerateTrials(const CorpusConfig &config);

enum class Split { kTrain, kVal, kTest };
std::string SplitName(Split s);

enum class SplitScheme { kFiveFold, kLeaveOneOut };

struct SplitPlan {
  // Trials without an entry take no part in generator training or evaluation.
  std::map<std::string, Split> assignments;
  std::set<int> unseen_classes;
  std::optional<int> loo_subject;
  int fold = 0;
  // Unseen-class imagined trials from the training folds. They are used only
  // to fit the spatial filters, which need every class represented.
  std::set<std::string> csp_only;

  std::optional<Split> Find(const std::string &id) const;
};

inline constexpr int kNumFolds = 5;

SplitPlan BuildSplits(const std::vector<TrialRef> &trials,
                      const std::vector<std::string> &unseen_labels, SplitScheme scheme,
                      int fold, std::uint64_t seed,
                      std::optional<int> loo_subject = std::nullopt);

}  // namespace neurotalk::corpus

#endif  // NEUROTALK_CORPUS_SPLITS_H_
