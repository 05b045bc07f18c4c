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

// corpus/splits.cc

#include "corpus/splits.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "common/error.h"
#include "common/rng.h"
#include "corpus/classes.h"

namespace neurotalk::corpus {

std::string TrialRef::Id() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "s%02d-c%02d-r%03d-%s", subject, class_index, index,
                condition == Condition::kSpoken ? "spk" : "img");
  return buf;
}

std::uint64_t TrialSeed(const CorpusConfig &config, int subject, int class_index, int index) {
  return DeriveSeed(config.seed, {static_cast<std::uint64_t>(subject),
                                  static_cast<std::uint64_t>(class_index),
                                  static_cast<std::uint64_t>(index)});
}

std::vector<TrialRef> EnumerateTrials(const CorpusConfig &config) {
  std::vector<TrialRef> out;
  for (Condition cond : {Condition::kSpoken, Condition::kImagined})
    for (int s = 0; s < config.subjects; ++s)
      for (int c = 0; c < NumClasses(); ++c)
        for (int r = 0; r < config.trials_per_class; ++r)
          out.push_back({s, c, r, cond, TrialSeed(config, s, c, r)});
  return out;
}

std::string SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> SplitPlan::Find(const std::string &id) const {
  auto it = assignments.find(id);
  if (it == assignments.end()) return std::nullopt;
  return it->second;
}

SplitPlan BuildSplits(const std::vector<TrialRef> &trials,
                      const std::vector<std::string> &unseen_labels, SplitScheme scheme,
                      int fold, std::uint64_t seed, std::optional<int> loo_subject) {
  if (fold < 0 || fold >= kNumFolds)
    Fail(ErrorCode::kInvalidArgument, "fold must lie in [0, 5), got " + std::to_string(fold));
  SplitPlan plan;
  plan.fold = fold;
  for (const auto &label : unseen_labels) plan.unseen_classes.insert(ClassIndex(label));
  if (scheme == SplitScheme::kLeaveOneOut) {
    if (!loo_subject) Fail(ErrorCode::kInvalidArgument, "leave-one-out needs a subject");
    plan.loo_subject = loo_subject;
  }

  // Fold membership is decided per (subject, class) stratum over repetition
  // numbers, so paired spoken/imagined trials always land in the same fold.
  std::map<std::pair<int, int>, std::set<int>> strata;
  for (const TrialRef &t : trials) strata[{t.subject, t.class_index}].insert(t.index);
  std::map<std::tuple<int, int, int>, int> fold_of;
  for (const auto &[key, indices] : strata) {
    std::vector<int> order(indices.begin(), indices.end());
    Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(key.first),
                              static_cast<std::uint64_t>(key.second)}));
    std::shuffle(order.begin(), order.end(), rng);
    const int n = static_cast<int>(order.size());
    for (int p = 0; p < n; ++p)
      fold_of[{key.first, key.second, order[static_cast<std::size_t>(p)]}] = p * kNumFolds / n;
  }

  const int val_fold = (fold + 1) % kNumFolds;
  for (const TrialRef &t : trials) {
    if (plan.loo_subject) {
      const bool held_out = t.subject == *plan.loo_subject;
      // Pretraining sees only the other subjects' spoken EEG; adaptation and
      // evaluation see only the held-out subject's imagined EEG.
      if (held_out == (t.condition == Condition::kSpoken)) continue;
    }
    const int f = fold_of.at({t.subject, t.class_index, t.index});
    Split s = f == fold ? Split::kTest : (f == val_fold ? Split::kVal : Split::kTrain);
    if (s == Split::kTrain && plan.unseen_classes.count(t.class_index)) {
      if (t.condition == Condition::kImagined) plan.csp_only.insert(t.Id());
      continue;
    }
    plan.assignments[t.Id()] = s;
  }
  return plan;
}

}  // namespace neurotalk::corpus
