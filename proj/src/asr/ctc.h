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

// asr/ctc.h
//
// Connectionist temporal classification over a (symbols x steps) matrix of
// per-step log-probabilities.

#ifndef NEUROTALK_ASR_CTC_H_
#define NEUROTALK_ASR_CTC_H_

#include <string>
#include <vector>

#include "common/types.h"

namespace neurotalk::asr {

struct CtcResult {
  double loss = 0.0;  // +inf when no alignment exists
  bool feasible = true;
  Mat grad;  // d loss / d log_probs, same shape as the input; zero if infeasible
};

// Minimum number of steps needed to emit `target` (repeats need a blank).
int CtcMinSteps(const std::vector<int> &target);

CtcResult CtcLoss(const Mat &log_probs, const std::vector<int> &target, int blank = 0,
                  bool with_grad = true);

// Per-step argmax, repeats collapsed, blanks removed.
std::vector<int> GreedyDecode(const Mat &log_probs, int blank = 0);

}  // namespace neurotalk::asr

#endif  // NEUROTALK_ASR_CTC_H_
