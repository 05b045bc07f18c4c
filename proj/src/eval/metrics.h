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

// eval/metrics.h

#ifndef NEUROTALK_EVAL_METRICS_H_
#define NEUROTALK_EVAL_METRICS_H_

#include "common/types.h"

namespace neurotalk::eval {

// Root mean squared difference over all cells.
double Rmse(const Mat &a, const Mat &b);

// Rmse after mapping normalised mels from [-1, 1] onto [0, 1].
double MelRmse(const Mat &gen, const Mat &target);

}  // namespace neurotalk::eval

#endif  // NEUROTALK_EVAL_METRICS_H_
