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

// align/dtw.h

#ifndef NEUROTALK_ALIGN_DTW_H_
#define NEUROTALK_ALIGN_DTW_H_

#include <utility>
#include <vector>

#include "common/types.h"

namespace neurotalk::align {

struct WarpPath {
  std::vector<std::pair<int, int>> pairs;  // (index into a, index into b)
  double cost = 0.0;
};

// Minimal-cost monotone alignment between the columns of `a` and `b` under
// Euclidean frame distance; steps (1,0), (0,1), (1,1).
WarpPath Dtw(const Mat &a, const Mat &b);

// Averages the columns of `b` matched to each index of `a`: bands x a_len.
Mat WarpTo(int a_len, const Mat &b, const WarpPath &path);

}  // namespace neurotalk::align

#endif  // NEUROTALK_ALIGN_DTW_H_
