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

// eval/metrics.cc

#include "eval/metrics.h"

#include <cmath>

#include "common/error.h"

namespace neurotalk::eval {

double Rmse(const Mat &a, const Mat &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) Fail(ErrorCode::kInvalidArgument, "rmse shape mismatch");
  Require(a.size() > 0, "rmse of empty matrices");
  return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double MelRmse(const Mat &gen, const Mat &target) {
  return Rmse(((gen.array() + 1.0) * 0.5).matrix(), ((target.array() + 1.0) * 0.5).matrix());
}

}  // namespace neurotalk::eval
