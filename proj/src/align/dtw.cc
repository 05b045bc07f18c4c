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

// align/dtw.cc

#include "align/dtw.h"

#include <algorithm>
#include <limits>

#include "common/error.h"

namespace neurotalk::align {

WarpPath Dtw(const Mat &a, const Mat &b) {
  if (a.cols() == 0 || b.cols() == 0) Fail(ErrorCode::kInvalidArgument, "DTW input is empty");
  Require(a.rows() == b.rows(), "DTW inputs must have the same number of bands");
  const auto n = a.cols(), m = b.cols();
  Mat acc(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double d = (a.col(i) - b.col(j)).norm();
      double best;
      if (i == 0 && j == 0) best = 0.0;
      else if (i == 0) best = acc(0, j - 1);
      else if (j == 0) best = acc(i - 1, 0);
      else best = std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
      acc(i, j) = d + best;
    }
  }
  WarpPath path;
  path.cost = acc(n - 1, m - 1);
  Eigen::Index i = n - 1, j = m - 1;
  path.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  // Ties prefer the diagonal, then a step in `a`, then a step in `b`.
  while (i > 0 || j > 0) {
    if (i == 0) --j;
    else if (j == 0) --i;
    else {
      const double diag = acc(i - 1, j - 1), up = acc(i - 1, j), left = acc(i, j - 1);
      if (diag <= up && diag <= left) { --i; --j; }
      else if (up <= left) --i;
      else --j;
    }
    path.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return path;
}

Mat WarpTo(int a_len, const Mat &b, const WarpPath &path) {
  Require(a_len >= 1, "warp target length must be positive");
  if (path.pairs.empty() || path.pairs.front() != std::pair<int, int>{0, 0} ||
      path.pairs.back().first != a_len - 1 ||
      path.pairs.back().second != static_cast<int>(b.cols()) - 1)
    Fail(ErrorCode::kInvalidArgument, "warp path does not span the given sequence lengths");
  Mat out = Mat::Zero(b.rows(), a_len);
  std::vector<int> count(static_cast<std::size_t>(a_len), 0);
  for (const auto &[i, j] : path.pairs) {
    if (i < 0 || i >= a_len || j < 0 || j >= b.cols())
      Fail(ErrorCode::kInvalidArgument, "warp path index out of range");
    out.col(i) += b.col(j);
    ++count[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < a_len; ++i) out.col(i) /= count[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace neurotalk::align
