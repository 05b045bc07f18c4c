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

// asr/ctc.cc

#include "asr/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.h"
#include "common/log.h"

namespace neurotalk::asr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

int CtcMinSteps(const std::vector<int> &target) {
  int n = static_cast<int>(target.size());
  for (std::size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++n;
  return n;
}

CtcResult CtcLoss(const Mat &log_probs, const std::vector<int> &target, int blank, bool with_grad) {
  const int symbols = static_cast<int>(log_probs.rows());
  const int steps = static_cast<int>(log_probs.cols());
  Require(steps >= 1, "ctc needs at least one step");
  for (int t : target) Require(t >= 0 && t < symbols && t != blank, "ctc target symbol out of range");

  CtcResult result;
  if (with_grad) result.grad = Mat::Zero(symbols, steps);
  if (CtcMinSteps(target) > steps) {
    LogWarning("ctc target of length " + std::to_string(target.size()) + " cannot be emitted in " +
               std::to_string(steps) + " steps");
    result.loss = std::numeric_limits<double>::infinity();
    result.feasible = false;
    return result;
  }

  // Extended label sequence: blank, l1, blank, l2, ..., blank.
  const int ext = 2 * static_cast<int>(target.size()) + 1;
  std::vector<int> labels(static_cast<std::size_t>(ext), blank);
  for (std::size_t i = 0; i < target.size(); ++i) labels[2 * i + 1] = target[i];
  auto skip_allowed = [&](int s) { return s >= 2 && labels[s] != blank && labels[s] != labels[s - 2]; };

  Mat alpha = Mat::Constant(ext, steps, kNegInf);
  alpha(0, 0) = log_probs(labels[0], 0);
  if (ext > 1) alpha(1, 0) = log_probs(labels[1], 0);
  for (int t = 1; t < steps; ++t) {
    for (int s = 0; s < ext; ++s) {
      double a = alpha(s, t - 1);
      if (s >= 1) a = LogAdd(a, alpha(s - 1, t - 1));
      if (skip_allowed(s)) a = LogAdd(a, alpha(s - 2, t - 1));
      if (a != kNegInf) alpha(s, t) = a + log_probs(labels[s], t);
    }
  }
  double log_p = alpha(ext - 1, steps - 1);
  if (ext > 1) log_p = LogAdd(log_p, alpha(ext - 2, steps - 1));
  result.loss = -log_p;
  if (!with_grad) return result;

  Mat beta = Mat::Constant(ext, steps, kNegInf);
  beta(ext - 1, steps - 1) = log_probs(labels[ext - 1], steps - 1);
  if (ext > 1) beta(ext - 2, steps - 1) = log_probs(labels[ext - 2], steps - 1);
  for (int t = steps - 2; t >= 0; --t) {
    for (int s = 0; s < ext; ++s) {
      double b = beta(s, t + 1);
      if (s + 1 < ext) b = LogAdd(b, beta(s + 1, t + 1));
      if (s + 2 < ext && skip_allowed(s + 2)) b = LogAdd(b, beta(s + 2, t + 1));
      if (b != kNegInf) beta(s, t) = b + log_probs(labels[s], t);
    }
  }
  // alpha * beta counts the step-t emission twice.
  for (int t = 0; t < steps; ++t) {
    for (int s = 0; s < ext; ++s) {
      const double ab = alpha(s, t) + beta(s, t);
      if (ab == kNegInf) continue;
      result.grad(labels[s], t) -= std::exp(ab - log_probs(labels[s], t) - log_p);
    }
  }
  return result;
}

std::vector<int> GreedyDecode(const Mat &log_probs, int blank) {
  std::vector<int> out;
  int prev = -1;
  for (Eigen::Index t = 0; t < log_probs.cols(); ++t) {
    Eigen::Index best = 0;
    log_probs.col(t).maxCoeff(&best);
    const int k = static_cast<int>(best);
    if (k != prev && k != blank) out.push_back(k);
    prev = k;
  }
  return out;
}

}  // namespace neurotalk::asr
