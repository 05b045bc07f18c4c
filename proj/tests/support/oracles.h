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

// tests/support/oracles.h
//
// Reference implementations used by the unit and acceptance tests: exhaustive
// enumeration for the dynamic programs and central finite differences for the
// hand-written backward passes.

#ifndef NEUROTALK_TESTS_SUPPORT_ORACLES_H_
#define NEUROTALK_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "common/types.h"
#include "nn/parameters.h"

namespace neurotalk::testing {

struct BrutePath {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::pair<int, int>>> optimal;  // every path attaining the minimum
};

// Every monotone path from (0,0) to (n-1,m-1) with steps (1,0), (0,1), (1,1).
inline BrutePath BruteForceDtw(const Mat &a, const Mat &b, double tie_tol = 1e-12) {
  const int n = static_cast<int>(a.cols()), m = static_cast<int>(b.cols());
  BrutePath best;
  std::vector<std::pair<int, int>> path{{0, 0}};
  std::function<void(int, int, double)> walk = [&](int i, int j, double cost) {
    cost += (a.col(i) - b.col(j)).norm();
    if (i == n - 1 && j == m - 1) {
      if (cost < best.cost - tie_tol) {
        best.cost = cost;
        best.optimal.clear();
      }
      if (std::abs(cost - best.cost) <= tie_tol) best.optimal.push_back(path);
      return;
    }
    const std::pair<int, int> steps[] = {{1, 1}, {1, 0}, {0, 1}};
    for (const auto &[di, dj] : steps) {
      if (i + di >= n || j + dj >= m) continue;
      path.emplace_back(i + di, j + dj);
      walk(i + di, j + dj, cost);
      path.pop_back();
    }
  };
  walk(0, 0, 0.0);
  return best;
}

// Negative log-likelihood of `target` obtained by summing over all
// symbols^steps label paths that collapse onto it.
inline double BruteForceCtc(const Mat &log_probs, const std::vector<int> &target, int blank) {
  const int symbols = static_cast<int>(log_probs.rows()), steps = static_cast<int>(log_probs.cols());
  std::vector<int> path(static_cast<std::size_t>(steps), 0);
  double total = 0.0;
  while (true) {
    std::vector<int> collapsed;
    int prev = -1;
    double lp = 0.0;
    for (int t = 0; t < steps; ++t) {
      const int s = path[static_cast<std::size_t>(t)];
      lp += log_probs(s, t);
      if (s != blank && s != prev) collapsed.push_back(s);
      prev = s;
    }
    if (collapsed == target) total += std::exp(lp);
    int t = 0;
    while (t < steps && ++path[static_cast<std::size_t>(t)] == symbols) path[static_cast<std::size_t>(t++)] = 0;
    if (t == steps) break;
  }
  return total > 0.0 ? -std::log(total) : std::numeric_limits<double>::infinity();
}

// |fd - an| / max(|fd|, |an|), with agreement below `abs_floor` counted as exact.
inline double RelativeError(double fd, double an, double abs_floor = 1e-9) {
  const double diff = std::abs(fd - an);
  if (diff <= abs_floor) return 0.0;
  return diff / std::max(std::abs(fd), std::abs(an));
}

inline double CentralDifference(const std::function<double()> &f, double &x, double h) {
  const double v = x;
  x = v + h;
  const double plus = f();
  x = v - h;
  const double minus = f();
  x = v;
  return (plus - minus) / (2.0 * h);
}

struct GradCheck {
  double worst = 0.0;
  double worst_abs = 0.0;  // largest |fd - analytic|
  int checked = 0;
  std::string worst_name;
};

// Compares p->grad against central differences of `loss` for up to
// `per_tensor` evenly spread entries of every parameter.
inline GradCheck CheckParameterGradients(nn::ParameterSet &params, const std::function<double()> &loss,
                                         int per_tensor, double h = 1e-5) {
  GradCheck r;
  for (const auto &p : params.all()) {
    const Eigen::Index size = p->value.size();
    const Eigen::Index n = std::min<Eigen::Index>(per_tensor, size);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = (k * 7919 + size / 2) % size;
      const double fd = CentralDifference(loss, p->value.data()[i], h);
      const double rel = RelativeError(fd, p->grad.data()[i]);
      r.worst_abs = std::max(r.worst_abs, std::abs(fd - p->grad.data()[i]));
      ++r.checked;
      if (rel > r.worst) {
        r.worst = rel;
        r.worst_name = p->name;
      }
    }
  }
  return r;
}

// Same check for the gradient with respect to an input matrix.
inline GradCheck CheckInputGradient(Mat &x, const Mat &analytic, const std::function<double()> &loss, int samples,
                                    double h = 1e-5) {
  GradCheck r;
  const Eigen::Index size = x.size();
  for (int k = 0; k < samples && k < size; ++k) {
    const Eigen::Index i = (static_cast<Eigen::Index>(k) * 104729 + 17) % size;
    const double fd = CentralDifference(loss, x.data()[i], h);
    const double rel = RelativeError(fd, analytic.data()[i]);
    r.worst_abs = std::max(r.worst_abs, std::abs(fd - analytic.data()[i]));
    ++r.checked;
    if (rel > r.worst) {
      r.worst = rel;
      r.worst_name = "input";
    }
  }
  return r;
}

}  // namespace neurotalk::testing

#endif  // NEUROTALK_TESTS_SUPPORT_ORACLES_H_
