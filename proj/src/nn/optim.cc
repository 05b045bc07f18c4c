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

// nn/optim.cc

#include "nn/optim.h"

#include <cmath>

namespace neurotalk::nn {

AdamW::AdamW(ParameterSet &params, AdamWConfig config) : params_(params), config_(config) {
  for (const auto &p : params_.all()) {
    m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

void AdamW::Step(double grad_scale) {
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  const double step_size = config_.lr / bc1;
  const double sqrt_bc2 = std::sqrt(bc2);
  const auto &all = params_.all();
  for (std::size_t i = 0; i < all.size(); ++i) {
    Parameter &p = *all[i];
    p.value *= 1.0 - config_.lr * config_.weight_decay;
    const auto g = p.grad.array() * grad_scale;
    m_[i].array() = config_.beta1 * m_[i].array() + (1.0 - config_.beta1) * g;
    v_[i].array() = config_.beta2 * v_[i].array() + (1.0 - config_.beta2) * g.square();
    p.value.array() -= step_size * m_[i].array() / (v_[i].array().sqrt() / sqrt_bc2 + config_.eps);
  }
}

double ClipGradNorm(ParameterSet &params, double max_norm) {
  double sq = 0.0;
  for (const auto &p : params.all()) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0)
    for (const auto &p : params.all()) p->grad *= max_norm / norm;
  return norm;
}

}  // namespace neurotalk::nn
