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

// nn/optim.h

#ifndef NEUROTALK_NN_OPTIM_H_
#define NEUROTALK_NN_OPTIM_H_

#include <vector>

#include "nn/parameters.h"

namespace neurotalk::nn {

struct AdamWConfig {
  double lr = 1e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

// Adam with decoupled weight decay.
class AdamW {
 public:
  AdamW(ParameterSet &params, AdamWConfig config);

  // Applies one update from the accumulated gradients scaled by grad_scale.
  void Step(double grad_scale = 1.0);
  void SetLearningRate(double lr) { config_.lr = lr; }
  double learning_rate() const { return config_.lr; }
  long steps() const { return step_; }

 private:
  ParameterSet &params_;
  AdamWConfig config_;
  std::vector<Mat> m_, v_;
  long step_ = 0;
};

// Rescales all gradients so their global L2 norm is at most max_norm; returns
// the norm before clipping.
double ClipGradNorm(ParameterSet &params, double max_norm);

}  // namespace neurotalk::nn

#endif  // NEUROTALK_NN_OPTIM_H_
