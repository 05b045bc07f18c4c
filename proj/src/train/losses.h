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

// train/losses.h

#ifndef NEUROTALK_TRAIN_LOSSES_H_
#define NEUROTALK_TRAIN_LOSSES_H_

#include <vector>

#include "asr/recognizer.h"
#include "common/types.h"
#include "model/discriminator.h"

namespace neurotalk::train {

struct LossWeights {
  double rec = 45.0;  // lambda_g1
  double adv = 1.0;   // lambda_g2
  double ctc = 1.0;   // lambda_g3
  double disc = 1.0;  // lambda_d

  void Validate() const;
};

struct GeneratorLossTerms {
  double rec = 0.0;
  double adv = 0.0;
  double ctc = 0.0;
  double total = 0.0;
};

inline constexpr double kProbClamp = 1e-7;

double ClampProb(double p);

// Mean squared difference over all cells.
double ReconstructionLoss(const Mat &gen, const Mat &target);

// Weighted sum of precomputed terms.
GeneratorLossTerms GeneratorLoss(const Mat &gen, const Mat &target, double disc_on_fake,
                                 double ctc_value, const LossWeights &w);

double DiscriminatorLoss(double disc_on_real, double disc_on_fake, const LossWeights &w);

struct GeneratorObjective {
  GeneratorLossTerms terms;
  Mat grad;  // d total / d gen
  bool ctc_feasible = true;
};

// Runs the discriminator and recognizer on `gen` and returns the total loss
// and its gradient with respect to `gen`. Networks whose weight is zero are
// not evaluated, and `asr` may be null when the CTC weight is zero. Parameter
// gradients are never accumulated.
GeneratorObjective EvaluateGenerator(const Mat &gen, const Mat &target,
                                     const std::vector<int> &transcript,
                                     const model::Discriminator *disc, const asr::Recognizer *asr,
                                     const LossWeights &w, bool with_grad = true);

}  // namespace neurotalk::train

#endif  // NEUROTALK_TRAIN_LOSSES_H_
