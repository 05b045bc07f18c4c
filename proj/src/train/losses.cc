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

// train/losses.cc

#include "train/losses.h"

#include <algorithm>
#include <cmath>

#include "asr/alphabet.h"
#include "asr/ctc.h"
#include "common/error.h"

namespace neurotalk::train {

void LossWeights::Validate() const {
  if (rec < 0 || adv < 0 || ctc < 0 || disc < 0) Fail(ErrorCode::kConfig, "loss weights must be nonnegative");
  if (rec == 0 && adv == 0 && ctc == 0) Fail(ErrorCode::kConfig, "at least one generator loss weight must be positive");
}

double ClampProb(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

double ReconstructionLoss(const Mat &gen, const Mat &target) {
  if (gen.rows() != target.rows() || gen.cols() != target.cols())
    Fail(ErrorCode::kInvalidArgument, "reconstruction loss shape mismatch");
  return (gen - target).squaredNorm() / static_cast<double>(gen.size());
}

GeneratorLossTerms GeneratorLoss(const Mat &gen, const Mat &target, double disc_on_fake,
                                 double ctc_value, const LossWeights &w) {
  GeneratorLossTerms t;
  t.rec = ReconstructionLoss(gen, target);
  t.adv = -std::log(ClampProb(disc_on_fake));
  t.ctc = ctc_value;
  t.total = w.rec * t.rec + w.adv * t.adv + w.ctc * t.ctc;
  return t;
}

double DiscriminatorLoss(double disc_on_real, double disc_on_fake, const LossWeights &w) {
  return w.disc * (-std::log(ClampProb(disc_on_real)) - std::log(1.0 - ClampProb(disc_on_fake)));
}

GeneratorObjective EvaluateGenerator(const Mat &gen, const Mat &target,
                                     const std::vector<int> &transcript,
                                     const model::Discriminator *disc, const asr::Recognizer *asr,
                                     const LossWeights &w, bool with_grad) {
  GeneratorObjective out;
  double prob = 0.5;
  double ctc_value = 0.0;
  if (with_grad) out.grad = (2.0 * w.rec / static_cast<double>(gen.size())) * (gen - target);
  if (w.adv > 0.0) {
    Require(disc != nullptr, "adversarial loss needs a discriminator");
    model::Discriminator::Cache dc;
    prob = disc->Forward(gen, &dc);
    // d(-log sigmoid(z))/dz = sigmoid(z) - 1
    if (with_grad) out.grad += disc->BackwardLogit(w.adv * (prob - 1.0), dc, false);
  }
  if (w.ctc > 0.0) {
    Require(asr != nullptr, "ctc loss needs a recognizer");
    asr::Recognizer::Cache ac;
    const Mat lp = asr->Forward(gen, &ac);
    const asr::CtcResult ctc = asr::CtcLoss(lp, transcript, asr::Alphabet::kBlank, with_grad);
    out.ctc_feasible = ctc.feasible;
    if (ctc.feasible) {
      ctc_value = ctc.loss;
      if (with_grad) out.grad += asr->Backward(w.ctc * ctc.grad, ac, false);
    }
  }
  out.terms = GeneratorLoss(gen, target, prob, ctc_value, w);
  if (w.adv == 0.0) {
    out.terms.adv = 0.0;
    out.terms.total = w.rec * out.terms.rec + w.ctc * out.terms.ctc;
  }
  return out;
}

}  // namespace neurotalk::train
