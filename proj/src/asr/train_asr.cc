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

// asr/train_asr.cc

#include "asr/train_asr.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "asr/cer.h"
#include "asr/ctc.h"
#include "common/error.h"
#include "common/log.h"
#include "common/rng.h"
#include "nn/optim.h"

namespace neurotalk::asr {

Mat TimeStretch(const Mat &mel, int frames) {
  Require(frames >= 1 && mel.cols() >= 1, "time stretch needs non-empty input and output");
  if (frames == mel.cols()) return mel;
  Mat out(mel.rows(), frames);
  const double scale = frames > 1 ? static_cast<double>(mel.cols() - 1) / (frames - 1) : 0.0;
  for (int t = 0; t < frames; ++t) {
    const double pos = t * scale;
    const auto i0 = static_cast<Eigen::Index>(std::floor(pos));
    const Eigen::Index i1 = std::min<Eigen::Index>(i0 + 1, mel.cols() - 1);
    const double w = pos - static_cast<double>(i0);
    out.col(t) = (1.0 - w) * mel.col(i0) + w * mel.col(i1);
  }
  return out;
}

double CorpusCer(const Recognizer &model, const std::vector<AsrExample> &examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto &ex : examples) total += Cer(ex.transcript, model.Transcribe(ex.mel));
  return total / static_cast<double>(examples.size());
}

AsrTrainReport TrainRecognizer(Recognizer &model, const std::vector<AsrExample> &train,
                               const std::vector<AsrExample> &heldout, const AsrTrainConfig &config) {
  Require(!train.empty(), "recognizer training set is empty");
  Require(config.batch >= 1 && config.max_epochs >= 1, "invalid recognizer training schedule");
  nn::AdamWConfig opt_config;
  opt_config.lr = config.lr;
  opt_config.beta1 = 0.9;
  opt_config.beta2 = 0.999;
  opt_config.weight_decay = 0.0;
  nn::AdamW opt(model.params(), opt_config);
  Rng rng(config.seed);
  std::uniform_real_distribution<double> stretch(config.stretch_min, config.stretch_max);

  nn::ParameterSet best;
  for (const auto &p : model.params().all()) best.Add(p->name, p->value.rows(), p->value.cols());
  best.CopyValuesFrom(model.params());

  AsrTrainReport report;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  int since_best = 0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    int counted = 0;
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(config.batch)) {
      const std::size_t end = std::min(order.size(), b + static_cast<std::size_t>(config.batch));
      model.params().ZeroGrad();
      for (std::size_t k = b; k < end; ++k) {
        const AsrExample &ex = train[order[k]];
        const int frames = std::max(1, static_cast<int>(std::lround(ex.mel.cols() * stretch(rng))));
        Recognizer::Cache cache;
        const Mat lp = model.Forward(TimeStretch(ex.mel, frames), &cache);
        const CtcResult ctc = CtcLoss(lp, Alphabet::Encode(ex.transcript), Alphabet::kBlank);
        if (!ctc.feasible) continue;
        loss_sum += ctc.loss;
        ++counted;
        model.Backward(ctc.grad, cache);
      }
      nn::ClipGradNorm(model.params(), config.clip_norm * static_cast<double>(end - b));
      opt.Step(1.0 / static_cast<double>(end - b));
      if (!model.params().AllFinite()) Fail(ErrorCode::kNumerical, "recognizer parameters became non-finite");
    }
    report.train_loss.push_back(counted ? loss_sum / counted : 0.0);
    const double cer = CorpusCer(model, heldout.empty() ? train : heldout);
    report.heldout_cer.push_back(cer);
    report.epochs = epoch + 1;
    LogInfo("asr epoch " + std::to_string(epoch) + " loss " + std::to_string(report.train_loss.back()) +
            " held-out CER " + std::to_string(cer));
    if (cer < report.best_cer || report.best_epoch < 0) {
      report.best_cer = cer;
      report.best_epoch = epoch;
      best.CopyValuesFrom(model.params());
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
    if (cer == 0.0) break;
  }
  model.params().CopyValuesFrom(best);
  report.reached_target = report.best_cer < config.target_cer;
  return report;
}

}  // namespace neurotalk::asr
