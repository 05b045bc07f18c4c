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

// train/trainer.cc

#include "train/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "align/dtw.h"
#include "asr/cer.h"
#include "common/error.h"
#include "common/log.h"
#include "common/rng.h"
#include "eval/metrics.h"

namespace neurotalk::train {

void StageConfig::Validate() const {
  if (!(lr > 0.0)) Fail(ErrorCode::kConfig, "learning rate must be positive");
  if (max_epochs < 1 || batch < 1 || patience < 1) Fail(ErrorCode::kConfig, "epochs, batch and patience must be >= 1");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) Fail(ErrorCode::kConfig, "lr_decay must be in (0, 1]");
}

namespace {

nn::AdamWConfig OptConfig(const StageConfig &c) {
  nn::AdamWConfig o;
  o.lr = c.lr;
  o.beta1 = c.beta1;
  o.beta2 = c.beta2;
  o.weight_decay = c.weight_decay;
  return o;
}

Mat WarpTarget(const Mat &gen, const Mat &target) {
  return align::WarpTo(static_cast<int>(gen.cols()), target, align::Dtw(gen, target));
}

}  // namespace

ValidationMetrics Validate(const model::Generator &gen, const asr::Recognizer &asr,
                           const std::vector<TrainItem> &items) {
  ValidationMetrics m;
  if (items.empty()) return m;
  for (const TrainItem &it : items) {
    const Mat out = gen.Forward(it.embedding, nullptr);
    m.rmse += eval::MelRmse(out, WarpTarget(out, it.target));
    m.cer += asr::Cer(it.text, asr.Transcribe(out));
  }
  m.rmse /= static_cast<double>(items.size());
  m.cer /= static_cast<double>(items.size());
  return m;
}

Trainer::Trainer(model::Generator &gen, model::Discriminator &disc, const asr::Recognizer *asr,
                 const LossWeights &weights, const StageConfig &config)
    : gen_(gen), disc_(disc), asr_(asr), weights_(weights), config_(config),
      gen_opt_(gen.params(), OptConfig(config)), disc_opt_(disc.params(), OptConfig(config)) {
  weights.Validate();
  config.Validate();
  if (weights.ctc > 0.0 && asr == nullptr) Fail(ErrorCode::kConfig, "ctc loss needs a recognizer");
}

void Trainer::Batch(const std::vector<const TrainItem *> &batch, EpochRecord &acc) {
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<model::Generator::Cache> caches(batch.size());
  std::vector<Mat> fakes(batch.size()), targets(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    fakes[i] = gen_.Forward(batch[i]->embedding, &caches[i]);
    targets[i] = WarpTarget(fakes[i], batch[i]->target);
  }

  if (weights_.adv > 0.0) {
    disc_.params().ZeroGrad();
    double d_loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      model::Discriminator::Cache real_cache, fake_cache;
      const double p_real = disc_.Forward(targets[i], &real_cache);
      const double p_fake = disc_.Forward(fakes[i], &fake_cache);
      d_loss += DiscriminatorLoss(p_real, p_fake, weights_);
      disc_.BackwardLogit(weights_.disc * (p_real - 1.0), real_cache);
      disc_.BackwardLogit(weights_.disc * p_fake, fake_cache);
    }
    if (config_.clip_norm > 0.0) nn::ClipGradNorm(disc_.params(), config_.clip_norm / scale);
    disc_opt_.Step(scale);
    acc.disc += d_loss;
  }

  gen_.params().ZeroGrad();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const GeneratorObjective obj =
        EvaluateGenerator(fakes[i], targets[i], batch[i]->transcript, &disc_, asr_, weights_);
    if (!std::isfinite(obj.terms.total)) {
      std::ostringstream msg;
      msg << "non-finite generator loss on trial " << batch[i]->id << " (rec " << obj.terms.rec
          << ", adv " << obj.terms.adv << ", ctc " << obj.terms.ctc << "); batch:";
      for (const TrainItem *b : batch) msg << ' ' << b->id;
      Fail(ErrorCode::kNumerical, msg.str());
    }
    acc.rec += obj.terms.rec;
    acc.adv += obj.terms.adv;
    acc.ctc += obj.terms.ctc;
    acc.gen_total += obj.terms.total;
    gen_.Backward(obj.grad, caches[i]);
  }
  if (config_.clip_norm > 0.0) nn::ClipGradNorm(gen_.params(), config_.clip_norm / scale);
  gen_opt_.Step(scale);
  if (!gen_.params().AllFinite() || !disc_.params().AllFinite())
    Fail(ErrorCode::kNumerical, "parameters became non-finite after an update");
}

StageResult Trainer::Run(const std::vector<TrainItem> &train, const std::vector<TrainItem> &val,
                         const std::function<void(const EpochRecord &)> &on_epoch) {
  Require(!train.empty(), "training set is empty");
  Rng rng(config_.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  nn::ParameterSet best_gen, best_disc;
  for (const auto &p : gen_.params().all()) best_gen.Add(p->name, p->value.rows(), p->value.cols());
  for (const auto &p : disc_.params().all()) best_disc.Add(p->name, p->value.rows(), p->value.cols());
  best_gen.CopyValuesFrom(gen_.params());
  best_disc.CopyValuesFrom(disc_.params());

  StageResult result;
  int since_best = 0;
  double lr = config_.lr;
  for (int epoch = 0; epoch < config_.max_epochs; ++epoch) {
    gen_opt_.SetLearningRate(lr);
    disc_opt_.SetLearningRate(lr);
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(config_.batch)) {
      std::vector<const TrainItem *> batch;
      for (std::size_t k = b; k < std::min(order.size(), b + static_cast<std::size_t>(config_.batch)); ++k)
        batch.push_back(&train[order[k]]);
      Batch(batch, rec);
    }
    const double n = static_cast<double>(train.size());
    rec.rec /= n;
    rec.adv /= n;
    rec.ctc /= n;
    rec.gen_total /= n;
    rec.disc /= n;
    if (asr_ != nullptr && !val.empty()) {
      const ValidationMetrics vm = Validate(gen_, *asr_, val);
      rec.val_rmse = vm.rmse;
      rec.val_cer = vm.cer;
    }
    result.log.push_back(rec);
    if (on_epoch) on_epoch(rec);

    const bool better = result.best_epoch < 0 || rec.val_cer < result.best.cer ||
                        (rec.val_cer == result.best.cer && rec.val_rmse < result.best.rmse);
    if (better) {
      result.best_epoch = epoch;
      result.best = {rec.val_rmse, rec.val_cer};
      best_gen.CopyValuesFrom(gen_.params());
      best_disc.CopyValuesFrom(disc_.params());
      since_best = 0;
    } else if (++since_best >= config_.patience) {
      result.early_stopped = true;
      break;
    }
    lr *= config_.lr_decay;
  }
  gen_.params().CopyValuesFrom(best_gen);
  disc_.params().CopyValuesFrom(best_disc);
  return result;
}

}  // namespace neurotalk::train
