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

// model/discriminator.cc

#include "model/discriminator.h"

#include <cmath>
#include <string>

#include "common/error.h"

namespace neurotalk::model {

void DiscriminatorConfig::Validate() const {
  Require(mel_bands > 0 && input_frames > 0 && pre_channels > 0, "discriminator shapes must be positive");
  Require(stage_channels.size() == downsample_rates.size() && !stage_channels.empty(),
          "one channel count per downsampling stage is required");
  Require(gru_hidden * 2 == final_channels(),
          "discriminator recurrent width must be half the final channel count");
}

std::vector<int> DiscriminatorConfig::StageLengths() const {
  std::vector<int> lengths{input_frames};
  for (int d : downsample_rates) lengths.push_back((lengths.back() + d - 1) / d);
  return lengths;
}

DiscriminatorConfig DiscriminatorConfig::Reduced(int divisor) const {
  DiscriminatorConfig c = *this;
  c.pre_channels = pre_channels / divisor;
  for (int &ch : c.stage_channels) ch /= divisor;
  c.gru_hidden = c.final_channels() / 2;
  return c;
}

Discriminator::Discriminator(const DiscriminatorConfig &config) : config_(config) {
  config.Validate();
  pre_ = nn::Conv1d(params_, "disc.pre", nn::ConvSpec::Same(config.mel_bands, config.pre_channels, config.pre_kernel));
  const auto lengths = config.StageLengths();
  int ch = config.pre_channels;
  for (std::size_t i = 0; i < config.downsample_rates.size(); ++i) {
    const int d = config.downsample_rates[i];
    const int out = config.stage_channels[i];
    const std::string name = "disc.stage" + std::to_string(i);
    Stage s;
    s.down = nn::Conv1d(params_, name + ".down", nn::ConvSpec::CeilStrided(ch, out, 2 * d, d, lengths[i]));
    s.mrf = nn::Mrf(params_, name + ".mrf", nn::MrfSpec{out, config.mrf_kernels, config.mrf_dilations, config.slope});
    stages_.push_back(std::move(s));
    ch = out;
  }
  seq_ = nn::SequenceLayer(params_, "disc.seq", ch, config.gru_hidden, config.recurrent);
  head_w_ = params_.Add("disc.head.weight", 1, 2 * config.gru_hidden);
  head_b_ = params_.Add("disc.head.bias", 1, 1);
}

void Discriminator::Init(std::uint64_t seed, double conv_std) {
  Rng rng(seed);
  for (const auto &p : params_.all()) {
    const bool is_bias = p->name.size() > 5 && p->name.compare(p->name.size() - 5, 5, ".bias") == 0;
    if (is_bias) p->value.setZero();
    else nn::InitNormal(*p, conv_std, rng);
  }
  seq_.Init(rng, conv_std);
  nn::InitXavierUniform(*head_w_, head_w_->value.cols(), 1, rng);
}

double Discriminator::Forward(const Mat &mel, Cache *cache) const {
  if (mel.rows() != config_.mel_bands || mel.cols() != config_.input_frames)
    Fail(ErrorCode::kInvalidArgument, "discriminator input must be " +
                                          std::to_string(config_.mel_bands) + "x" +
                                          std::to_string(config_.input_frames));
  Mat h = pre_.Forward(mel, cache ? &cache->pre : nullptr);
  if (cache) {
    cache->stage_in.clear();
    cache->down.assign(stages_.size(), {});
    cache->mrf.assign(stages_.size(), {});
  }
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const Mat d = stages_[i].down.Forward(nn::LeakyRelu(h, config_.slope), cache ? &cache->down[i] : nullptr);
    if (cache) cache->stage_in.push_back(std::move(h));
    h = stages_[i].mrf.Forward(d, cache ? &cache->mrf[i] : nullptr);
  }
  const Mat s = seq_.Forward(nn::LeakyRelu(h, config_.slope), cache ? &cache->seq : nullptr);
  const Vec pooled = s.rowwise().mean();
  const double logit = (head_w_->value * pooled)(0, 0) + head_b_->value(0, 0);
  const double prob = 1.0 / (1.0 + std::exp(-logit));
  if (cache) {
    cache->seq_in = std::move(h);
    cache->pooled = pooled;
    cache->logit = logit;
    cache->prob = prob;
  }
  return prob;
}

double Discriminator::Logit(const Mat &mel) const {
  Cache c;
  Forward(mel, &c);
  return c.logit;
}

Mat Discriminator::BackwardLogit(double dlogit, const Cache &c, bool param_grads) const {
  if (param_grads) {
    head_w_->grad += dlogit * c.pooled.transpose();
    head_b_->grad(0, 0) += dlogit;
  }
  const Vec dpooled = head_w_->value.row(0).transpose() * dlogit;
  const Eigen::Index steps = c.seq_in.cols();
  const Mat ds = dpooled.replicate(1, steps) / static_cast<double>(steps);
  Mat dh = nn::LeakyReluBackward(seq_.Backward(ds, c.seq, param_grads), c.seq_in, config_.slope);
  for (std::size_t i = stages_.size(); i-- > 0;) {
    const Mat dd = stages_[i].mrf.Backward(dh, c.mrf[i], param_grads);
    dh = nn::LeakyReluBackward(stages_[i].down.Backward(dd, c.down[i], param_grads), c.stage_in[i],
                               config_.slope);
  }
  return pre_.Backward(dh, c.pre, param_grads);
}

}  // namespace neurotalk::model
