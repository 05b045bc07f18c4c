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

// model/generator.cc

#include "model/generator.h"

#include <string>

#include "common/error.h"

namespace neurotalk::model {

void GeneratorConfig::Validate() const {
  Require(input_features > 0 && input_steps > 0 && mel_bands > 0, "generator shapes must be positive");
  Require(!upsample_rates.empty(), "generator needs at least one upsampling stage");
  Require(gru_hidden * 2 == initial_channels,
          "generator recurrent width must be half the initial channel count");
  int ch = initial_channels;
  for (int u : upsample_rates) {
    Require(u >= 1, "upsampling rates must be >= 1");
    ch /= 2;
    Require(ch >= 1, "too many upsampling stages for the initial channel count");
  }
  Require(initial_channels % 2 == 0, "initial channel count must be even");
}

int GeneratorConfig::OutputFrames() const {
  int frames = input_steps;
  for (int u : upsample_rates) frames *= u;
  return frames;
}

GeneratorConfig GeneratorConfig::Reduced(int divisor) const {
  GeneratorConfig c = *this;
  c.initial_channels = initial_channels / divisor;
  c.gru_hidden = c.initial_channels / 2;
  return c;
}

Generator::Generator(const GeneratorConfig &config) : config_(config) {
  config.Validate();
  const int c0 = config.initial_channels;
  const int half = c0 / 2;
  pre_ = nn::Conv1d(params_, "gen.pre", nn::ConvSpec::Same(config.input_features, half, config.pre_kernel));
  seq_ = nn::SequenceLayer(params_, "gen.seq", half, config.gru_hidden, config.recurrent);
  proj_ = nn::Conv1d(params_, "gen.proj", nn::ConvSpec::Same(half + 2 * config.gru_hidden, c0, 1));
  int ch = c0;
  for (std::size_t i = 0; i < config.upsample_rates.size(); ++i) {
    const int u = config.upsample_rates[i];
    const std::string name = "gen.stage" + std::to_string(i);
    Stage s;
    s.up = nn::ConvTranspose1d(params_, name + ".up", ch, ch / 2, 2 * u, u);
    ch /= 2;
    nn::MrfSpec mspec{ch, config.mrf_kernels, config.mrf_dilations, config.slope};
    s.mrf = nn::Mrf(params_, name + ".mrf", mspec);
    stages_.push_back(std::move(s));
  }
  post_ = nn::Conv1d(params_, "gen.post", nn::ConvSpec::Same(ch, config.mel_bands, config.post_kernel));
}

void Generator::Init(std::uint64_t seed, double conv_std) {
  Rng rng(seed);
  for (const auto &p : params_.all()) {
    const bool is_bias = p->name.size() > 5 && p->name.compare(p->name.size() - 5, 5, ".bias") == 0;
    if (is_bias) p->value.setZero();
    else nn::InitNormal(*p, conv_std, rng);
  }
  seq_.Init(rng, conv_std);
}

Mat Generator::Forward(const Mat &embedding, Cache *cache) const {
  if (embedding.rows() != config_.input_features || embedding.cols() != config_.input_steps)
    Fail(ErrorCode::kInvalidArgument, "generator input must be " +
                                          std::to_string(config_.input_features) + "x" +
                                          std::to_string(config_.input_steps));
  Mat x0 = pre_.Forward(embedding, cache ? &cache->pre : nullptr);
  const Mat s = seq_.Forward(x0, cache ? &cache->seq : nullptr);
  Mat cat(x0.rows() + s.rows(), x0.cols());
  cat.topRows(x0.rows()) = x0;
  cat.bottomRows(s.rows()) = s;
  Mat h = proj_.Forward(cat, cache ? &cache->proj : nullptr);
  if (cache) {
    cache->pre_out = std::move(x0);
    cache->stage_in.clear();
    cache->up.assign(stages_.size(), {});
    cache->mrf.assign(stages_.size(), {});
  }
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const Mat u = stages_[i].up.Forward(nn::LeakyRelu(h, config_.slope), cache ? &cache->up[i] : nullptr);
    if (cache) cache->stage_in.push_back(std::move(h));
    h = stages_[i].mrf.Forward(u, cache ? &cache->mrf[i] : nullptr);
  }
  Mat out = post_.Forward(nn::LeakyRelu(h, config_.slope), cache ? &cache->post : nullptr)
                .array()
                .tanh()
                .matrix();
  if (cache) {
    cache->post_in = std::move(h);
    cache->out = out;
  }
  return out;
}

Mat Generator::Backward(const Mat &dmel, const Cache &c, bool param_grads) const {
  const Mat dy = (dmel.array() * (1.0 - c.out.array().square())).matrix();
  Mat dh = nn::LeakyReluBackward(post_.Backward(dy, c.post, param_grads), c.post_in, config_.slope);
  for (std::size_t i = stages_.size(); i-- > 0;) {
    const Mat du = stages_[i].mrf.Backward(dh, c.mrf[i], param_grads);
    dh = nn::LeakyReluBackward(stages_[i].up.Backward(du, c.up[i], param_grads), c.stage_in[i],
                               config_.slope);
  }
  const Mat dcat = proj_.Backward(dh, c.proj, param_grads);
  const Eigen::Index half = c.pre_out.rows();
  Mat dx0 = dcat.topRows(half);
  dx0 += seq_.Backward(dcat.bottomRows(dcat.rows() - half), c.seq, param_grads);
  return pre_.Backward(dx0, c.pre, param_grads);
}

}  // namespace neurotalk::model
