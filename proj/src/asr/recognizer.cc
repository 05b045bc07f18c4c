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

// asr/recognizer.cc

#include "asr/recognizer.h"

#include <cmath>

#include "asr/ctc.h"
#include "common/error.h"
#include "common/rng.h"

namespace neurotalk::asr {

void RecognizerConfig::Validate() const {
  Require(mel_bands > 0 && conv_channels > 0 && gru_hidden > 0, "recognizer sizes must be positive");
  Require(conv_kernel % 2 == 1, "recognizer kernel must be odd");
}

namespace {

nn::ConvSpec HalvingConv(int in, int out, int kernel) {
  nn::ConvSpec s;
  s.in = in;
  s.out = out;
  s.kernel = kernel;
  s.stride = 2;
  s.pad_left = kernel / 2;
  s.pad_right = kernel / 2;
  return s;
}

}  // namespace

Recognizer::Recognizer(const RecognizerConfig &config) : config_(config) {
  config.Validate();
  c1_ = nn::Conv1d(params_, "asr.conv1", HalvingConv(config.mel_bands, config.conv_channels, config.conv_kernel));
  c2_ = nn::Conv1d(params_, "asr.conv2", HalvingConv(config.conv_channels, config.conv_channels, config.conv_kernel));
  gru_ = nn::BiGru(params_, "asr.gru", config.conv_channels, config.gru_hidden);
  out_ = nn::Conv1d(params_, "asr.out", nn::ConvSpec::Same(2 * config.gru_hidden, Alphabet::kSize, 1));
}

void Recognizer::Init(std::uint64_t seed) {
  Rng rng(seed);
  for (const nn::Conv1d *c : {&c1_, &c2_, &out_}) {
    const auto &s = c->spec();
    nn::InitXavierUniform(*c->weight(), static_cast<Eigen::Index>(s.in) * s.kernel,
                          static_cast<Eigen::Index>(s.out) * s.kernel, rng);
    c->bias()->value.setZero();
  }
  gru_.Init(rng);
}

int Recognizer::OutputSteps(int frames) { return (((frames + 1) / 2) + 1) / 2; }

Mat Recognizer::Forward(const Mat &mel, Cache *cache) const {
  if (mel.rows() != config_.mel_bands || mel.cols() < 1)
    Fail(ErrorCode::kInvalidArgument, "recognizer input must have " + std::to_string(config_.mel_bands) + " bands");
  Mat a1 = c1_.Forward(mel, cache ? &cache->c1 : nullptr);
  Mat h1 = nn::LeakyRelu(a1, config_.slope);
  Mat a2 = c2_.Forward(h1, cache ? &cache->c2 : nullptr);
  Mat h2 = nn::LeakyRelu(a2, config_.slope);
  const Mat g = gru_.Forward(h2, cache ? &cache->gru : nullptr);
  Mat logits = out_.Forward(g, cache ? &cache->out : nullptr);
  for (Eigen::Index t = 0; t < logits.cols(); ++t) {
    const double m = logits.col(t).maxCoeff();
    const double lse = m + std::log((logits.col(t).array() - m).exp().sum());
    logits.col(t).array() -= lse;
  }
  if (cache) {
    cache->h1 = std::move(a1);
    cache->h2 = std::move(a2);
    cache->log_probs = logits;
  }
  return logits;
}

Mat Recognizer::Backward(const Mat &dlp, const Cache &c, bool param_grads) const {
  const Mat probs = c.log_probs.array().exp();
  const Mat dlogits = dlp - probs * dlp.colwise().sum().asDiagonal();
  Mat d = out_.Backward(dlogits, c.out, param_grads);
  d = gru_.Backward(d, c.gru, param_grads);
  d = c2_.Backward(nn::LeakyReluBackward(d, c.h2, config_.slope), c.c2, param_grads);
  return c1_.Backward(nn::LeakyReluBackward(d, c.h1, config_.slope), c.c1, param_grads);
}

std::string Recognizer::Transcribe(const Mat &mel) const {
  return Alphabet::Decode(GreedyDecode(Forward(mel, nullptr), Alphabet::kBlank));
}

}  // namespace neurotalk::asr
