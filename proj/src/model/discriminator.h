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

// model/discriminator.h

#ifndef NEUROTALK_MODEL_DISCRIMINATOR_H_
#define NEUROTALK_MODEL_DISCRIMINATOR_H_

#include <cstdint>
#include <vector>

#include "nn/layers.h"
#include "nn/parameters.h"

namespace neurotalk::model {

struct DiscriminatorConfig {
  int mel_bands = 80;
  int input_frames = 192;
  int pre_channels = 128;
  std::vector<int> stage_channels{96, 80, 64};  // the last entry is the final width
  std::vector<int> downsample_rates{3, 3, 3};
  std::vector<int> mrf_kernels{3, 7, 11};
  std::vector<int> mrf_dilations{1, 3, 5};
  int gru_hidden = 32;
  int pre_kernel = 7;
  double slope = 0.1;
  bool recurrent = true;

  void Validate() const;
  int final_channels() const { return stage_channels.back(); }
  // Temporal length after every stage, starting with input_frames.
  std::vector<int> StageLengths() const;
  DiscriminatorConfig Reduced(int divisor) const;
};

// Mel (bands x frames) -> probability that the input is a real voice mel.
class Discriminator {
 public:
  struct Stage {
    nn::Conv1d down;
    nn::Mrf mrf;
  };
  struct Cache {
    nn::Conv1d::Cache pre;
    std::vector<Mat> stage_in;
    std::vector<nn::Conv1d::Cache> down;
    std::vector<nn::Mrf::Cache> mrf;
    Mat seq_in;
    nn::SequenceLayer::Cache seq;
    Vec pooled;
    double logit = 0.0;
    double prob = 0.5;
  };

  explicit Discriminator(const DiscriminatorConfig &config);

  void Init(std::uint64_t seed, double conv_std = 0.01);
  // Returns the probability; the logit is available in the cache.
  double Forward(const Mat &mel, Cache *cache) const;
  double Logit(const Mat &mel) const;
  // Input gradient from d(loss)/d(logit).
  Mat BackwardLogit(double dlogit, const Cache &cache, bool param_grads = true) const;

  const DiscriminatorConfig &config() const { return config_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

 private:
  DiscriminatorConfig config_;
  nn::ParameterSet params_;
  nn::Conv1d pre_;
  std::vector<Stage> stages_;
  nn::SequenceLayer seq_;
  nn::Parameter *head_w_ = nullptr;
  nn::Parameter *head_b_ = nullptr;
};

}  // namespace neurotalk::model

#endif  // NEUROTALK_MODEL_DISCRIMINATOR_H_
