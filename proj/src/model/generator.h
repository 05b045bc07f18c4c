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

// model/generator.h

#ifndef NEUROTALK_MODEL_GENERATOR_H_
#define NEUROTALK_MODEL_GENERATOR_H_

#include <cstdint>
#include <vector>

#include "nn/layers.h"
#include "nn/parameters.h"

namespace neurotalk::model {

struct GeneratorConfig {
  int input_features = 104;
  int input_steps = 16;
  int initial_channels = 1024;
  std::vector<int> upsample_rates{3, 2, 2};
  std::vector<int> mrf_kernels{3, 7, 11};
  std::vector<int> mrf_dilations{1, 3, 5};
  int gru_hidden = 512;
  int mel_bands = 80;
  int pre_kernel = 7;
  int post_kernel = 7;
  double slope = 0.1;
  bool recurrent = true;

  void Validate() const;
  int OutputFrames() const;
  // Same topology with every width divided by `divisor`.
  GeneratorConfig Reduced(int divisor) const;
};

// Embedding (features x steps) -> mel (bands x steps * prod(upsample_rates)).
class Generator {
 public:
  struct Stage {
    nn::ConvTranspose1d up;
    nn::Mrf mrf;
  };
  struct Cache {
    nn::Conv1d::Cache pre;
    Mat pre_out;
    nn::SequenceLayer::Cache seq;
    nn::Conv1d::Cache proj;
    std::vector<Mat> stage_in;
    std::vector<nn::ConvTranspose1d::Cache> up;
    std::vector<nn::Mrf::Cache> mrf;
    Mat post_in;
    nn::Conv1d::Cache post;
    Mat out;
  };

  explicit Generator(const GeneratorConfig &config);

  void Init(std::uint64_t seed, double conv_std = 0.01);
  Mat Forward(const Mat &embedding, Cache *cache) const;
  // Returns the gradient with respect to the embedding.
  Mat Backward(const Mat &dmel, const Cache &cache, bool param_grads = true) const;

  const GeneratorConfig &config() const { return config_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

 private:
  GeneratorConfig config_;
  nn::ParameterSet params_;
  nn::Conv1d pre_;
  nn::SequenceLayer seq_;
  nn::Conv1d proj_;
  std::vector<Stage> stages_;
  nn::Conv1d post_;
};

}  // namespace neurotalk::model

#endif  // NEUROTALK_MODEL_GENERATOR_H_
