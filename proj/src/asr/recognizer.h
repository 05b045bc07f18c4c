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

// asr/recognizer.h

#ifndef NEUROTALK_ASR_RECOGNIZER_H_
#define NEUROTALK_ASR_RECOGNIZER_H_

#include <cstdint>
#include <string>

#include "asr/alphabet.h"
#include "nn/layers.h"
#include "nn/parameters.h"

namespace neurotalk::asr {

struct RecognizerConfig {
  int mel_bands = 80;
  int conv_channels = 128;
  int conv_kernel = 5;
  int gru_hidden = 128;
  double slope = 0.1;

  void Validate() const;
};

// Two stride-2 convolutions over time, a bidirectional GRU, and a per-step
// projection to log-probabilities over the alphabet.
class Recognizer {
 public:
  static constexpr int kTimeReduction = 4;

  struct Cache {
    nn::Conv1d::Cache c1, c2;
    Mat h1, h2;
    nn::BiGru::Cache gru;
    nn::Conv1d::Cache out;
    Mat log_probs;
  };

  explicit Recognizer(const RecognizerConfig &config);

  void Init(std::uint64_t seed);
  // Mel (bands x T) -> log-probabilities (Alphabet::kSize x ceil(T / 4)).
  Mat Forward(const Mat &mel, Cache *cache) const;
  // Input gradient from d(loss)/d(log-probs).
  Mat Backward(const Mat &dlog_probs, const Cache &cache, bool param_grads = true) const;
  std::string Transcribe(const Mat &mel) const;

  static int OutputSteps(int frames);

  const RecognizerConfig &config() const { return config_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

 private:
  RecognizerConfig config_;
  nn::ParameterSet params_;
  nn::Conv1d c1_, c2_;
  nn::BiGru gru_;
  nn::Conv1d out_;
};

}  // namespace neurotalk::asr

#endif  // NEUROTALK_ASR_RECOGNIZER_H_
