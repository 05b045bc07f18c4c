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

// dsp/preprocess.h

#ifndef NEUROTALK_DSP_PREPROCESS_H_
#define NEUROTALK_DSP_PREPROCESS_H_

#include <vector>

#include "common/types.h"
#include "dsp/filters.h"

namespace neurotalk::dsp {

struct PreprocessConfig {
  double sample_rate = 2500.0;
  int bandpass_order = 5;
  double band_low_hz = 30.0;
  double band_high_hz = 120.0;
  std::vector<double> notch_hz = {60.0, 120.0};
  double notch_q = 30.0;
  double pre_trial_s = 0.5;
  // Odd-extension length for the zero-phase filter, in samples.
  int edge_pad = 1000;
};

// Bandpass + notch cascade used by PreprocessEeg.
Sos PreprocessFilter(const PreprocessConfig &config);

// Zero-phase filtering of every channel, subtraction of the filtered
// pre-trial mean, and removal of the pre-trial segment.
// Input: channels x (pre + trial) samples. Output: channels x trial samples.
Mat PreprocessEeg(const Mat &samples, const PreprocessConfig &config);

}  // namespace neurotalk::dsp

#endif  // NEUROTALK_DSP_PREPROCESS_H_
