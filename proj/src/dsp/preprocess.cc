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

// dsp/preprocess.cc

#include "dsp/preprocess.h"

#include <cmath>

#include "common/error.h"

namespace neurotalk::dsp {

Sos PreprocessFilter(const PreprocessConfig &config) {
  Sos sos = DesignButterworthBandpass(config.bandpass_order, config.band_low_hz,
                                      config.band_high_hz, config.sample_rate);
  for (double f : config.notch_hz) {
    Sos notch = DesignNotch(f, config.notch_q, config.sample_rate);
    sos.insert(sos.end(), notch.begin(), notch.end());
  }
  return sos;
}

Mat PreprocessEeg(const Mat &samples, const PreprocessConfig &config) {
  if (!samples.allFinite()) Fail(ErrorCode::kInvalidArgument, "EEG trial contains non-finite values");
  const int pre = static_cast<int>(std::lround(config.pre_trial_s * config.sample_rate));
  const auto total = static_cast<int>(samples.cols());
  Require(pre > 0 && pre < total, "trial must include a pre-trial baseline segment");
  const Sos sos = PreprocessFilter(config);
  const int pad = std::min(config.edge_pad, total - 1);

  Mat out(samples.rows(), total - pre);
  std::vector<double> row(static_cast<std::size_t>(total));
  for (Eigen::Index ch = 0; ch < samples.rows(); ++ch) {
    for (int i = 0; i < total; ++i) row[static_cast<std::size_t>(i)] = samples(ch, i);
    const std::vector<double> y = SosFiltFilt(sos, row, pad);
    double baseline = 0.0;
    for (int i = 0; i < pre; ++i) baseline += y[static_cast<std::size_t>(i)];
    baseline /= pre;
    for (int i = pre; i < total; ++i) out(ch, i - pre) = y[static_cast<std::size_t>(i)] - baseline;
  }
  return out;
}

}  // namespace neurotalk::dsp
