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

// dsp/spectral.h

#ifndef NEUROTALK_DSP_SPECTRAL_H_
#define NEUROTALK_DSP_SPECTRAL_H_

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "common/types.h"

namespace neurotalk::dsp {

using ComplexMat = Eigen::MatrixXcd;

struct StftConfig {
  int n_fft = 1024;
  int win_length = 1024;
  int hop = 256;
  int sample_rate = 22050;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;
};

// Periodic Hann window.
std::vector<double> HannWindow(int length);

// Number of frames produced by Stft for `samples` input samples.
int NumFrames(int samples, int hop);

// Centred STFT with reflect padding of n_fft/2: (n_fft/2 + 1) x frames.
ComplexMat Stft(std::span<const double> x, const StftConfig &config);

// Inverse of Stft by windowed overlap-add normalised with the window sum of
// squares; output trimmed to `length` samples.
std::vector<double> Istft(const ComplexMat &spec, const StftConfig &config, int length);

double HzToMel(double hz);  // Slaney scale
double MelToHz(double mel);

// n_mels x (n_fft/2 + 1) triangular filterbank with Slaney area normalisation.
Mat MelFilterbank(const StftConfig &config);

// Centre frequency (Hz) of each mel band.
std::vector<double> MelCenters(const StftConfig &config);

struct MelNormStats {
  double log_min = 0.0;
  double log_max = 1.0;
};

struct MelSpectrogram {
  Mat values;  // n_mels x frames, in [-1, 1]
  int hop = 256;
  int sample_rate = 22050;
  std::optional<MelNormStats> norm;
};

// log(max(mel magnitude, floor)), unnormalised.
Mat LogMel(std::span<const double> waveform, const StftConfig &config);

Mat Normalize(const Mat &log_mel, const MelNormStats &stats);
Mat Denormalize(const Mat &normalized, const MelNormStats &stats);

MelSpectrogram ComputeMelSpectrogram(std::span<const double> waveform,
                                     const StftConfig &config, const MelNormStats &stats);

// Min/max over a set of unnormalised log-mel matrices.
MelNormStats FitNormStats(const std::vector<Mat> &log_mels);

}  // namespace neurotalk::dsp

#endif  // NEUROTALK_DSP_SPECTRAL_H_
