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

// vocoder/griffin_lim.h

#ifndef NEUROTALK_VOCODER_GRIFFIN_LIM_H_
#define NEUROTALK_VOCODER_GRIFFIN_LIM_H_

#include <string>
#include <vector>

#include "dsp/spectral.h"

namespace neurotalk::vocoder {

enum class VocoderKind { kGriffinLim, kExternal };

struct VocoderSpec {
  VocoderKind kind = VocoderKind::kGriffinLim;
  int gl_iters = 60;
  int nnls_iters = 100;
  double peak = 0.95;
  dsp::StftConfig stft;
  // For kExternal: command run as `<command> <mel array path> <wave path>`.
  std::string external_command;

  void Validate() const;
};

const char *VocoderKindName(VocoderKind kind);
VocoderKind ParseVocoderKind(const std::string &name);

// Per-frame nonnegative least squares inversion of the mel filterbank:
// mel magnitudes (bands x T) -> linear magnitudes (bins x T).
Mat InvertMelFilterbank(const Mat &mel_magnitude, const dsp::StftConfig &config, int iters);

struct GriffinLimResult {
  std::vector<double> waveform;
  std::vector<double> magnitude_error;  // ||S - |STFT(x_k)|||_F after each iteration
};

// Phase recovery from a linear magnitude spectrogram, starting from zero phase.
GriffinLimResult GriffinLim(const Mat &magnitude, int iters, const dsp::StftConfig &config, int length);

// Output length for a T-frame mel.
int WaveformLength(int frames, const dsp::StftConfig &config);

// Denormalise, invert the filterbank, recover phase, and limit the peak to
// spec.peak. Quiet inputs keep their level.
std::vector<double> MelToWaveform(const dsp::MelSpectrogram &mel, const VocoderSpec &spec);

}  // namespace neurotalk::vocoder

#endif  // NEUROTALK_VOCODER_GRIFFIN_LIM_H_
