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

// common/wav.h

#ifndef NEUROTALK_COMMON_WAV_H_
#define NEUROTALK_COMMON_WAV_H_

#include <filesystem>
#include <vector>

namespace neurotalk {

struct WaveData {
  int sample_rate = 0;
  std::vector<double> samples;  // mono, [-1, 1]
};

// Mono 16-bit PCM RIFF/WAVE. Samples outside [-1, 1] are clipped.
void WriteWav16(const std::filesystem::path &path, const std::vector<double> &samples,
                int sample_rate);
// Values after a WriteWav16 / ReadWav16 round trip.
std::vector<double> Quantize16(const std::vector<double> &samples);

WaveData ReadWav16(const std::filesystem::path &path);

}  // namespace neurotalk

#endif  // NEUROTALK_COMMON_WAV_H_
