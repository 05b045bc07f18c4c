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

// dsp/filters.h

#ifndef NEUROTALK_DSP_FILTERS_H_
#define NEUROTALK_DSP_FILTERS_H_

#include <complex>
#include <span>
#include <vector>

namespace neurotalk::dsp {

// Second-order section with a0 = 1, direct form II transposed.
struct Biquad {
  double b0, b1, b2, a1, a2;
};
using Sos = std::vector<Biquad>;

enum class FilterKind { kBandpass, kNotch };

struct FilterSpec {
  FilterKind kind = FilterKind::kBandpass;
  int order = 5;
  double low_hz = 30.0;   // bandpass edges
  double high_hz = 120.0;
  double center_hz = 60.0;  // notch centre
  double q = 30.0;
  double sample_rate = 2500.0;

  void Validate() const;
};

// Digital Butterworth bandpass of the given prototype order (2*order poles),
// bilinear transform with pre-warping, unit gain at the band centre.
Sos DesignButterworthBandpass(int order, double low_hz, double high_hz, double sample_rate);

// Second-order IIR notch with quality factor q.
Sos DesignNotch(double center_hz, double q, double sample_rate);

Sos Design(const FilterSpec &spec);

std::complex<double> FrequencyResponse(const Sos &sos, double hz, double sample_rate);

// Causal filtering with initial state `zi` (two values per section, may be
// empty for zero state).
void SosFilter(const Sos &sos, std::span<double> x, std::span<const double> zi = {});

// Steady-state initial conditions for a unit step input.
std::vector<double> SosFilterZi(const Sos &sos);

// Zero-phase forward-backward filtering with odd extension of `padlen`
// samples at both ends; padlen < 0 selects 3 * (2 * sections + 1).
std::vector<double> SosFiltFilt(const Sos &sos, std::span<const double> x, int padlen = -1);

}  // namespace neurotalk::dsp

#endif  // NEUROTALK_DSP_FILTERS_H_
