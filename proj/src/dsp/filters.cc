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

// dsp/filters.cc

#include "dsp/filters.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.h"

namespace neurotalk::dsp {

using cd = std::complex<double>;

void FilterSpec::Validate() const {
  Require(sample_rate > 0, "sample rate must be positive");
  if (kind == FilterKind::kBandpass) {
    Require(order >= 1, "filter order must be >= 1");
    Require(0 < low_hz && low_hz < high_hz && high_hz < sample_rate / 2,
            "bandpass edges must satisfy 0 < low < high < fs/2");
  } else {
    Require(0 < center_hz && center_hz < sample_rate / 2, "notch centre must lie in (0, fs/2)");
    Require(q > 0, "notch quality factor must be positive");
  }
}

Sos DesignButterworthBandpass(int order, double low_hz, double high_hz, double sample_rate) {
  FilterSpec{FilterKind::kBandpass, order, low_hz, high_hz, 0, 0, sample_rate}.Validate();
  const double fs2 = 2.0 * sample_rate;
  const double wl = fs2 * std::tan(std::numbers::pi * low_hz / sample_rate);
  const double wh = fs2 * std::tan(std::numbers::pi * high_hz / sample_rate);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);

  std::vector<cd> poles;
  for (int m = -order + 1; m < order; m += 2) {
    const cd proto = -std::exp(cd(0.0, std::numbers::pi * m / (2.0 * order)));
    const cd lp = proto * (bw / 2.0);
    const cd disc = std::sqrt(lp * lp - w0 * w0);
    for (const cd s : {lp + disc, lp - disc}) poles.push_back((fs2 + s) / (fs2 - s));
  }

  // Pair conjugates; leftover real poles are paired with each other.
  std::vector<cd> upper, real;
  for (const cd &p : poles) {
    if (std::abs(p.imag()) < 1e-12) real.push_back(p);
    else if (p.imag() > 0) upper.push_back(p);
  }
  Sos sos;
  for (const cd &p : upper)
    sos.push_back({1.0, 0.0, -1.0, -2.0 * p.real(), std::norm(p)});
  std::sort(real.begin(), real.end(), [](cd a, cd b) { return a.real() < b.real(); });
  for (std::size_t i = 0; i + 1 < real.size(); i += 2)
    sos.push_back({1.0, 0.0, -1.0, -(real[i].real() + real[i + 1].real()),
                   real[i].real() * real[i + 1].real()});
  Require(real.size() % 2 == 0, "unpaired real pole in bandpass design");

  const double center = sample_rate / std::numbers::pi * std::atan(w0 / fs2);
  const double g = std::abs(FrequencyResponse(sos, center, sample_rate));
  sos.front().b0 /= g;
  sos.front().b1 /= g;
  sos.front().b2 /= g;
  return sos;
}

Sos DesignNotch(double center_hz, double q, double sample_rate) {
  FilterSpec spec;
  spec.kind = FilterKind::kNotch;
  spec.center_hz = center_hz;
  spec.q = q;
  spec.sample_rate = sample_rate;
  spec.Validate();
  const double w0 = center_hz / (sample_rate / 2.0);
  const double bw = w0 / q;
  const double beta = std::tan(bw * std::numbers::pi / 2.0);
  const double gain = 1.0 / (1.0 + beta);
  const double c = std::cos(w0 * std::numbers::pi);
  return {{gain, -2.0 * gain * c, gain, -2.0 * gain * c, 2.0 * gain - 1.0}};
}

Sos Design(const FilterSpec &spec) {
  return spec.kind == FilterKind::kBandpass
             ? DesignButterworthBandpass(spec.order, spec.low_hz, spec.high_hz, spec.sample_rate)
             : DesignNotch(spec.center_hz, spec.q, spec.sample_rate);
}

std::complex<double> FrequencyResponse(const Sos &sos, double hz, double sample_rate) {
  const cd z1 = std::exp(cd(0.0, -2.0 * std::numbers::pi * hz / sample_rate));
  const cd z2 = z1 * z1;
  cd h(1.0, 0.0);
  for (const Biquad &s : sos) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  return h;
}

void SosFilter(const Sos &sos, std::span<double> x, std::span<const double> zi) {
  Require(zi.empty() || zi.size() == 2 * sos.size(), "zi must hold two values per section");
  for (std::size_t k = 0; k < sos.size(); ++k) {
    const Biquad &s = sos[k];
    double z0 = zi.empty() ? 0.0 : zi[2 * k];
    double z1 = zi.empty() ? 0.0 : zi[2 * k + 1];
    for (double &v : x) {
      const double in = v;
      const double out = s.b0 * in + z0;
      z0 = s.b1 * in - s.a1 * out + z1;
      z1 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

std::vector<double> SosFilterZi(const Sos &sos) {
  std::vector<double> zi;
  double scale = 1.0;
  for (const Biquad &s : sos) {
    const double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double z1 = s.b2 - s.a2 * g;
    const double z0 = s.b1 - s.a1 * g + z1;
    zi.push_back(scale * z0);
    zi.push_back(scale * z1);
    scale *= g;
  }
  return zi;
}

std::vector<double> SosFiltFilt(const Sos &sos, std::span<const double> x, int padlen) {
  const int n = static_cast<int>(x.size());
  if (padlen < 0) padlen = 3 * (2 * static_cast<int>(sos.size()) + 1);
  Require(n > padlen, "input too short for the requested edge padding");
  std::vector<double> ext(static_cast<std::size_t>(n + 2 * padlen));
  for (int i = 0; i < padlen; ++i) ext[static_cast<std::size_t>(i)] = 2.0 * x[0] - x[static_cast<std::size_t>(padlen - i)];
  std::copy(x.begin(), x.end(), ext.begin() + padlen);
  for (int i = 0; i < padlen; ++i)
    ext[static_cast<std::size_t>(padlen + n + i)] = 2.0 * x[static_cast<std::size_t>(n - 1)] - x[static_cast<std::size_t>(n - 2 - i)];

  const std::vector<double> zi = SosFilterZi(sos);
  std::vector<double> scaled(zi.size());
  auto run = [&](std::vector<double> &v) {
    for (std::size_t i = 0; i < zi.size(); ++i) scaled[i] = zi[i] * v.front();
    SosFilter(sos, v, scaled);
  };
  run(ext);
  std::reverse(ext.begin(), ext.end());
  run(ext);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + padlen, ext.begin() + padlen + n};
}

}  // namespace neurotalk::dsp
