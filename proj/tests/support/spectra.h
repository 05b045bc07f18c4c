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

// tests/support/spectra.h

#ifndef NEUROTALK_TESTS_SUPPORT_SPECTRA_H_
#define NEUROTALK_TESTS_SUPPORT_SPECTRA_H_

#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "common/types.h"

namespace neurotalk::testing {

// Welch estimate (Hann window, 50% overlap) of the mean power per Hz over
// [lo_hz, hi_hz] for one signal.
inline double WelchBandPower(const std::vector<double> &x, double rate, double lo_hz, double hi_hz,
                             int nperseg) {
  std::vector<double> w(static_cast<std::size_t>(nperseg));
  double wss = 0.0;
  for (int i = 0; i < nperseg; ++i) {
    w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / nperseg);
    wss += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
  }
  Eigen::FFT<double> fft;
  std::vector<double> seg(static_cast<std::size_t>(nperseg));
  std::vector<std::complex<double>> spec;
  double acc = 0.0;
  int count = 0;
  for (std::size_t start = 0; start + static_cast<std::size_t>(nperseg) <= x.size(); start += nperseg / 2) {
    double mean = 0.0;
    for (int i = 0; i < nperseg; ++i) mean += x[start + static_cast<std::size_t>(i)];
    mean /= nperseg;
    for (int i = 0; i < nperseg; ++i)
      seg[static_cast<std::size_t>(i)] = (x[start + static_cast<std::size_t>(i)] - mean) * w[static_cast<std::size_t>(i)];
    fft.fwd(spec, seg);
    for (int k = 0; k <= nperseg / 2; ++k) {
      const double f = k * rate / nperseg;
      if (f < lo_hz || f > hi_hz) continue;
      acc += std::norm(spec[static_cast<std::size_t>(k)]) / (rate * wss);
      ++count;
    }
  }
  return count > 0 ? acc / count : 0.0;
}

inline std::vector<double> Row(const Mat &m, Eigen::Index r, Eigen::Index from = 0) {
  std::vector<double> out(static_cast<std::size_t>(m.cols() - from));
  for (Eigen::Index i = from; i < m.cols(); ++i) out[static_cast<std::size_t>(i - from)] = m(r, i);
  return out;
}

inline double Db(double ratio) { return 10.0 * std::log10(ratio); }

inline double RmsDbfs(const std::vector<double> &x) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  return 20.0 * std::log10(std::max(std::sqrt(ss / static_cast<double>(std::max<std::size_t>(1, x.size()))), 1e-12));
}

}  // namespace neurotalk::testing

#endif  // NEUROTALK_TESTS_SUPPORT_SPECTRA_H_
