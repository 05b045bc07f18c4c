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

// dsp/spectral.cc

#include "dsp/spectral.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "common/error.h"

namespace neurotalk::dsp {

std::vector<double> HannWindow(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i)
    w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
  return w;
}

int NumFrames(int samples, int hop) { return 1 + samples / hop; }

namespace {

// numpy-style reflect padding (edge sample not repeated).
double Reflect(std::span<const double> x, long i) {
  const long n = static_cast<long>(x.size());
  if (n == 1) return x[0];
  const long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return x[static_cast<std::size_t>(i)];
}

std::vector<double> PaddedWindow(const StftConfig &config) {
  std::vector<double> w(static_cast<std::size_t>(config.n_fft), 0.0);
  const auto hann = HannWindow(config.win_length);
  const int off = (config.n_fft - config.win_length) / 2;
  for (int i = 0; i < config.win_length; ++i) w[static_cast<std::size_t>(off + i)] = hann[static_cast<std::size_t>(i)];
  return w;
}

}  // namespace

ComplexMat Stft(std::span<const double> x, const StftConfig &config) {
  if (x.empty()) Fail(ErrorCode::kInvalidArgument, "empty waveform");
  const int n = static_cast<int>(x.size());
  const int frames = NumFrames(n, config.hop);
  const int bins = config.n_fft / 2 + 1;
  const int half = config.n_fft / 2;
  const auto window = PaddedWindow(config);
  ComplexMat out(bins, frames);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(static_cast<std::size_t>(config.n_fft));
  std::vector<std::complex<double>> spec;
  for (int f = 0; f < frames; ++f) {
    const long start = static_cast<long>(f) * config.hop - half;
    for (int i = 0; i < config.n_fft; ++i)
      frame[static_cast<std::size_t>(i)] = window[static_cast<std::size_t>(i)] * Reflect(x, start + i);
    fft.fwd(spec, frame);
    for (int b = 0; b < bins; ++b) out(b, f) = spec[static_cast<std::size_t>(b)];
  }
  return out;
}

std::vector<double> Istft(const ComplexMat &spec, const StftConfig &config, int length) {
  const int frames = static_cast<int>(spec.cols());
  const int bins = config.n_fft / 2 + 1;
  Require(spec.rows() == bins, "spectrogram bin count does not match n_fft");
  const int half = config.n_fft / 2;
  const auto window = PaddedWindow(config);
  const long total = static_cast<long>(config.n_fft) + static_cast<long>(frames - 1) * config.hop;
  std::vector<double> acc(static_cast<std::size_t>(total), 0.0), wss(static_cast<std::size_t>(total), 0.0);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> col(static_cast<std::size_t>(bins));
  std::vector<double> frame;
  for (int f = 0; f < frames; ++f) {
    for (int b = 0; b < bins; ++b) col[static_cast<std::size_t>(b)] = spec(b, f);
    fft.inv(frame, col, config.n_fft);
    const long start = static_cast<long>(f) * config.hop;
    for (int i = 0; i < config.n_fft; ++i) {
      const double w = window[static_cast<std::size_t>(i)];
      acc[static_cast<std::size_t>(start + i)] += w * frame[static_cast<std::size_t>(i)];
      wss[static_cast<std::size_t>(start + i)] += w * w;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(length), 0.0);
  for (int i = 0; i < length; ++i) {
    const long j = i + half;
    if (j >= total) break;
    const double norm = wss[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = norm > 1e-10 ? acc[static_cast<std::size_t>(j)] / norm : acc[static_cast<std::size_t>(j)];
  }
  return out;
}

namespace {
constexpr double kLinearStep = 200.0 / 3.0;
constexpr double kMinLogHz = 1000.0;
constexpr double kMinLogMel = kMinLogHz / kLinearStep;
const double kLogStep = std::log(6.4) / 27.0;
}  // namespace

double HzToMel(double hz) {
  if (hz < kMinLogHz) return hz / kLinearStep;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double MelToHz(double mel) {
  if (mel < kMinLogMel) return mel * kLinearStep;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

namespace {

std::vector<double> MelEdges(const StftConfig &config) {
  const double lo = HzToMel(config.fmin), hi = HzToMel(config.fmax);
  std::vector<double> edges(static_cast<std::size_t>(config.n_mels + 2));
  for (int i = 0; i < config.n_mels + 2; ++i)
    edges[static_cast<std::size_t>(i)] = MelToHz(lo + (hi - lo) * i / (config.n_mels + 1));
  return edges;
}

}  // namespace

std::vector<double> MelCenters(const StftConfig &config) {
  const auto edges = MelEdges(config);
  return {edges.begin() + 1, edges.end() - 1};
}

Mat MelFilterbank(const StftConfig &config) {
  const int bins = config.n_fft / 2 + 1;
  const auto edges = MelEdges(config);
  Mat fb = Mat::Zero(config.n_mels, bins);
  for (int m = 0; m < config.n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m + 1)];
    const double hi = edges[static_cast<std::size_t>(m + 2)];
    const double enorm = 2.0 / (hi - lo);
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * config.sample_rate / config.n_fft;
      const double lower = (f - lo) / (mid - lo);
      const double upper = (hi - f) / (hi - mid);
      fb(m, b) = std::max(0.0, std::min(lower, upper)) * enorm;
    }
  }
  return fb;
}

Mat LogMel(std::span<const double> waveform, const StftConfig &config) {
  const ComplexMat spec = Stft(waveform, config);
  const Mat mag = spec.cwiseAbs();
  const Mat mel = MelFilterbank(config) * mag;
  return mel.cwiseMax(config.log_floor).array().log().matrix();
}

Mat Normalize(const Mat &log_mel, const MelNormStats &stats) {
  const double range = stats.log_max - stats.log_min;
  Require(range > 0, "mel normalisation range must be positive");
  return ((log_mel.array() - stats.log_min) * (2.0 / range) - 1.0).cwiseMax(-1.0).cwiseMin(1.0).matrix();
}

Mat Denormalize(const Mat &normalized, const MelNormStats &stats) {
  return ((normalized.array() + 1.0) * (0.5 * (stats.log_max - stats.log_min)) + stats.log_min).matrix();
}

MelSpectrogram ComputeMelSpectrogram(std::span<const double> waveform,
                                     const StftConfig &config, const MelNormStats &stats) {
  MelSpectrogram m;
  m.values = Normalize(LogMel(waveform, config), stats);
  m.hop = config.hop;
  m.sample_rate = config.sample_rate;
  m.norm = stats;
  return m;
}

MelNormStats FitNormStats(const std::vector<Mat> &log_mels) {
  Require(!log_mels.empty(), "cannot fit mel statistics on an empty set");
  MelNormStats s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Mat &m : log_mels) {
    s.log_min = std::min(s.log_min, m.minCoeff());
    s.log_max = std::max(s.log_max, m.maxCoeff());
  }
  Require(s.log_max > s.log_min, "degenerate mel statistics");
  return s;
}

}  // namespace neurotalk::dsp
