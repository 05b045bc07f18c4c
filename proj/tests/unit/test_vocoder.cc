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

// tests/unit/test_vocoder.cc

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common/rng.h"
#include "corpus/classes.h"
#include "corpus/synth.h"
#include "dsp/spectral.h"
#include "eval/metrics.h"
#include "support/spectra.h"
#include "vocoder/griffin_lim.h"

namespace neurotalk::vocoder {
namespace {

std::vector<double> Tone(double hz, int samples, double amplitude, int rate) {
  std::vector<double> x(static_cast<std::size_t>(samples));
  for (int n = 0; n < samples; ++n) x[static_cast<std::size_t>(n)] = amplitude * std::sin(2.0 * std::numbers::pi * hz * n / rate);
  return x;
}

// Frame-averaged STFT magnitude argmax, skipping the padded edge frames.
int DominantBin(const std::vector<double> &x, const dsp::StftConfig &cfg) {
  const dsp::ComplexMat s = dsp::Stft(x, cfg);
  const Eigen::VectorXd mean = s.middleCols(2, s.cols() - 4).cwiseAbs().rowwise().mean();
  Eigen::Index bin = 0;
  mean.maxCoeff(&bin);
  return static_cast<int>(bin);
}

std::vector<corpus::VoiceClip> VoiceClips() {
  corpus::CorpusConfig cc;
  std::vector<corpus::VoiceClip> clips;
  for (int c = 0; c < corpus::NumClasses(); ++c)
    if (c != corpus::SilenceClass()) clips.push_back(corpus::SynthesizeVoice(c, c % 3, DeriveSeed(11, {static_cast<std::uint64_t>(c)}), cc));
  return clips;
}

TEST_CASE("a 440 Hz tone survives the mel round trip") {
  const dsp::StftConfig cfg;
  const auto x = Tone(440.0, cfg.sample_rate, 0.5, cfg.sample_rate);
  const Mat log_mel = dsp::LogMel(x, cfg);
  const dsp::MelSpectrogram mel = dsp::ComputeMelSpectrogram(x, cfg, dsp::FitNormStats({log_mel}));
  VocoderSpec spec;
  const auto y = MelToWaveform(mel, spec);
  const double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.n_fft;
  CHECK(std::abs(DominantBin(y, cfg) - 440.0 / bin_hz) <= 1.0);
  CHECK(std::abs(DominantBin(x, cfg) - 440.0 / bin_hz) <= 1.0);
}

TEST_CASE("an all-floor mel vocodes to near silence") {
  VocoderSpec spec;
  std::vector<Mat> logs;
  for (const auto &c : VoiceClips()) logs.push_back(dsp::LogMel(c.waveform, spec.stft));
  dsp::MelSpectrogram mel;
  mel.values = Mat::Constant(spec.stft.n_mels, 173, -1.0);
  mel.norm = dsp::FitNormStats(logs);
  const auto y = MelToWaveform(mel, spec);
  CHECK(testing::RmsDbfs(y) < -40.0);
}

TEST_CASE("corpus voices survive the mel round trip") {
  VocoderSpec spec;
  const auto clips = VoiceClips();
  std::vector<Mat> logs;
  for (const auto &c : clips) logs.push_back(dsp::LogMel(c.waveform, spec.stft));
  const dsp::MelNormStats stats = dsp::FitNormStats(logs);
  double worst = 0.0, total = 0.0;
  for (const auto &c : clips) {
    const dsp::MelSpectrogram mel = dsp::ComputeMelSpectrogram(c.waveform, spec.stft, stats);
    const auto y = MelToWaveform(mel, spec);
    CHECK(static_cast<int>(y.size()) == WaveformLength(static_cast<int>(mel.values.cols()), spec.stft));
    Mat back = dsp::ComputeMelSpectrogram(y, spec.stft, stats).values;
    REQUIRE(back.cols() >= mel.values.cols() - 1);
    const Eigen::Index t = std::min(back.cols(), mel.values.cols());
    const double r = eval::Rmse(back.leftCols(t), mel.values.leftCols(t));
    worst = std::max(worst, r);
    total += r;
  }
  MESSAGE("round-trip RMSE mean " << total / static_cast<double>(clips.size()) << " worst " << worst);
  CHECK(worst < 0.08);
}

TEST_CASE("griffin-lim is deterministic and its inconsistency does not grow") {
  const dsp::StftConfig cfg;
  const auto x = Tone(300.0, 8000, 0.3, cfg.sample_rate);
  const Mat mag = dsp::Stft(x, cfg).cwiseAbs();
  const auto a = GriffinLim(mag, 30, cfg, 8000);
  const auto b = GriffinLim(mag, 30, cfg, 8000);
  CHECK(a.waveform == b.waveform);
  REQUIRE(a.magnitude_error.size() == 30);
  for (std::size_t k = 1; k < a.magnitude_error.size(); ++k)
    CHECK(a.magnitude_error[k] <= a.magnitude_error[k - 1] * (1.0 + 1e-9) + 1e-12);
}

TEST_CASE("filterbank inversion is nonnegative and consistent") {
  const dsp::StftConfig cfg;
  const Mat fb = dsp::MelFilterbank(cfg);
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mat linear(fb.cols(), 6);
  for (Eigen::Index i = 0; i < linear.size(); ++i) linear.data()[i] = u(rng);
  const Mat mel = fb * linear;
  const Mat inv = InvertMelFilterbank(mel, cfg, 200);
  CHECK(inv.minCoeff() >= 0.0);
  CHECK((fb * inv - mel).norm() / mel.norm() < 0.05);
}

TEST_CASE("vocoder rejects invalid input") {
  VocoderSpec spec;
  dsp::MelSpectrogram mel;
  mel.values = Mat::Zero(spec.stft.n_mels, 10);
  CHECK_THROWS(MelToWaveform(mel, spec));
  spec.gl_iters = 0;
  mel.norm = dsp::MelNormStats{};
  CHECK_THROWS(MelToWaveform(mel, spec));
  CHECK(ParseVocoderKind(VocoderKindName(VocoderKind::kGriffinLim)) == VocoderKind::kGriffinLim);
  CHECK_THROWS(ParseVocoderKind("wavenet"));
}

}  // namespace
}  // namespace neurotalk::vocoder
