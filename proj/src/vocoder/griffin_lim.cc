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

// vocoder/griffin_lim.cc

#include "vocoder/griffin_lim.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "common/array_io.h"
#include "common/error.h"
#include "common/wav.h"

namespace neurotalk::vocoder {

void VocoderSpec::Validate() const {
  if (gl_iters < 1) Fail(ErrorCode::kConfig, "gl_iters must be >= 1");
  if (nnls_iters < 1) Fail(ErrorCode::kConfig, "nnls_iters must be >= 1");
  if (!(peak > 0.0 && peak <= 1.0)) Fail(ErrorCode::kConfig, "vocoder peak must be in (0, 1]");
  if (kind == VocoderKind::kExternal && external_command.empty())
    Fail(ErrorCode::kConfig, "external vocoder needs a command");
}

const char *VocoderKindName(VocoderKind kind) {
  return kind == VocoderKind::kGriffinLim ? "griffin_lim" : "external";
}

VocoderKind ParseVocoderKind(const std::string &name) {
  if (name == "griffin_lim") return VocoderKind::kGriffinLim;
  if (name == "external") return VocoderKind::kExternal;
  Fail(ErrorCode::kConfig, "unknown vocoder kind: " + name);
}

Mat InvertMelFilterbank(const Mat &mel_magnitude, const dsp::StftConfig &config, int iters) {
  const Mat fb = MelFilterbank(config);
  Require(mel_magnitude.rows() == fb.rows(), "mel band count does not match the filterbank");
  // Start from the flat spectrum that reproduces each band, averaged over the
  // bands covering a bin.
  const Vec band_gain = fb.rowwise().sum();
  const Vec coverage = fb.colwise().sum().transpose();
  Mat flat = mel_magnitude;
  for (Eigen::Index m = 0; m < flat.rows(); ++m)
    flat.row(m) /= std::max(band_gain(m), 1e-12);
  Mat s = fb.transpose() * flat;
  for (Eigen::Index b = 0; b < s.rows(); ++b)
    s.row(b) /= std::max(coverage(b), 1e-12);
  s = s.cwiseMax(0.0);

  // Projected gradient with step 1 / ||fb||_2^2.
  const Mat gram = fb * fb.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
  const double step = 1.0 / std::max(eig.eigenvalues().maxCoeff(), 1e-12);
  for (int it = 0; it < iters; ++it) {
    const Mat resid = fb * s - mel_magnitude;
    s = (s - step * (fb.transpose() * resid)).cwiseMax(0.0);
  }
  return s;
}

GriffinLimResult GriffinLim(const Mat &magnitude, int iters, const dsp::StftConfig &config, int length) {
  Require(iters >= 1, "griffin-lim needs at least one iteration");
  Require(magnitude.rows() == config.n_fft / 2 + 1, "magnitude bin count does not match n_fft");
  GriffinLimResult r;
  dsp::ComplexMat spec = magnitude.cast<std::complex<double>>();
  for (int it = 0; it < iters; ++it) {
    r.waveform = dsp::Istft(spec, config, length);
    const dsp::ComplexMat rebuilt = dsp::Stft(r.waveform, config);
    const Eigen::Index frames = std::min(rebuilt.cols(), magnitude.cols());
    double err = 0.0;
    for (Eigen::Index f = 0; f < frames; ++f) {
      for (Eigen::Index b = 0; b < magnitude.rows(); ++b) {
        const std::complex<double> c = rebuilt(b, f);
        const double a = std::abs(c);
        err += (a - magnitude(b, f)) * (a - magnitude(b, f));
        spec(b, f) = a > 1e-12 ? c * (magnitude(b, f) / a) : std::complex<double>(magnitude(b, f), 0.0);
      }
    }
    r.magnitude_error.push_back(std::sqrt(err));
  }
  r.waveform = dsp::Istft(spec, config, length);
  return r;
}

int WaveformLength(int frames, const dsp::StftConfig &config) {
  return std::max(1, frames - 1) * config.hop;
}

namespace {

std::vector<double> RunExternal(const dsp::MelSpectrogram &mel, const VocoderSpec &spec) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("neurotalk-vocoder-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const fs::path mel_path = dir / "mel.bin";
  const fs::path wav_path = dir / "out.wav";
  nlohmann::json meta{{"log_min", mel.norm->log_min}, {"log_max", mel.norm->log_max},
                      {"hop", mel.hop}, {"sample_rate", mel.sample_rate}};
  WriteArray(mel_path, mel.values, DType::kFloat32, meta);
  const std::string cmd = spec.external_command + " '" + mel_path.string() + "' '" + wav_path.string() + "'";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    fs::remove_all(dir);
    Fail(ErrorCode::kIo, "external vocoder failed with status " + std::to_string(rc));
  }
  WaveData wav = ReadWav16(wav_path);
  fs::remove_all(dir);
  return wav.samples;
}

}  // namespace

std::vector<double> MelToWaveform(const dsp::MelSpectrogram &mel, const VocoderSpec &spec) {
  spec.Validate();
  if (!mel.norm) Fail(ErrorCode::kInvalidArgument, "mel spectrogram carries no normalisation statistics");
  if (spec.kind == VocoderKind::kExternal) return RunExternal(mel, spec);
  const Mat magnitude_mel = dsp::Denormalize(mel.values, *mel.norm).array().exp().matrix();
  const Mat linear = InvertMelFilterbank(magnitude_mel, spec.stft, spec.nnls_iters);
  const int length = WaveformLength(static_cast<int>(mel.values.cols()), spec.stft);
  std::vector<double> wave = GriffinLim(linear, spec.gl_iters, spec.stft, length).waveform;
  double peak = 0.0;
  for (double v : wave) peak = std::max(peak, std::abs(v));
  if (peak > spec.peak)
    for (double &v : wave) v *= spec.peak / peak;
  return wave;
}

}  // namespace neurotalk::vocoder
