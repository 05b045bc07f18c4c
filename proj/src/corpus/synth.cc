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

// corpus/synth.cc

#include "corpus/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.h"
#include "common/rng.h"
#include "corpus/classes.h"

namespace neurotalk::corpus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream tags keep the random draws for each ingredient independent.
enum Stream : std::uint64_t {
  kVoiceStream = 11,
  kBackgroundStream = 12,
  kClassOscStream = 13,
  kPhonemeOscStream = 14,
  kArtifactStream = 15,
  kJitterStream = 16,
  kClassPatternStream = 21,
  kPhonemePatternStream = 22,
  kArtifactGainStream = 23,
};

double Resonance(double f, double formant) {
  const double bw = 60.0 + 0.08 * formant;
  const double x = (f - formant) / bw;
  return 1.0 / (1.0 + x * x);
}

double TargetRms(const Phoneme &ph) {
  if (!ph.voiced) return 0.05;
  if (ph.symbol.size() == 1) return 0.08;  // voiced consonants
  return 0.15;
}

// Sum of unit-power sinusoids drawn inside [center - 2, center + 2] Hz.
std::vector<double> NarrowbandOscillation(double center_hz, int n, double rate,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> freq(center_hz - kBandWidthHz / 2,
                                              center_hz + kBandWidthHz / 2);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  constexpr int kTones = 8;
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  const double amp = std::sqrt(2.0 / kTones);
  for (int k = 0; k < kTones; ++k) {
    const double f = freq(rng), ph = phase(rng);
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] += amp * std::cos(kTwoPi * f * i / rate + ph);
  }
  return out;
}

}  // namespace

std::string ConditionName(Condition c) {
  return c == Condition::kSpoken ? "spoken" : "imagined";
}

Condition ParseCondition(const std::string &name) {
  if (name == "spoken") return Condition::kSpoken;
  if (name == "imagined") return Condition::kImagined;
  Fail(ErrorCode::kInvalidArgument, "unknown condition '" + name + "'");
}

int CorpusConfig::PreTrialSamples() const {
  return static_cast<int>(std::lround(pre_trial_s * eeg_rate));
}
int CorpusConfig::TrialSamples() const {
  return static_cast<int>(std::lround(trial_s * eeg_rate));
}
int CorpusConfig::TotalSamples() const { return PreTrialSamples() + TrialSamples(); }
int CorpusConfig::VoiceSamples() const {
  return static_cast<int>(std::lround(trial_s * voice_rate));
}

std::vector<Segment> VoiceLayout(int class_index, double trial_s) {
  const ClassSpec &spec = ClassAt(class_index);
  std::vector<Segment> layout;
  const double total = kPhonemeSeconds * static_cast<double>(spec.phonemes.size());
  double t = 0.5 * (trial_s - total);
  for (int ph : spec.phonemes) {
    layout.push_back({t, t + kPhonemeSeconds, ph});
    t += kPhonemeSeconds;
  }
  return layout;
}

double EnvelopeAt(const std::vector<Segment> &layout, double t) {
  for (const Segment &s : layout) {
    if (s.phoneme == kPause || t < s.start_s || t >= s.end_s) continue;
    const double edge = std::min(t - s.start_s, s.end_s - t);
    if (edge >= kRampSeconds) return 1.0;
    return 0.5 - 0.5 * std::cos(std::numbers::pi * edge / kRampSeconds);
  }
  return 0.0;
}

VoiceClip SynthesizeVoice(const std::string &label, int subject, std::uint64_t seed,
                          const CorpusConfig &config) {
  return SynthesizeVoice(ClassIndex(label), subject, seed, config);
}

VoiceClip SynthesizeVoice(int class_index, int subject, std::uint64_t seed,
                          const CorpusConfig &config) {
  Require(class_index >= 0 && class_index < NumClasses(), "unknown class index");
  VoiceClip clip;
  clip.class_index = class_index;
  clip.subject = subject;
  clip.seed = seed;
  clip.layout = VoiceLayout(class_index, config.trial_s);
  const int n = config.VoiceSamples();
  const double rate = config.voice_rate;
  clip.waveform.assign(static_cast<std::size_t>(n), 0.0);

  Rng rng(DeriveSeed(seed, {kVoiceStream, static_cast<std::uint64_t>(subject)}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double f0 = (110.0 + 12.0 * subject) * (1.0 + 0.04 * (unit(rng) - 0.5));
  const double gain = 0.85 + 0.15 * unit(rng);

  const auto &table = PhonemeTable();
  for (std::size_t k = 0; k < clip.layout.size(); ++k) {
    const Segment &seg = clip.layout[k];
    if (seg.phoneme == kPause) continue;
    const Phoneme &ph = table[static_cast<std::size_t>(seg.phoneme)];
    const int begin = static_cast<int>(std::lround(seg.start_s * rate));
    const int end = std::min(n, static_cast<int>(std::lround(seg.end_s * rate)));
    const int len = end - begin;
    // Slight pitch declination across the utterance.
    const double seg_f0 = f0 * (1.0 - 0.05 * static_cast<double>(k) /
                                          std::max<std::size_t>(1, clip.layout.size()));
    std::vector<double> frequencies;
    if (ph.voiced) {
      for (double f = seg_f0; f < 7800.0; f += seg_f0) frequencies.push_back(f);
    } else {
      const double offset = 20.0 * unit(rng);
      for (double f = 300.0 + offset; f < 7800.0; f += 47.0) frequencies.push_back(f);
    }
    std::vector<double> buf(static_cast<std::size_t>(len), 0.0);
    for (double f : frequencies) {
      const double a = Resonance(f, ph.formant1_hz) + Resonance(f, ph.formant2_hz);
      if (a < 1e-3) continue;
      const double p0 = phase(rng);
      for (int i = 0; i < len; ++i)
        buf[static_cast<std::size_t>(i)] += a * std::sin(kTwoPi * f * i / rate + p0);
    }
    double ss = 0.0;
    for (double v : buf) ss += v * v;
    const double rms = std::sqrt(ss / std::max(1, len));
    const double scale = rms > 0 ? gain * TargetRms(ph) / rms : 0.0;
    for (int i = 0; i < len; ++i) {
      const double t = (begin + i) / rate;
      clip.waveform[static_cast<std::size_t>(begin + i)] +=
          scale * buf[static_cast<std::size_t>(i)] * EnvelopeAt(clip.layout, t);
    }
  }

  // -60 dBFS noise floor everywhere.
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (double &v : clip.waveform) v += noise(rng);
  double peak = 0.0;
  for (double v : clip.waveform) peak = std::max(peak, std::abs(v));
  if (peak > 0.99)
    for (double &v : clip.waveform) v *= 0.99 / peak;
  return clip;
}

double ClassBandCenterHz(int class_index) {
  // Non-silence classes spread their 4 Hz bands over 70-95 Hz.
  return 72.0 + class_index * (21.0 / 11.0);
}

double PhonemeBandCenterHz(int phoneme) { return 71.0 + phoneme * (23.0 / 19.0); }

namespace {

Vec MixedPattern(const CorpusConfig &config, std::uint64_t stream, std::uint64_t key,
                 int subject) {
  Rng shared(DeriveSeed(config.seed, {stream, key}));
  Rng own(DeriveSeed(config.seed, {stream, key, 1000 + static_cast<std::uint64_t>(subject)}));
  std::normal_distribution<double> g(0.0, 1.0);
  Vec p(config.channels);
  for (int c = 0; c < config.channels; ++c) p(c) = g(shared);
  for (int c = 0; c < config.channels; ++c) p(c) += config.subject_pattern_mix * g(own);
  return p * (std::sqrt(static_cast<double>(config.channels)) / p.norm());
}

}  // namespace

Vec ClassPattern(const CorpusConfig &config, int class_index, int subject) {
  return MixedPattern(config, kClassPatternStream, static_cast<std::uint64_t>(class_index),
                      subject);
}

Vec PhonemePattern(const CorpusConfig &config, int phoneme, int subject) {
  return MixedPattern(config, kPhonemePatternStream, static_cast<std::uint64_t>(phoneme),
                      subject);
}

EegTrial SynthesizeEeg(int class_index, Condition condition, int subject,
                       std::uint64_t seed, const CorpusConfig &config) {
  Require(class_index >= 0 && class_index < NumClasses(), "unknown class index");
  Require(config.channels > 0 && config.eeg_rate > 0, "invalid EEG geometry");
  const auto cond_key = static_cast<std::uint64_t>(condition == Condition::kSpoken ? 1 : 2);
  const auto subj_key = static_cast<std::uint64_t>(subject);
  const int channels = config.channels;
  const int pre = config.PreTrialSamples();
  const int total = config.TotalSamples();
  const double rate = config.eeg_rate;

  EegTrial trial;
  trial.class_index = class_index;
  trial.subject = subject;
  trial.condition = condition;
  trial.seed = seed;
  trial.samples = Mat::Zero(channels, total);

  // Background: per-channel pink noise (Kellet's filter) plus white sensor
  // noise and a DC offset.
  {
    Rng rng(DeriveSeed(seed, {kBackgroundStream, cond_key, subj_key}));
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    constexpr int kBurnIn = 2000;
    constexpr double kPinkRms = 3.2;  // steady-state RMS of the filter for unit white input
    for (int ch = 0; ch < channels; ++ch) {
      double b[7] = {0, 0, 0, 0, 0, 0, 0};
      for (int i = -kBurnIn; i < total; ++i) {
        const double w = g(rng);
        b[0] = 0.99886 * b[0] + w * 0.0555179;
        b[1] = 0.99332 * b[1] + w * 0.0750759;
        b[2] = 0.96900 * b[2] + w * 0.1538520;
        b[3] = 0.86650 * b[3] + w * 0.3104856;
        b[4] = 0.55000 * b[4] + w * 0.5329522;
        b[5] = -0.7616 * b[5] - w * 0.0168980;
        const double pink = b[0] + b[1] + b[2] + b[3] + b[4] + b[5] + b[6] + w * 0.5362;
        b[6] = w * 0.115926;
        if (i >= 0) trial.samples(ch, i) = config.background_uv * pink / kPinkRms;
      }
      const double offset = config.dc_offset_uv * u(rng);
      for (int i = 0; i < total; ++i)
        trial.samples(ch, i) += offset + config.sensor_noise_uv * g(rng);
    }
  }

  const double gain =
      condition == Condition::kSpoken ? config.spoken_gain : config.imagined_gain;
  const std::vector<Segment> layout = VoiceLayout(class_index, config.trial_s);
  double shift = 0.0;
  if (condition == Condition::kImagined && config.imagined_jitter_s > 0) {
    Rng rng(DeriveSeed(seed, {kJitterStream, subj_key}));
    std::uniform_real_distribution<double> u(-config.imagined_jitter_s,
                                             config.imagined_jitter_s);
    shift = u(rng);
  }
  const int trial_n = total - pre;
  std::vector<double> env(static_cast<std::size_t>(trial_n));
  for (int i = 0; i < trial_n; ++i)
    env[static_cast<std::size_t>(i)] = EnvelopeAt(layout, i / rate - shift);

  if (class_index != SilenceClass()) {
    // Class-locked oscillation.
    const Vec pattern = ClassPattern(config, class_index, subject);
    const auto osc = NarrowbandOscillation(
        ClassBandCenterHz(class_index), trial_n, rate,
        DeriveSeed(seed, {kClassOscStream, cond_key, subj_key}));
    const double amp = gain * config.class_uv;
    for (int i = 0; i < trial_n; ++i) {
      const double v = amp * env[static_cast<std::size_t>(i)] * osc[static_cast<std::size_t>(i)];
      if (v != 0.0) trial.samples.col(pre + i) += v * pattern;
    }
    // Phoneme-locked oscillations.
    for (std::size_t k = 0; k < layout.size(); ++k) {
      const Segment &seg = layout[k];
      if (seg.phoneme == kPause || config.phoneme_uv == 0.0) continue;
      const Vec ppat = PhonemePattern(config, seg.phoneme, subject);
      const auto posc = NarrowbandOscillation(
          PhonemeBandCenterHz(seg.phoneme), trial_n, rate,
          DeriveSeed(seed, {kPhonemeOscStream, cond_key, subj_key, k}));
      const std::vector<Segment> one{seg};
      const double pamp = gain * config.phoneme_uv;
      for (int i = 0; i < trial_n; ++i) {
        const double e = EnvelopeAt(one, i / rate - shift);
        if (e != 0.0) trial.samples.col(pre + i) += pamp * e * posc[static_cast<std::size_t>(i)] * ppat;
      }
    }
    // Articulation artifact on frontal/temporal channels.
    if (condition == Condition::kSpoken && config.artifact_uv > 0) {
      Rng rng(DeriveSeed(seed, {kArtifactStream, subj_key}));
      Rng grng(DeriveSeed(config.seed, {kArtifactGainStream, subj_key}));
      std::normal_distribution<double> g(0.0, 1.0);
      std::uniform_real_distribution<double> ug(0.5, 1.5);
      const int n_art = std::min(kArtifactChannels, channels);
      for (int ch = 0; ch < n_art; ++ch) {
        const double ch_gain = ug(grng) * config.artifact_uv;
        for (int i = 0; i < trial_n; ++i)
          trial.samples(ch, pre + i) += ch_gain * env[static_cast<std::size_t>(i)] * g(rng);
      }
    }
  }
  return trial;
}

}  // namespace neurotalk::corpus
