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

// corpus/synth.h

#ifndef NEUROTALK_CORPUS_SYNTH_H_
#define NEUROTALK_CORPUS_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "common/types.h"

namespace neurotalk::corpus {

enum class Condition { kSpoken, kImagined };

std::string ConditionName(Condition c);
Condition ParseCondition(const std::string &name);

// Generator knobs for the synthetic paired EEG/voice corpus. Amplitudes are in
// microvolts.
struct CorpusConfig {
  int subjects = 6;
  int trials_per_class = 20;
  std::uint64_t seed = 1;

  int channels = 64;
  int eeg_rate = 2500;
  double pre_trial_s = 0.5;
  double trial_s = 2.0;
  int voice_rate = 22050;

  double spoken_gain = 1.0;
  double imagined_gain = 0.4;
  double background_uv = 10.0;
  double sensor_noise_uv = 3.0;
  double class_uv = 2.0;
  double phoneme_uv = 1.0;
  double artifact_uv = 4.0;
  double dc_offset_uv = 20.0;
  // Weight of the subject-specific part of each spatial pattern relative to
  // the part shared by all subjects.
  double subject_pattern_mix = 0.5;
  // Imagined speech is not locked to the reference voice; its onset is
  // shifted uniformly within +-imagined_jitter_s.
  double imagined_jitter_s = 0.1;

  int PreTrialSamples() const;
  int TrialSamples() const;
  int TotalSamples() const;
  int VoiceSamples() const;
};

struct Segment {
  double start_s;
  double end_s;
  int phoneme;
};

inline constexpr double kPhonemeSeconds = 0.120;
inline constexpr double kRampSeconds = 0.010;

// Phoneme layout of a class, centred in the trial window.
std::vector<Segment> VoiceLayout(int class_index, double trial_s);

// Gate in [0, 1] of the voiced content at time t (seconds from trial onset).
double EnvelopeAt(const std::vector<Segment> &layout, double t);

struct VoiceClip {
  std::vector<double> waveform;  // voice_rate Hz, [-1, 1]
  std::vector<Segment> layout;
  int class_index = 0;
  int subject = 0;
  std::uint64_t seed = 0;
};

VoiceClip SynthesizeVoice(int class_index, int subject, std::uint64_t seed,
                          const CorpusConfig &config);
VoiceClip SynthesizeVoice(const std::string &label, int subject, std::uint64_t seed,
                          const CorpusConfig &config);

struct EegTrial {
  Mat samples;  // channels x (pre-trial + trial) samples, microvolts
  int class_index = 0;
  int subject = 0;
  Condition condition = Condition::kSpoken;
  std::uint64_t seed = 0;
};

EegTrial SynthesizeEeg(int class_index, Condition condition, int subject,
                       std::uint64_t seed, const CorpusConfig &config);

// Unit-RMS spatial pattern (length channels) for a class and a phoneme.
Vec ClassPattern(const CorpusConfig &config, int class_index, int subject);
Vec PhonemePattern(const CorpusConfig &config, int phoneme, int subject);

// Centre frequency of the narrowband gamma oscillation for a non-silence class
// and for a phoneme.
double ClassBandCenterHz(int class_index);
double PhonemeBandCenterHz(int phoneme);
inline constexpr double kBandWidthHz = 4.0;

// Channels that receive the articulation artifact in the spoken condition.
inline constexpr int kArtifactChannels = 16;

}  // namespace neurotalk::corpus

#endif  // NEUROTALK_CORPUS_SYNTH_H_
