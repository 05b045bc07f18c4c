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

// tests/unit/test_corpus.cc

#include <doctest.h>

#include <cmath>
#include <map>

#include "corpus/classes.h"
#include "corpus/splits.h"
#include "corpus/synth.h"
#include "support/spectra.h"

namespace neurotalk::corpus {
namespace {

using testing::Db;
using testing::RmsDbfs;
using testing::Row;
using testing::WelchBandPower;

CorpusConfig SmallConfig() {
  CorpusConfig c;
  c.subjects = 2;
  return c;
}

// Band power of the trial window after projecting channels onto `pattern`.
double ProjectedBandPower(const EegTrial &t, const CorpusConfig &c, const Vec &pattern, double lo, double hi) {
  const Mat proj = pattern.transpose() * t.samples;
  return WelchBandPower(Row(proj, 0, c.PreTrialSamples()), c.eeg_rate, lo, hi, 1250);
}

double MeanChannelBandPower(const EegTrial &t, const CorpusConfig &c, double lo, double hi) {
  double acc = 0.0;
  for (Eigen::Index ch = 0; ch < t.samples.rows(); ++ch)
    acc += WelchBandPower(Row(t.samples, ch, c.PreTrialSamples()), c.eeg_rate, lo, hi, 1250);
  return acc / static_cast<double>(t.samples.rows());
}

TEST_CASE("class inventory") {
  CHECK(NumClasses() == 13);
  CHECK(ClassAt(SilenceClass()).transcript.empty());
  CHECK(ClassAt(ClassIndex("stop")).transcript == "stop");
  CHECK_THROWS(ClassIndex("jump"));
  // Every phoneme of the unseen word occurs in some other class.
  for (int p : ClassAt(ClassIndex("stop")).phonemes) {
    bool found = false;
    for (int c = 0; c < NumClasses(); ++c)
      if (c != ClassIndex("stop"))
        for (int q : ClassAt(c).phonemes) found = found || q == p;
    CHECK(found);
  }
}

TEST_CASE("silence voice clip is below -50 dBFS") {
  const CorpusConfig c = SmallConfig();
  const VoiceClip clip = SynthesizeVoice(SilenceClass(), 0, 11, c);
  CHECK(static_cast<int>(clip.waveform.size()) == c.VoiceSamples());
  CHECK(RmsDbfs(clip.waveform) < -50.0);
}

TEST_CASE("voice synthesis is deterministic") {
  const CorpusConfig c = SmallConfig();
  const VoiceClip a = SynthesizeVoice(3, 1, 42, c);
  const VoiceClip b = SynthesizeVoice(3, 1, 42, c);
  CHECK(a.waveform == b.waveform);
  const VoiceClip other = SynthesizeVoice(3, 1, 43, c);
  CHECK(a.waveform != other.waveform);
}

TEST_CASE("stop has at least 480 ms of voiced content centred in the trial") {
  const CorpusConfig c = SmallConfig();
  const auto layout = VoiceLayout(ClassIndex("stop"), c.trial_s);
  const double dt = 1e-4;
  double voiced = 0.0, moment = 0.0;
  for (int k = 0; k * dt < c.trial_s; ++k) {
    const double t = (k + 0.5) * dt;
    const double e = EnvelopeAt(layout, t);
    if (e > 0.0) {
      voiced += dt;
      moment += t * dt;
    }
  }
  CHECK(voiced >= 0.480 - 1e-9);
  CHECK(moment / voiced == doctest::Approx(c.trial_s / 2).epsilon(0.01));
  const VoiceClip clip = SynthesizeVoice("stop", 0, 5, c);
  CHECK(RmsDbfs(clip.waveform) > -40.0);
}

TEST_CASE("eeg trial shape and determinism") {
  const CorpusConfig c = SmallConfig();
  const EegTrial a = SynthesizeEeg(2, Condition::kImagined, 1, 9, c);
  CHECK(a.samples.rows() == c.channels);
  CHECK(a.samples.cols() == c.TotalSamples());
  const EegTrial b = SynthesizeEeg(2, Condition::kImagined, 1, 9, c);
  CHECK(a.samples == b.samples);
}

TEST_CASE("imagined silence trial has no class oscillation") {
  const CorpusConfig c = SmallConfig();
  CorpusConfig background = c;
  background.class_uv = 0.0;
  background.phoneme_uv = 0.0;
  background.artifact_uv = 0.0;
  const EegTrial silence = SynthesizeEeg(SilenceClass(), Condition::kImagined, 0, 1234, c);
  const EegTrial reference = SynthesizeEeg(ClassIndex("stop"), Condition::kImagined, 0, 777, background);
  for (int k = 0; k < NumClasses(); ++k) {
    if (k == SilenceClass()) continue;
    const double f = ClassBandCenterHz(k);
    const double lo = f - kBandWidthHz / 2, hi = f + kBandWidthHz / 2;
    const double ratio = MeanChannelBandPower(silence, c, lo, hi) / MeanChannelBandPower(reference, c, lo, hi);
    CHECK(std::abs(Db(ratio)) < 3.0);
  }
}

TEST_CASE("spoken and imagined trials share the pattern; spoken is at least 6 dB stronger") {
  const CorpusConfig c = SmallConfig();
  for (int k : {1, 4, 9}) {
    const Vec pattern = ClassPattern(c, k, 0);
    CHECK(pattern.norm() == doctest::Approx(std::sqrt(static_cast<double>(c.channels))).epsilon(1e-9));
    const double f = ClassBandCenterHz(k);
    const double lo = f - kBandWidthHz / 2, hi = f + kBandWidthHz / 2;
    double spoken = 0.0, imagined = 0.0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      spoken += ProjectedBandPower(SynthesizeEeg(k, Condition::kSpoken, 0, seed, c), c, pattern, lo, hi);
      imagined += ProjectedBandPower(SynthesizeEeg(k, Condition::kImagined, 0, seed, c), c, pattern, lo, hi);
    }
    CHECK(Db(spoken / imagined) >= 6.0);
  }
}

TEST_CASE("unseen class never enters training") {
  CorpusConfig c = SmallConfig();
  c.trials_per_class = 100;
  const auto trials = EnumerateTrials(c);
  const SplitPlan plan = BuildSplits(trials, {"stop"}, SplitScheme::kFiveFold, 0, 3);
  const int stop = ClassIndex("stop");
  int stop_train = 0, stop_test = 0;
  for (const auto &t : trials) {
    const auto s = plan.Find(t.Id());
    if (t.class_index != stop || !s) continue;
    if (*s == Split::kTrain) ++stop_train;
    if (*s == Split::kTest) ++stop_test;
  }
  CHECK(stop_train == 0);
  CHECK(stop_test > 0);
}

TEST_CASE("five-fold split is 60/20/20 per class within one trial") {
  CorpusConfig c = SmallConfig();
  c.trials_per_class = 23;
  const auto trials = EnumerateTrials(c);
  const SplitPlan plan = BuildSplits(trials, {}, SplitScheme::kFiveFold, 2, 8);
  std::map<std::tuple<int, int, int, Split>, int> counts;
  for (const auto &t : trials) counts[{static_cast<int>(t.condition), t.subject, t.class_index, *plan.Find(t.Id())}]++;
  for (int cond = 0; cond < 2; ++cond)
    for (int s = 0; s < c.subjects; ++s)
      for (int k = 0; k < NumClasses(); ++k) {
        const double n = c.trials_per_class;
        CHECK(std::abs(counts[{cond, s, k, Split::kTrain}] - 0.6 * n) <= 1.0);
        CHECK(std::abs(counts[{cond, s, k, Split::kVal}] - 0.2 * n) <= 1.0);
        CHECK(std::abs(counts[{cond, s, k, Split::kTest}] - 0.2 * n) <= 1.0);
      }
}

TEST_CASE("split assignment is deterministic and pairs conditions") {
  const CorpusConfig c = SmallConfig();
  const auto trials = EnumerateTrials(c);
  const SplitPlan a = BuildSplits(trials, {"stop"}, SplitScheme::kFiveFold, 1, 5);
  const SplitPlan b = BuildSplits(trials, {"stop"}, SplitScheme::kFiveFold, 1, 5);
  CHECK(a.assignments == b.assignments);
  CHECK(a.csp_only == b.csp_only);
  for (const auto &t : trials) {
    if (t.condition != Condition::kSpoken) continue;
    TrialRef img = t;
    img.condition = Condition::kImagined;
    CHECK(a.Find(t.Id()) == a.Find(img.Id()));
  }
}

TEST_CASE("leave-one-out excludes the held-out subject from spoken training") {
  const CorpusConfig c = SmallConfig();
  const auto trials = EnumerateTrials(c);
  const SplitPlan plan = BuildSplits(trials, {"stop"}, SplitScheme::kLeaveOneOut, 0, 5, 1);
  for (const auto &t : trials) {
    const auto s = plan.Find(t.Id());
    if (!s) continue;
    if (t.condition == Condition::kSpoken) CHECK(t.subject != 1);
    if (t.condition == Condition::kImagined) CHECK(t.subject == 1);
  }
  CHECK_THROWS(BuildSplits(trials, {}, SplitScheme::kLeaveOneOut, 0, 5));
  CHECK_THROWS(BuildSplits(trials, {}, SplitScheme::kFiveFold, 5, 5));
}

}  // namespace
}  // namespace neurotalk::corpus
