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

// tests/unit/test_asr.cc

#include <doctest.h>

#include <cmath>
#include <random>

#include "asr/alphabet.h"
#include "asr/cer.h"
#include "asr/ctc.h"
#include "asr/recognizer.h"
#include "asr/train_asr.h"
#include "common/rng.h"
#include "corpus/classes.h"
#include "corpus/synth.h"
#include "dsp/spectral.h"
#include "support/oracles.h"

namespace neurotalk::asr {
namespace {

// Random per-step log-softmax over `symbols` rows.
Mat RandomLogProbs(int symbols, int steps, Rng &rng) {
  std::normal_distribution<double> g(0.0, 1.5);
  Mat m(symbols, steps);
  for (int t = 0; t < steps; ++t) {
    double mx = -1e300;
    for (int s = 0; s < symbols; ++s) {
      m(s, t) = g(rng);
      mx = std::max(mx, m(s, t));
    }
    double z = 0.0;
    for (int s = 0; s < symbols; ++s) z += std::exp(m(s, t) - mx);
    m.col(t).array() -= mx + std::log(z);
  }
  return m;
}

TEST_CASE("ctc on uniform two-symbol distributions") {
  // symbol 0 is blank, 1 is 'a'
  const double lh = std::log(0.5);
  CHECK(CtcLoss(Mat::Constant(2, 1, lh), {1}).loss == doctest::Approx(0.6931471805599453).epsilon(1e-12));
  CHECK(CtcLoss(Mat::Constant(2, 2, lh), {1}).loss == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
  CHECK(-std::log(0.75) == doctest::Approx(0.2877).epsilon(1e-4));
}

TEST_CASE("ctc with an empty target is the all-blank path") {
  Rng rng(2);
  for (int steps = 1; steps <= 5; ++steps) {
    const Mat lp = RandomLogProbs(4, steps, rng);
    CHECK(CtcLoss(lp, {}).loss == doctest::Approx(-lp.row(0).sum()).epsilon(1e-12));
  }
}

TEST_CASE("ctc equals path enumeration on small cases") {
  Rng rng(3);
  for (int symbols = 2; symbols <= 3; ++symbols)
    for (int steps = 1; steps <= 4; ++steps)
      for (int len = 0; len <= 2; ++len) {
        std::vector<std::vector<int>> targets{{}};
        for (int l = 0; l < len; ++l) {
          std::vector<std::vector<int>> next;
          for (const auto &t : targets)
            for (int s = 1; s < symbols; ++s) {
              auto u = t;
              u.push_back(s);
              next.push_back(u);
            }
          targets = next;
        }
        for (const auto &target : targets) {
          const Mat lp = RandomLogProbs(symbols, steps, rng);
          const CtcResult r = CtcLoss(lp, target);
          const double brute = testing::BruteForceCtc(lp, target, 0);
          if (std::isinf(brute)) {
            CHECK_FALSE(r.feasible);
            CHECK(std::isinf(r.loss));
          } else {
            CHECK(std::abs(r.loss - brute) <= 1e-10);
          }
        }
      }
}

TEST_CASE("ctc gradient matches finite differences") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Mat lp = RandomLogProbs(4, 6, rng);
    const std::vector<int> target{1, 2, 2};
    const CtcResult r = CtcLoss(lp, target);
    REQUIRE(r.feasible);
    for (Eigen::Index i = 0; i < lp.size(); ++i) {
      const double fd = testing::CentralDifference([&] { return CtcLoss(lp, target, 0, false).loss; }, lp.data()[i], 1e-6);
      CHECK(testing::RelativeError(fd, r.grad.data()[i]) < 1e-4);
    }
  }
}

TEST_CASE("ctc minimum steps and infeasible targets") {
  CHECK(CtcMinSteps({}) == 0);
  CHECK(CtcMinSteps({1, 2}) == 2);
  CHECK(CtcMinSteps({1, 1}) == 3);
  const CtcResult r = CtcLoss(Mat::Constant(3, 2, std::log(1.0 / 3)), {1, 1});
  CHECK_FALSE(r.feasible);
  CHECK(std::isinf(r.loss));
  CHECK(r.grad.isZero());
}

TEST_CASE("appending blank steps never lowers the loss by more than the blank cost") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat lp = RandomLogProbs(3, 4, rng);
    Mat padded(3, 6);
    padded.leftCols(4) = lp;
    padded.rightCols(2) = RandomLogProbs(3, 2, rng);
    const std::vector<int> target{1, 2};
    const double base = CtcLoss(lp, target).loss;
    const double longer = CtcLoss(padded, target).loss;
    // Only-blank continuation is one of the paths of the longer sequence.
    CHECK(longer <= base - padded.rightCols(2).row(0).sum() + 1e-12);
  }
}

TEST_CASE("greedy decoding collapses repeats and removes blanks") {
  auto decode = [](std::initializer_list<int> argmax) {
    Mat lp = Mat::Constant(Alphabet::kSize, static_cast<Eigen::Index>(argmax.size()), -5.0);
    Eigen::Index t = 0;
    for (int s : argmax) lp(s, t++) = -0.01;
    return Alphabet::Decode(GreedyDecode(lp));
  };
  const int a = Alphabet::Index('a'), b = Alphabet::Index('b');
  CHECK(decode({a, a, Alphabet::kBlank, b}) == "ab");
  CHECK(decode({Alphabet::kBlank, Alphabet::kBlank, Alphabet::kBlank}).empty());
  const int s = Alphabet::Index('s'), t = Alphabet::Index('t'), o = Alphabet::Index('o'), p = Alphabet::Index('p');
  CHECK(decode({s, t, t, Alphabet::kBlank, o, p}) == "stop");
  CHECK(decode({a, Alphabet::kBlank, a}) == "aa");
}

TEST_CASE("alphabet covers every class transcript") {
  for (const auto &c : corpus::Classes()) CHECK(Alphabet::Decode(Alphabet::Encode(c.transcript)) == c.transcript);
  CHECK(Alphabet::kSize == 28);
  CHECK(Alphabet::Encode("Stop") == Alphabet::Encode("stop"));
  CHECK_THROWS(Alphabet::Encode("no!"));
}

TEST_CASE("character error rate") {
  CHECK(Cer("stop", "stap") == doctest::Approx(25.0));
  CHECK(Cer("water", "water") == 0.0);
  CHECK(Cer("ab", "ba") == doctest::Approx(100.0));
  CHECK(EditDistance("ab", "ba") == 2);
  CHECK(Cer("", "") == 0.0);
  CHECK(Cer("", "abc") == doctest::Approx(300.0));
  CHECK(Cer("help me", "") == doctest::Approx(100.0));
  CHECK(EditDistance("kitten", "sitting") == 3);
  Rng rng(6);
  std::uniform_int_distribution<int> len(0, 6), ch(0, 2);
  for (int i = 0; i < 200; ++i) {
    std::string x, y;
    for (int k = len(rng); k > 0; --k) x.push_back(static_cast<char>('a' + ch(rng)));
    for (int k = len(rng); k > 0; --k) y.push_back(static_cast<char>('a' + ch(rng)));
    CHECK(EditDistance(x, y) == EditDistance(y, x));
    CHECK((Cer(x, y) == 0.0) == (x == y));
    CHECK(EditDistance(x, y) <= std::max(x.size(), y.size()));
  }
}

TEST_CASE("recognizer log-probabilities are normalised per step") {
  RecognizerConfig cfg;
  cfg.conv_channels = 16;
  cfg.gru_hidden = 8;
  Recognizer r(cfg);
  r.Init(1);
  Rng rng(2);
  std::uniform_int_distribution<int> frames(8, 200);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Mat mel(80, frames(rng));
    for (Eigen::Index i = 0; i < mel.size(); ++i) mel.data()[i] = g(rng);
    const Mat lp = r.Forward(mel, nullptr);
    CHECK(lp.rows() == Alphabet::kSize);
    CHECK(lp.cols() == Recognizer::OutputSteps(static_cast<int>(mel.cols())));
    CHECK((lp.array().exp().colwise().sum() - 1.0).abs().maxCoeff() < 1e-6);
  }
  CHECK(Recognizer::OutputSteps(192) == 48);
  CHECK(Recognizer::OutputSteps(173) == 44);
}

TEST_CASE("recognizer gradients match finite differences") {
  RecognizerConfig cfg;
  cfg.conv_channels = 6;
  cfg.gru_hidden = 4;
  cfg.mel_bands = 5;
  Recognizer r(cfg);
  r.Init(3);
  Rng rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat mel(5, 13);
  for (Eigen::Index i = 0; i < mel.size(); ++i) mel.data()[i] = g(rng);
  const std::vector<int> target{1, 2};
  auto loss = [&] { return CtcLoss(r.Forward(mel, nullptr), target, 0, false).loss; };
  Recognizer::Cache cache;
  const CtcResult c = CtcLoss(r.Forward(mel, &cache), target);
  r.params().ZeroGrad();
  const Mat dmel = r.Backward(c.grad, cache);
  const auto pr = testing::CheckParameterGradients(r.params(), loss, 20);
  CHECK_MESSAGE(pr.worst < 1e-4, pr.worst_name);
  CHECK(testing::CheckInputGradient(mel, dmel, loss, 30).worst < 1e-4);
}

TEST_CASE("time stretch resamples columns linearly") {
  Mat m(1, 3);
  m << 0.0, 1.0, 4.0;
  const Mat s = TimeStretch(m, 5);
  CHECK(s.cols() == 5);
  CHECK(s(0, 0) == 0.0);
  CHECK(s(0, 1) == doctest::Approx(0.5));
  CHECK(s(0, 3) == doctest::Approx(2.5));
  CHECK(s(0, 4) == 4.0);
  CHECK(TimeStretch(m, 3) == m);
}

TEST_CASE("a small recognizer learns the synthetic voices") {
  corpus::CorpusConfig cc;
  dsp::StftConfig sc;
  std::vector<Mat> train_logs;
  std::vector<std::pair<Mat, std::string>> train_raw, held_raw;
  for (int s = 0; s < 2; ++s)
    for (int c = 0; c < corpus::NumClasses(); ++c)
      for (int r = 0; r < 5; ++r) {
        const auto v = corpus::SynthesizeVoice(c, s, DeriveSeed(99, {static_cast<std::uint64_t>(s),
                                                                     static_cast<std::uint64_t>(c),
                                                                     static_cast<std::uint64_t>(r)}),
                                               cc);
        const Mat l = dsp::LogMel(v.waveform, sc);
        if (r < 4) {
          train_logs.push_back(l);
          train_raw.emplace_back(l, corpus::ClassAt(c).transcript);
        } else {
          held_raw.emplace_back(l, corpus::ClassAt(c).transcript);
        }
      }
  const dsp::MelNormStats stats = dsp::FitNormStats(train_logs);
  std::vector<AsrExample> train, held;
  for (const auto &[m, t] : train_raw) train.push_back({dsp::Normalize(m, stats), t});
  for (const auto &[m, t] : held_raw) held.push_back({dsp::Normalize(m, stats), t});
  RecognizerConfig rc;
  rc.conv_channels = 64;
  rc.gru_hidden = 64;
  Recognizer model(rc);
  model.Init(3);
  AsrTrainConfig tc;
  tc.max_epochs = 25;
  const AsrTrainReport rep = TrainRecognizer(model, train, held, tc);
  CHECK(rep.best_cer < 10.0);
  CHECK(rep.reached_target);
  CHECK(CorpusCer(model, held) == doctest::Approx(rep.best_cer));
  for (const auto &ex : held)
    if (ex.transcript.empty()) CHECK(model.Transcribe(ex.mel).empty());

  Recognizer again(rc);
  again.Init(3);
  const AsrTrainReport rep2 = TrainRecognizer(again, train, held, tc);
  CHECK(rep2.best_cer == rep.best_cer);
  CHECK(rep2.heldout_cer == rep.heldout_cer);
}

}  // namespace
}  // namespace neurotalk::asr
