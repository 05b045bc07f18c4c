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

// tests/unit/test_model.cc

#include <doctest.h>

#include <random>

#include "common/rng.h"
#include "model/discriminator.h"
#include "model/generator.h"
#include "support/oracles.h"

namespace neurotalk::model {
namespace {

Mat Gaussian(int rows, int cols, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

TEST_CASE("generator maps (104,16) to (80,192) within [-1,1]") {
  GeneratorConfig cfg = GeneratorConfig().Reduced(8);
  CHECK(cfg.OutputFrames() == 192);
  Generator g(cfg);
  g.Init(3, 0.1);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Mat y = g.Forward(Gaussian(104, 16, s, 3.0), nullptr);
    CHECK(y.rows() == 80);
    CHECK(y.cols() == 192);
    CHECK(y.maxCoeff() <= 1.0);
    CHECK(y.minCoeff() >= -1.0);
  }
}

TEST_CASE("full-width generator output shape") {
  Generator g{GeneratorConfig{}};
  g.Init(1);
  const Mat y = g.Forward(Gaussian(104, 16, 4), nullptr);
  CHECK(y.rows() == 80);
  CHECK(y.cols() == 192);
}

TEST_CASE("generator forward is deterministic") {
  Generator g(GeneratorConfig().Reduced(8));
  g.Init(5);
  const Mat x = Gaussian(104, 16, 6);
  CHECK(g.Forward(x, nullptr) == g.Forward(x, nullptr));
  Generator h(GeneratorConfig().Reduced(8));
  h.Init(5);
  CHECK(g.Forward(x, nullptr) == h.Forward(x, nullptr));
}

TEST_CASE("discriminator output lies in (0,1); stage lengths 192-64-22-8") {
  DiscriminatorConfig cfg;
  const std::vector<int> expected{192, 64, 22, 8};
  CHECK(cfg.StageLengths() == expected);
  Discriminator d(cfg.Reduced(8));
  d.Init(2, 0.1);
  for (std::uint64_t s = 0; s < 4; ++s) {
    Discriminator::Cache cache;
    const double p = d.Forward(Gaussian(80, 192, s, 1.0 + s), &cache);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(cache.logit == doctest::Approx(std::log(p / (1.0 - p))).epsilon(1e-9));
  }
}

TEST_CASE("parameter counts are a pure function of the config") {
  CHECK(Generator(GeneratorConfig{}).params().Count() == 30656848);
  CHECK(Discriminator(DiscriminatorConfig{}).params().Count() == 1485473);
  CHECK(Generator(GeneratorConfig().Reduced(8)).params().Count() == 529520);
  CHECK(Discriminator(DiscriminatorConfig().Reduced(8)).params().Count() == 31377);
  GeneratorConfig flat;
  flat.recurrent = false;
  CHECK(Generator(flat).params().Count() == 28030288);
}

TEST_CASE("config validation") {
  GeneratorConfig g;
  g.upsample_rates = {3, 2};
  CHECK(g.OutputFrames() == 96);
  g.gru_hidden = 100;
  CHECK_THROWS(g.Validate());
  DiscriminatorConfig d;
  d.gru_hidden = 10;
  CHECK_THROWS(d.Validate());
  Generator gen(GeneratorConfig().Reduced(8));
  CHECK_THROWS(gen.Forward(Mat::Zero(100, 16), nullptr));
}

TEST_CASE("generator gradients match finite differences") {
  Generator g(GeneratorConfig().Reduced(8));
  g.Init(1, 0.1);
  Mat x = Gaussian(104, 16, 2);
  const Mat w = Gaussian(80, 192, 3);
  Generator::Cache cache;
  g.Forward(x, &cache);
  g.params().ZeroGrad();
  const Mat dx = g.Backward(w, cache);
  auto loss = [&] { return (g.Forward(x, nullptr).array() * w.array()).sum(); };
  const auto pr = testing::CheckParameterGradients(g.params(), loss, 3);
  CHECK_MESSAGE(pr.worst < 1e-4, pr.worst_name);
  const auto ir = testing::CheckInputGradient(x, dx, loss, 20);
  CHECK(ir.worst < 1e-4);
}

TEST_CASE("discriminator gradients match finite differences") {
  for (bool recurrent : {true, false}) {
    DiscriminatorConfig cfg = DiscriminatorConfig().Reduced(8);
    cfg.recurrent = recurrent;
    Discriminator d(cfg);
    d.Init(4, 0.1);
    Mat m = Gaussian(80, 192, 5);
    Discriminator::Cache cache;
    d.Forward(m, &cache);
    d.params().ZeroGrad();
    const Mat dm = d.BackwardLogit(1.0, cache);
    auto loss = [&] { return d.Logit(m); };
    const auto pr = testing::CheckParameterGradients(d.params(), loss, 3);
    CHECK_MESSAGE(pr.worst < 1e-4, pr.worst_name);
    const auto ir = testing::CheckInputGradient(m, dm, loss, 20);
    CHECK(ir.worst < 1e-4);
  }
}

TEST_CASE("discriminator input gradient on a constant input") {
  Discriminator d(DiscriminatorConfig().Reduced(8));
  d.Init(6, 0.1);
  Mat m = Mat::Constant(80, 192, 0.3);
  Discriminator::Cache cache;
  d.Forward(m, &cache);
  const Mat dm = d.BackwardLogit(1.0, cache, false);
  const auto ir = testing::CheckInputGradient(m, dm, [&] { return d.Logit(m); }, 30);
  CHECK(ir.worst < 1e-4);
}

}  // namespace
}  // namespace neurotalk::model
