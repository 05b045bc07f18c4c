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

// tests/unit/test_embedding.cc

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "common/rng.h"
#include "embedding/csp.h"

namespace neurotalk::embedding {
namespace {

Mat RandomTrial(Rng &rng, int channels, int samples, const Vec &gains) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(channels, samples);
  for (int c = 0; c < channels; ++c)
    for (int i = 0; i < samples; ++i) m(c, i) = gains(c) * g(rng);
  return m;
}

// Largest-eigenvalue solution of C1 w = lambda (C1 + C2) w for 2x2 matrices.
Vec ClosedFormTopFilter(const Mat &c1, const Mat &c2, double *lambda) {
  const Mat s = c1 + c2;
  const double a = s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
  const double b = -(c1(0, 0) * s(1, 1) + c1(1, 1) * s(0, 0) - 2.0 * c1(0, 1) * s(0, 1));
  const double c = c1(0, 0) * c1(1, 1) - c1(0, 1) * c1(0, 1);
  const double l = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  *lambda = l;
  Vec w(2);
  w << c1(0, 1) - l * s(0, 1), -(c1(0, 0) - l * s(0, 0));
  if (w.norm() < 1e-12) w << c1(1, 1) - l * s(1, 1), -(c1(0, 1) - l * s(0, 1));
  return w.normalized();
}

double AbsCosine(const Vec &a, const Vec &b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

CspBank FitTwoClass(const Mat &c1, const Mat &c2) {
  CspConfig cfg;
  cfg.filters_per_class = 2;
  cfg.shrinkage = 0.0;
  CspFitter f(2, 2, cfg);
  for (int k = 0; k < 2; ++k) {
    f.AddCovariance(c1, 0);
    f.AddCovariance(c2, 1);
  }
  return f.Fit({"a", "b"}, "imagined");
}

TEST_CASE("analytic two-class covariances: diag(4,1) vs diag(1,4)") {
  Mat c1 = Mat::Zero(2, 2), c2 = Mat::Zero(2, 2);
  c1.diagonal() << 4.0, 1.0;
  c2.diagonal() << 1.0, 4.0;
  const CspBank bank = FitTwoClass(c1, c2);
  const Vec top = bank.filters.row(0).transpose();
  double lambda = 0.0;
  const Vec ref = ClosedFormTopFilter(c1, c2, &lambda);
  CHECK(lambda == doctest::Approx(0.8));
  CHECK(AbsCosine(top, ref) > 1.0 - 1e-6);
  CHECK(top.dot(c1 * top) / top.dot(c2 * top) == doctest::Approx(4.0).epsilon(1e-9));
  // Bottom filter of class a is the top filter of class b.
  CHECK(AbsCosine(bank.filters.row(1).transpose(), bank.filters.row(2).transpose()) > 1.0 - 1e-9);
}

TEST_CASE("analytic two-class covariances: correlated pencil") {
  Mat c1(2, 2), c2(2, 2);
  c1 << 2.0, 0.7, 0.7, 1.0;
  c2 << 1.0, -0.3, -0.3, 3.0;
  const CspBank bank = FitTwoClass(c1, c2);
  double lambda = 0.0;
  const Vec ref = ClosedFormTopFilter(c1, c2, &lambda);
  const Vec top = bank.filters.row(0).transpose();
  CHECK(AbsCosine(top, ref) > 1.0 - 1e-6);
  CHECK(top.dot(c1 * top) / top.dot((c1 + c2) * top) == doctest::Approx(lambda).epsilon(1e-9));
}

struct Fixture {
  std::vector<Mat> trials;
  std::vector<int> labels;
  Fixture() {
    Rng rng(5);
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 6; ++k) {
        Vec gains = Vec::Ones(8);
        gains(c) = 3.0;
        gains(c + 3) = 0.5;
        trials.push_back(RandomTrial(rng, 8, 400, gains));
        labels.push_back(c);
      }
  }
  CspBank Fit(const std::vector<std::size_t> &order) const {
    CspConfig cfg;
    cfg.filters_per_class = 4;
    cfg.segments = 4;
    CspFitter f(3, 8, cfg);
    for (std::size_t i : order) f.Add(trials[i], labels[i]);
    return f.Fit({"x", "y", "z"}, "imagined");
  }
};

Mat AlignSigns(Mat m, const Mat &ref) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    if (m.row(r).dot(ref.row(r)) < 0) m.row(r) *= -1.0;
  return m;
}

TEST_CASE("trial order does not change the filters") {
  Fixture fx;
  std::vector<std::size_t> order(fx.trials.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const CspBank a = fx.Fit(order);
  std::reverse(order.begin(), order.end());
  std::rotate(order.begin(), order.begin() + 5, order.end());
  const CspBank b = fx.Fit(order);
  CHECK((AlignSigns(b.filters, a.filters) - a.filters).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("duplicating every trial of a class leaves the filters unchanged") {
  Fixture fx;
  std::vector<std::size_t> order(fx.trials.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const CspBank a = fx.Fit(order);
  for (std::size_t i = 0; i < fx.trials.size(); ++i)
    if (fx.labels[i] == 1) order.push_back(i);
  const CspBank b = fx.Fit(order);
  CHECK((AlignSigns(b.filters, a.filters) - a.filters).cwiseAbs().maxCoeff() < 1e-9);
}

CspBank FullBank() {
  Rng rng(9);
  CspFitter f(13, 64);
  std::vector<std::string> order;
  for (int c = 0; c < 13; ++c) {
    order.push_back("c" + std::to_string(c));
    for (int k = 0; k < 3; ++k) {
      Vec gains = Vec::Ones(64);
      gains(c) = 2.0;
      f.Add(RandomTrial(rng, 64, 800, gains), c);
    }
  }
  return f.Fit(order, "imagined");
}

TEST_CASE("embedding of a trial is 104 x 16") {
  CspBank bank = FullBank();
  CHECK(bank.NumFeatures() == 104);
  Rng rng(3);
  const Mat trial = RandomTrial(rng, 64, 5000, Vec::Ones(64));
  const Mat raw = LogVarianceFeatures(trial, bank);
  CHECK(raw.rows() == 104);
  CHECK(raw.cols() == 16);
  FitFeatureNorm(bank, {raw, LogVarianceFeatures(RandomTrial(rng, 64, 5000, Vec::Ones(64)), bank)});
  const Mat e = Embed(trial, bank);
  CHECK(e.rows() == 104);
  CHECK(e.cols() == 16);
  CHECK(e.allFinite());
}

TEST_CASE("scaling a trial by 2 shifts raw features by log 4") {
  const CspBank bank = FullBank();
  Rng rng(4);
  const Mat trial = RandomTrial(rng, 64, 5000, Vec::Ones(64));
  const Mat diff = LogVarianceFeatures(2.0 * trial, bank) - LogVarianceFeatures(trial, bank);
  CHECK((diff.array() - std::log(4.0)).abs().maxCoeff() < 1e-9);
}

TEST_CASE("all-zero trial hits the variance floor") {
  const CspBank bank = FullBank();
  const Mat raw = LogVarianceFeatures(Mat::Zero(64, 5000), bank);
  CHECK((raw.array() == std::log(1e-12)).all());
}

TEST_CASE("bank hash covers filters and statistics") {
  CspBank a = FullBank();
  CspBank b = a;
  CHECK(a.Hash() == b.Hash());
  b.filters(3, 3) += 1e-12;
  CHECK(a.Hash() != b.Hash());
  b = a;
  b.trained_on = "spoken";
  CHECK(a.Hash() != b.Hash());
}

TEST_CASE("fitter rejects classes with fewer than two trials") {
  CspConfig cfg;
  cfg.filters_per_class = 2;
  CspFitter f(2, 4, cfg);
  f.Add(Mat::Random(4, 100), 0);
  f.Add(Mat::Random(4, 100), 0);
  f.Add(Mat::Random(4, 100), 1);
  CHECK_THROWS(f.Fit({"a", "b"}, "imagined"));
}

}  // namespace
}  // namespace neurotalk::embedding
