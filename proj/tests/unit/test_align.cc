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

// tests/unit/test_align.cc

#include <doctest.h>

#include "align/dtw.h"
#include "common/rng.h"
#include "support/oracles.h"

namespace neurotalk::align {
namespace {

Mat Seq(std::initializer_list<double> v) {
  Mat m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(0, i++) = x;
  return m;
}

TEST_CASE("identical sequences align on the diagonal at zero cost") {
  Mat a(3, 5);
  a.setRandom();
  const WarpPath p = Dtw(a, a);
  CHECK(p.cost == 0.0);
  REQUIRE(p.pairs.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(p.pairs[static_cast<std::size_t>(i)] == std::pair<int, int>{i, i});
}

TEST_CASE("[1,3] vs [1,2,3] costs 1") {
  const WarpPath p = Dtw(Seq({1, 3}), Seq({1, 2, 3}));
  CHECK(p.cost == doctest::Approx(1.0));
  const auto brute = testing::BruteForceDtw(Seq({1, 3}), Seq({1, 2, 3}));
  CHECK(brute.cost == doctest::Approx(1.0));
  CHECK(std::find(brute.optimal.begin(), brute.optimal.end(), p.pairs) != brute.optimal.end());
}

TEST_CASE("dtw equals exhaustive enumeration for short sequences") {
  Rng rng(17);
  std::uniform_int_distribution<int> len(1, 6), dim(1, 3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = dim(rng);
    Mat a(d, len(rng)), b(d, len(rng));
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
    const WarpPath p = Dtw(a, b);
    const auto brute = testing::BruteForceDtw(a, b);
    CHECK(std::abs(p.cost - brute.cost) <= 1e-9);
    CHECK(std::find(brute.optimal.begin(), brute.optimal.end(), p.pairs) != brute.optimal.end());
  }
}

TEST_CASE("warp with the identity path returns b") {
  Mat b(4, 6);
  b.setRandom();
  WarpPath id;
  for (int i = 0; i < 6; ++i) id.pairs.emplace_back(i, i);
  CHECK(WarpTo(6, b, id) == b);
}

TEST_CASE("warp averages the columns matched to each index") {
  Mat b(2, 4);
  b << 1, 3, 5, 9, -2, 0, 4, 4;
  WarpPath p;
  p.pairs = {{0, 0}, {0, 1}, {1, 2}, {1, 3}};
  const Mat w = WarpTo(2, b, p);
  Mat expected(2, 2);
  expected << 2, 7, -1, 4;
  CHECK(w == expected);
}

TEST_CASE("warp of a constant sequence is constant") {
  const Mat b = Mat::Constant(3, 7, 0.25);
  Mat a(3, 4);
  a.setRandom();
  const Mat w = WarpTo(4, b, Dtw(a, b));
  CHECK((w.array() == 0.25).all());
}

TEST_CASE("dtw rejects empty or mismatched inputs") {
  CHECK_THROWS(Dtw(Mat(2, 0), Mat::Ones(2, 3)));
  CHECK_THROWS(Dtw(Mat::Ones(2, 3), Mat::Ones(3, 3)));
  WarpPath bad;
  bad.pairs = {{0, 1}, {1, 2}};
  CHECK_THROWS(WarpTo(2, Mat::Ones(1, 3), bad));
}

}  // namespace
}  // namespace neurotalk::align
