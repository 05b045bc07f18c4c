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

// nn/parameters.cc

#include "nn/parameters.h"

#include <cmath>

#include "common/error.h"

namespace neurotalk::nn {

Parameter *ParameterSet::Add(const std::string &name, Eigen::Index rows, Eigen::Index cols) {
  Require(Find(name) == nullptr, "duplicate parameter name " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Mat::Zero(rows, cols);
  p->grad = Mat::Zero(rows, cols);
  params_.push_back(std::move(p));
  return params_.back().get();
}

Parameter *ParameterSet::Find(const std::string &name) const {
  for (const auto &p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

void ParameterSet::ZeroGrad() {
  for (auto &p : params_) p->grad.setZero();
}

std::size_t ParameterSet::Count() const {
  std::size_t n = 0;
  for (const auto &p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

bool ParameterSet::AllFinite() const {
  for (const auto &p : params_)
    if (!p->value.allFinite()) return false;
  return true;
}

void ParameterSet::CopyValuesFrom(const ParameterSet &other) {
  Require(other.params_.size() == params_.size(), "parameter layouts differ");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Parameter &src = *other.params_[i];
    Parameter &dst = *params_[i];
    Require(src.name == dst.name && src.value.rows() == dst.value.rows() &&
                src.value.cols() == dst.value.cols(),
            "parameter layouts differ at " + dst.name);
    dst.value = src.value;
  }
}

void InitNormal(Parameter &p, double stddev, Rng &rng) {
  std::normal_distribution<double> g(0.0, stddev);
  for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = g(rng);
}

void InitXavierUniform(Parameter &p, Eigen::Index fan_in, Eigen::Index fan_out, Rng &rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-a, a);
  for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = u(rng);
}

void InitOrthogonalBlocks(Parameter &p, int blocks, Rng &rng) {
  const Eigen::Index h = p.value.cols();
  Require(p.value.rows() == h * blocks, "orthogonal init expects stacked square blocks");
  std::normal_distribution<double> g(0.0, 1.0);
  for (int b = 0; b < blocks; ++b) {
    Mat a(h, h);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(h, h);
    const Vec d = qr.matrixQR().diagonal();
    for (Eigen::Index c = 0; c < h; ++c)
      if (d(c) < 0) q.col(c) = -q.col(c);
    p.value.middleRows(b * h, h) = q;
  }
}

}  // namespace neurotalk::nn
