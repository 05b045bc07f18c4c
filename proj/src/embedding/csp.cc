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

// embedding/csp.cc

#include "embedding/csp.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "common/error.h"
#include "common/hash.h"
#include "common/log.h"

namespace neurotalk::embedding {

namespace {

Mat Shrink(const Mat &c, double gamma) {
  const auto n = c.rows();
  return (1.0 - gamma) * c +
         Mat::Identity(n, n) * (gamma * c.trace() / static_cast<double>(n));
}

void FixSign(Eigen::Ref<Vec> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

}  // namespace

std::string CspBank::Hash() const {
  Fnv1a64 h;
  h.Update(filters.data(), sizeof(double) * static_cast<std::size_t>(filters.size()));
  h.Update(feature_mean.data(), sizeof(double) * static_cast<std::size_t>(feature_mean.size()));
  h.Update(feature_std.data(), sizeof(double) * static_cast<std::size_t>(feature_std.size()));
  for (const auto &c : class_order) h.Update(c);
  h.Update(trained_on);
  return h.HexDigest();
}

Mat TrialCovariance(const Mat &trial) {
  Mat c = trial * trial.transpose();
  const double tr = c.trace();
  if (tr <= 0) return Mat::Zero(c.rows(), c.cols());
  return c / tr;
}

CspFitter::CspFitter(int num_classes, int channels, CspConfig config)
    : config_(config), channels_(channels),
      sums_(static_cast<std::size_t>(num_classes), Mat::Zero(channels, channels)),
      counts_(static_cast<std::size_t>(num_classes), 0) {
  Require(num_classes >= 2, "CSP needs at least two classes");
  Require(config.filters_per_class >= 2 && config.filters_per_class % 2 == 0,
          "filters_per_class must be a positive even number");
  Require(config.filters_per_class <= channels, "more filters per class than channels");
}

void CspFitter::Add(const Mat &trial, int class_index) {
  Require(trial.rows() == channels_, "trial channel count does not match the fitter");
  AddCovariance(TrialCovariance(trial), class_index);
}

void CspFitter::AddCovariance(const Mat &covariance, int class_index) {
  Require(class_index >= 0 && class_index < static_cast<int>(sums_.size()),
          "class index out of range");
  sums_[static_cast<std::size_t>(class_index)] += covariance;
  ++counts_[static_cast<std::size_t>(class_index)];
}

CspBank CspFitter::Fit(const std::vector<std::string> &class_order,
                       const std::string &trained_on) const {
  const int classes = static_cast<int>(sums_.size());
  Require(static_cast<int>(class_order.size()) == classes, "class_order size mismatch");
  for (int c = 0; c < classes; ++c)
    if (counts_[static_cast<std::size_t>(c)] < 2)
      Fail(ErrorCode::kInvalidArgument,
           "CSP needs at least 2 trials for class '" + class_order[static_cast<std::size_t>(c)] + "'");

  // The rest covariance averages class means, so class sizes do not weight it.
  std::vector<Mat> means;
  Mat mean_sum = Mat::Zero(channels_, channels_);
  for (int c = 0; c < classes; ++c) {
    means.push_back(sums_[static_cast<std::size_t>(c)] / counts_[static_cast<std::size_t>(c)]);
    mean_sum += means.back();
  }

  const int half = config_.filters_per_class / 2;
  CspBank bank;
  bank.filters.resize(static_cast<Eigen::Index>(classes) * config_.filters_per_class, channels_);
  bank.class_order = class_order;
  bank.trained_on = trained_on;
  bank.filters_per_class = config_.filters_per_class;
  bank.segments = config_.segments;
  bank.variance_floor = config_.variance_floor;

  for (int c = 0; c < classes; ++c) {
    const Mat &own_raw = means[static_cast<std::size_t>(c)];
    const Mat rest_raw = (mean_sum - own_raw) / (classes - 1);
    for (const Mat *m : {&own_raw, &rest_raw}) {
      Eigen::SelfAdjointEigenSolver<Mat> es(*m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < 1e-10 * std::max(m->trace(), 1e-300)) {
        std::ostringstream os;
        os << "rank-deficient covariance for class '" << class_order[static_cast<std::size_t>(c)]
           << "'; relying on shrinkage " << config_.shrinkage;
        LogWarning(os.str());
        break;
      }
    }
    const Mat own = Shrink(own_raw, config_.shrinkage);
    const Mat rest = Shrink(rest_raw, config_.shrinkage);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(own, own + rest);
    if (ges.info() != Eigen::Success)
      Fail(ErrorCode::kNumerical, "generalized eigendecomposition failed");
    const Mat &vecs = ges.eigenvectors();  // eigenvalues ascending
    const Eigen::Index base = static_cast<Eigen::Index>(c) * config_.filters_per_class;
    for (int k = 0; k < half; ++k) {
      Vec top = vecs.col(channels_ - 1 - k);
      Vec bottom = vecs.col(k);
      FixSign(top);
      FixSign(bottom);
      bank.filters.row(base + k) = top.transpose();
      bank.filters.row(base + half + k) = bottom.transpose();
    }
  }
  if (!bank.filters.allFinite()) Fail(ErrorCode::kNumerical, "non-finite CSP filters");
  return bank;
}

Mat LogVarianceFeatures(const Mat &trial, const CspBank &bank) {
  Require(trial.rows() == bank.filters.cols(), "trial channel count does not match the CSP bank");
  const Eigen::Index seg_len = trial.cols() / bank.segments;
  Require(seg_len >= 2, "trial too short for the requested number of segments");
  const Mat z = bank.filters * trial.leftCols(seg_len * bank.segments);
  Mat out(z.rows(), bank.segments);
  for (int s = 0; s < bank.segments; ++s) {
    const auto block = z.middleCols(s * seg_len, seg_len);
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      const double mean = block.row(r).mean();
      const double var = (block.row(r).array() - mean).square().sum() / static_cast<double>(seg_len);
      out(r, s) = std::log(std::max(var, bank.variance_floor));
    }
  }
  return out;
}

void FitFeatureNorm(CspBank &bank, const std::vector<Mat> &raw_features) {
  Require(!raw_features.empty(), "no features to fit normalisation on");
  const Eigen::Index rows = raw_features.front().rows();
  Vec sum = Vec::Zero(rows), sq = Vec::Zero(rows);
  double n = 0;
  for (const Mat &f : raw_features) {
    Require(f.rows() == rows, "inconsistent feature shapes");
    sum += f.rowwise().sum();
    sq += f.array().square().matrix().rowwise().sum();
    n += static_cast<double>(f.cols());
  }
  bank.feature_mean = sum / n;
  bank.feature_std =
      (sq / n - bank.feature_mean.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-8);
}

Mat NormalizeFeatures(const Mat &raw, const CspBank &bank) {
  Require(bank.feature_mean.size() == raw.rows(), "CSP bank has no feature normalisation");
  return ((raw.colwise() - bank.feature_mean).array().colwise() / bank.feature_std.array()).matrix();
}

Mat Embed(const Mat &trial, const CspBank &bank) {
  if (!trial.allFinite()) Fail(ErrorCode::kInvalidArgument, "trial contains non-finite values");
  return NormalizeFeatures(LogVarianceFeatures(trial, bank), bank);
}

}  // namespace neurotalk::embedding
