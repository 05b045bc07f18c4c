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

// nn/layers.cc

#include "nn/layers.h"

#include <cmath>

#include "common/error.h"

namespace neurotalk::nn {

ConvSpec ConvSpec::Same(int in, int out, int kernel, int dilation) {
  const int total = dilation * (kernel - 1);
  return {in, out, kernel, 1, dilation, total / 2, total - total / 2};
}

ConvSpec ConvSpec::CeilStrided(int in, int out, int kernel, int stride, int in_len) {
  const int out_len = (in_len + stride - 1) / stride;
  const int total = std::max(0, (out_len - 1) * stride + kernel - in_len);
  return {in, out, kernel, stride, 1, total / 2, total - total / 2};
}

Conv1d::Conv1d(ParameterSet &params, const std::string &name, const ConvSpec &spec)
    : spec_(spec) {
  Require(spec.in > 0 && spec.out > 0 && spec.kernel > 0 && spec.stride > 0 && spec.dilation > 0,
          "invalid convolution geometry for " + name);
  w_ = params.Add(name + ".weight", spec.out, static_cast<Eigen::Index>(spec.kernel) * spec.in);
  b_ = params.Add(name + ".bias", spec.out, 1);
}

Eigen::Index Conv1d::OutLength(Eigen::Index len) const {
  const Eigen::Index span = static_cast<Eigen::Index>(spec_.dilation) * (spec_.kernel - 1) + 1;
  const Eigen::Index padded = len + spec_.pad_left + spec_.pad_right;
  if (padded < span) return 0;
  return (padded - span) / spec_.stride + 1;
}

Mat Conv1d::Forward(const Mat &x, Cache *cache) const {
  Require(x.rows() == spec_.in, "convolution input has wrong channel count");
  const Eigen::Index len = x.cols();
  const Eigen::Index out_len = OutLength(len);
  Require(out_len > 0, "convolution input too short");
  const Eigen::Index in = spec_.in;
  Mat cols = Mat::Zero(in * spec_.kernel, out_len);
  for (Eigen::Index t = 0; t < out_len; ++t) {
    for (int j = 0; j < spec_.kernel; ++j) {
      const Eigen::Index src = t * spec_.stride + static_cast<Eigen::Index>(j) * spec_.dilation - spec_.pad_left;
      if (src >= 0 && src < len) cols.block(j * in, t, in, 1) = x.col(src);
    }
  }
  Mat y = w_->value * cols;
  y.colwise() += b_->value.col(0);
  if (cache) {
    cache->cols = std::move(cols);
    cache->in_len = len;
  }
  return y;
}

Mat Conv1d::Backward(const Mat &dy, const Cache &cache, bool param_grads) const {
  const Eigen::Index in = spec_.in;
  if (param_grads) {
    w_->grad.noalias() += dy * cache.cols.transpose();
    b_->grad.col(0) += dy.rowwise().sum();
  }
  const Mat dcols = w_->value.transpose() * dy;
  Mat dx = Mat::Zero(in, cache.in_len);
  for (Eigen::Index t = 0; t < dy.cols(); ++t) {
    for (int j = 0; j < spec_.kernel; ++j) {
      const Eigen::Index src = t * spec_.stride + static_cast<Eigen::Index>(j) * spec_.dilation - spec_.pad_left;
      if (src >= 0 && src < cache.in_len) dx.col(src) += dcols.block(j * in, t, in, 1);
    }
  }
  return dx;
}

ConvTranspose1d::ConvTranspose1d(ParameterSet &params, const std::string &name, int in, int out,
                                 int kernel, int stride)
    : in_(in), out_(out), kernel_(kernel), stride_(stride), crop_((kernel - stride) / 2) {
  Require(kernel >= stride && stride > 0 && in > 0 && out > 0,
          "invalid transposed convolution geometry for " + name);
  w_ = params.Add(name + ".weight", static_cast<Eigen::Index>(kernel) * out, in);
  b_ = params.Add(name + ".bias", out, 1);
}

Mat ConvTranspose1d::Forward(const Mat &x, Cache *cache) const {
  Require(x.rows() == in_, "transposed convolution input has wrong channel count");
  const Eigen::Index len = x.cols();
  const Eigen::Index full = (len - 1) * stride_ + kernel_;
  const Mat z = w_->value * x;
  Mat y = Mat::Zero(out_, full);
  for (Eigen::Index t = 0; t < len; ++t)
    for (int j = 0; j < kernel_; ++j) y.col(t * stride_ + j) += z.block(j * out_, t, out_, 1);
  Mat out = y.middleCols(crop_, len * stride_);
  out.colwise() += b_->value.col(0);
  if (cache) cache->x = x;
  return out;
}

Mat ConvTranspose1d::Backward(const Mat &dy, const Cache &cache, bool param_grads) const {
  const Eigen::Index len = cache.x.cols();
  const Eigen::Index full = (len - 1) * stride_ + kernel_;
  Mat dfull = Mat::Zero(out_, full);
  dfull.middleCols(crop_, len * stride_) = dy;
  Mat dz(static_cast<Eigen::Index>(kernel_) * out_, len);
  for (Eigen::Index t = 0; t < len; ++t)
    for (int j = 0; j < kernel_; ++j) dz.block(j * out_, t, out_, 1) = dfull.col(t * stride_ + j);
  if (param_grads) {
    w_->grad.noalias() += dz * cache.x.transpose();
    b_->grad.col(0) += dy.rowwise().sum();
  }
  return w_->value.transpose() * dz;
}

Mat LeakyRelu(const Mat &x, double slope) {
  return x.unaryExpr([slope](double v) { return v >= 0 ? v : slope * v; });
}

Mat LeakyReluBackward(const Mat &dy, const Mat &x, double slope) {
  return dy.binaryExpr(x, [slope](double g, double v) { return v >= 0 ? g : slope * g; });
}

namespace {
inline double Sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
}  // namespace

Gru::Gru(ParameterSet &params, const std::string &name, int input, int hidden, bool reverse)
    : input_(input), hidden_(hidden), reverse_(reverse) {
  wi_ = params.Add(name + ".weight_ih", 3 * hidden, input);
  wh_ = params.Add(name + ".weight_hh", 3 * hidden, hidden);
  bi_ = params.Add(name + ".bias_ih", 3 * hidden, 1);
  bh_ = params.Add(name + ".bias_hh", 3 * hidden, 1);
}

void Gru::Init(Rng &rng) {
  InitXavierUniform(*wi_, input_, hidden_, rng);
  InitOrthogonalBlocks(*wh_, 3, rng);
  bi_->value.setZero();
  bh_->value.setZero();
}

Mat Gru::Forward(const Mat &x, Cache *cache) const {
  Require(x.rows() == input_, "GRU input has wrong feature count");
  const Eigen::Index steps = x.cols();
  const Eigen::Index h = hidden_;
  Mat gx = wi_->value * x;
  gx.colwise() += bi_->value.col(0);
  Mat out(h, steps);
  Mat r(h, steps), z(h, steps), n(h, steps), hn(h, steps), hprev(h, steps);
  Vec state = Vec::Zero(h);
  Vec gh(3 * h);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const Eigen::Index t = reverse_ ? steps - 1 - k : k;
    gh.noalias() = wh_->value * state;
    gh += bh_->value.col(0);
    for (Eigen::Index i = 0; i < h; ++i) {
      const double rv = Sigmoid(gx(i, t) + gh(i));
      const double zv = Sigmoid(gx(h + i, t) + gh(h + i));
      const double nv = std::tanh(gx(2 * h + i, t) + rv * gh(2 * h + i));
      r(i, t) = rv;
      z(i, t) = zv;
      n(i, t) = nv;
      hn(i, t) = gh(2 * h + i);
      hprev(i, t) = state(i);
      state(i) = (1.0 - zv) * nv + zv * state(i);
    }
    out.col(t) = state;
  }
  if (cache) {
    cache->x = x;
    cache->r = std::move(r);
    cache->z = std::move(z);
    cache->n = std::move(n);
    cache->hn = std::move(hn);
    cache->hprev = std::move(hprev);
  }
  return out;
}

Mat Gru::Backward(const Mat &dh_out, const Cache &c, bool param_grads) const {
  const Eigen::Index steps = c.x.cols();
  const Eigen::Index h = hidden_;
  Mat dgx(3 * h, steps);
  Vec dnext = Vec::Zero(h);
  Vec dgh(3 * h);
  Mat dwh = Mat::Zero(3 * h, h);
  Vec dbh = Vec::Zero(3 * h);
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const Eigen::Index t = reverse_ ? steps - 1 - k : k;
    for (Eigen::Index i = 0; i < h; ++i) {
      const double dh = dh_out(i, t) + dnext(i);
      const double rv = c.r(i, t), zv = c.z(i, t), nv = c.n(i, t);
      const double dn = dh * (1.0 - zv);
      const double dz = dh * (c.hprev(i, t) - nv);
      dnext(i) = dh * zv;
      const double dn_pre = dn * (1.0 - nv * nv);
      const double dr_pre = dn_pre * c.hn(i, t) * rv * (1.0 - rv);
      const double dz_pre = dz * zv * (1.0 - zv);
      dgx(i, t) = dr_pre;
      dgx(h + i, t) = dz_pre;
      dgx(2 * h + i, t) = dn_pre;
      dgh(i) = dr_pre;
      dgh(h + i) = dz_pre;
      dgh(2 * h + i) = dn_pre * rv;
    }
    if (param_grads) {
      dwh.noalias() += dgh * c.hprev.col(t).transpose();
      dbh += dgh;
    }
    dnext.noalias() += wh_->value.transpose() * dgh;
  }
  if (param_grads) {
    wh_->grad += dwh;
    bh_->grad.col(0) += dbh;
    wi_->grad.noalias() += dgx * c.x.transpose();
    bi_->grad.col(0) += dgx.rowwise().sum();
  }
  return wi_->value.transpose() * dgx;
}

BiGru::BiGru(ParameterSet &params, const std::string &name, int input, int hidden)
    : fwd_(params, name + ".fwd", input, hidden, false),
      bwd_(params, name + ".bwd", input, hidden, true),
      hidden_(hidden) {}

void BiGru::Init(Rng &rng) {
  fwd_.Init(rng);
  bwd_.Init(rng);
}

Mat BiGru::Forward(const Mat &x, Cache *cache) const {
  Mat out(2 * hidden_, x.cols());
  out.topRows(hidden_) = fwd_.Forward(x, cache ? &cache->fwd : nullptr);
  out.bottomRows(hidden_) = bwd_.Forward(x, cache ? &cache->bwd : nullptr);
  return out;
}

Mat BiGru::Backward(const Mat &dy, const Cache &cache, bool param_grads) const {
  return fwd_.Backward(dy.topRows(hidden_), cache.fwd, param_grads) +
         bwd_.Backward(dy.bottomRows(hidden_), cache.bwd, param_grads);
}

SequenceLayer::SequenceLayer(ParameterSet &params, const std::string &name, int input,
                             int hidden, bool recurrent)
    : recurrent_(recurrent) {
  if (recurrent) gru_ = BiGru(params, name + ".gru", input, hidden);
  else pointwise_ = Conv1d(params, name + ".pointwise", ConvSpec::Same(input, 2 * hidden, 1));
}

void SequenceLayer::Init(Rng &rng, double conv_std) {
  if (recurrent_) {
    gru_.Init(rng);
  } else {
    InitNormal(*pointwise_.weight(), conv_std, rng);
    pointwise_.bias()->value.setZero();
  }
}

Mat SequenceLayer::Forward(const Mat &x, Cache *cache) const {
  return recurrent_ ? gru_.Forward(x, cache ? &cache->gru : nullptr)
                    : pointwise_.Forward(x, cache ? &cache->conv : nullptr);
}

Mat SequenceLayer::Backward(const Mat &dy, const Cache &cache, bool param_grads) const {
  return recurrent_ ? gru_.Backward(dy, cache.gru, param_grads)
                    : pointwise_.Backward(dy, cache.conv, param_grads);
}

Mrf::Mrf(ParameterSet &params, const std::string &name, const MrfSpec &spec) : spec_(spec) {
  Require(!spec.kernels.empty() && !spec.dilations.empty(), "MRF needs kernels and dilations");
  for (std::size_t b = 0; b < spec.kernels.size(); ++b) {
    std::vector<Conv1d> chain;
    for (std::size_t d = 0; d < spec.dilations.size(); ++d)
      chain.emplace_back(params, name + ".b" + std::to_string(b) + ".d" + std::to_string(d),
                         ConvSpec::Same(spec.channels, spec.channels, spec.kernels[b], spec.dilations[d]));
    convs_.push_back(std::move(chain));
  }
}

Mat Mrf::Forward(const Mat &x, Cache *cache) const {
  const std::size_t branches = convs_.size();
  if (cache) {
    cache->unit_inputs.assign(branches, {});
    cache->convs.assign(branches, {});
  }
  Mat sum = Mat::Zero(x.rows(), x.cols());
  for (std::size_t b = 0; b < branches; ++b) {
    Mat h = x;
    for (const Conv1d &conv : convs_[b]) {
      Conv1d::Cache cc;
      Mat delta = conv.Forward(LeakyRelu(h, spec_.slope), cache ? &cc : nullptr);
      if (cache) {
        cache->unit_inputs[b].push_back(h);
        cache->convs[b].push_back(std::move(cc));
      }
      h += delta;
    }
    sum += h;
  }
  return sum / static_cast<double>(branches);
}

Mat Mrf::Backward(const Mat &dy, const Cache &cache, bool param_grads) const {
  const std::size_t branches = convs_.size();
  Mat dx = Mat::Zero(dy.rows(), dy.cols());
  for (std::size_t b = 0; b < branches; ++b) {
    Mat d = dy / static_cast<double>(branches);
    for (std::size_t u = convs_[b].size(); u-- > 0;) {
      const Mat &in = cache.unit_inputs[b][u];
      const Mat dact = convs_[b][u].Backward(d, cache.convs[b][u], param_grads);
      d += LeakyReluBackward(dact, in, spec_.slope);
    }
    dx += d;
  }
  return dx;
}

}  // namespace neurotalk::nn
