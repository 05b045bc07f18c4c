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

// nn/layers.h
//
// Layers with explicit forward/backward passes over (channels x time)
// matrices. Forward takes an optional cache; Backward consumes it, returns the
// input gradient and, unless told otherwise, accumulates parameter gradients.

#ifndef NEUROTALK_NN_LAYERS_H_
#define NEUROTALK_NN_LAYERS_H_

#include <string>
#include <vector>

#include "common/rng.h"
#include "common/types.h"
#include "nn/parameters.h"

namespace neurotalk::nn {

struct ConvSpec {
  int in = 1;
  int out = 1;
  int kernel = 1;
  int stride = 1;
  int dilation = 1;
  int pad_left = 0;
  int pad_right = 0;

  // Length-preserving padding for stride 1.
  static ConvSpec Same(int in, int out, int kernel, int dilation = 1);
  // Stride-s convolution whose output length is ceil(L / s) for input length L.
  static ConvSpec CeilStrided(int in, int out, int kernel, int stride, int in_len);
};

class Conv1d {
 public:
  struct Cache {
    Mat cols;
    Eigen::Index in_len = 0;
  };

  Conv1d() = default;
  Conv1d(ParameterSet &params, const std::string &name, const ConvSpec &spec);

  Mat Forward(const Mat &x, Cache *cache) const;
  Mat Backward(const Mat &dy, const Cache &cache, bool param_grads = true) const;
  Eigen::Index OutLength(Eigen::Index len) const;

  const ConvSpec &spec() const { return spec_; }
  Parameter *weight() const { return w_; }  // out x (kernel * in), tap-major
  Parameter *bias() const { return b_; }

 private:
  ConvSpec spec_;
  Parameter *w_ = nullptr;
  Parameter *b_ = nullptr;
};

// Transposed convolution producing exactly stride * L output samples; the
// full (L - 1) * stride + kernel output is cropped by (kernel - stride) / 2 on
// the left.
class ConvTranspose1d {
 public:
  struct Cache {
    Mat x;
  };

  ConvTranspose1d() = default;
  ConvTranspose1d(ParameterSet &params, const std::string &name, int in, int out, int kernel,
                  int stride);

  Mat Forward(const Mat &x, Cache *cache) const;
  Mat Backward(const Mat &dy, const Cache &cache, bool param_grads = true) const;

  Parameter *weight() const { return w_; }  // (kernel * out) x in
  Parameter *bias() const { return b_; }
  int stride() const { return stride_; }

 private:
  int in_ = 1, out_ = 1, kernel_ = 1, stride_ = 1, crop_ = 0;
  Parameter *w_ = nullptr;
  Parameter *b_ = nullptr;
};

Mat LeakyRelu(const Mat &x, double slope);
Mat LeakyReluBackward(const Mat &dy, const Mat &x, double slope);

// Single-direction GRU with PyTorch gate layout (reset, update, new).
class Gru {
 public:
  struct Cache {
    Mat x, r, z, n, hn, hprev;
  };

  Gru() = default;
  Gru(ParameterSet &params, const std::string &name, int input, int hidden, bool reverse);

  Mat Forward(const Mat &x, Cache *cache) const;
  Mat Backward(const Mat &dh, const Cache &cache, bool param_grads = true) const;
  void Init(Rng &rng);

  int hidden() const { return hidden_; }

 private:
  int input_ = 0, hidden_ = 0;
  bool reverse_ = false;
  Parameter *wi_ = nullptr, *wh_ = nullptr, *bi_ = nullptr, *bh_ = nullptr;
};

class BiGru {
 public:
  struct Cache {
    Gru::Cache fwd, bwd;
  };

  BiGru() = default;
  BiGru(ParameterSet &params, const std::string &name, int input, int hidden);

  Mat Forward(const Mat &x, Cache *cache) const;  // (2 * hidden) x T
  Mat Backward(const Mat &dy, const Cache &cache, bool param_grads = true) const;
  void Init(Rng &rng);

 private:
  Gru fwd_, bwd_;
  int hidden_ = 0;
};

// Bidirectional GRU, or a kernel-1 convolution of the same output width when
// recurrence is ablated.
class SequenceLayer {
 public:
  struct Cache {
    BiGru::Cache gru;
    Conv1d::Cache conv;
  };

  SequenceLayer() = default;
  SequenceLayer(ParameterSet &params, const std::string &name, int input, int hidden,
                bool recurrent);

  Mat Forward(const Mat &x, Cache *cache) const;
  Mat Backward(const Mat &dy, const Cache &cache, bool param_grads = true) const;
  void Init(Rng &rng, double conv_std);
  bool recurrent() const { return recurrent_; }

 private:
  bool recurrent_ = true;
  BiGru gru_;
  Conv1d pointwise_;
};

struct MrfSpec {
  int channels = 1;
  std::vector<int> kernels{3, 7, 11};
  std::vector<int> dilations{1, 3, 5};
  double slope = 0.1;
};

// Multi-receptive-field fusion: one residual branch per kernel size, each a
// chain of dilated residual units x <- x + conv(lrelu(x)); branch outputs are
// averaged.
class Mrf {
 public:
  struct Cache {
    std::vector<std::vector<Mat>> unit_inputs;
    std::vector<std::vector<Conv1d::Cache>> convs;
  };

  Mrf() = default;
  Mrf(ParameterSet &params, const std::string &name, const MrfSpec &spec);

  Mat Forward(const Mat &x, Cache *cache) const;
  Mat Backward(const Mat &dy, const Cache &cache, bool param_grads = true) const;

  const std::vector<std::vector<Conv1d>> &convs() const { return convs_; }

 private:
  MrfSpec spec_;
  std::vector<std::vector<Conv1d>> convs_;
};

}  // namespace neurotalk::nn

#endif  // NEUROTALK_NN_LAYERS_H_
