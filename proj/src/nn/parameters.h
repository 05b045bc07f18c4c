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

// nn/parameters.h

#ifndef NEUROTALK_NN_PARAMETERS_H_
#define NEUROTALK_NN_PARAMETERS_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "common/rng.h"
#include "common/types.h"

namespace neurotalk::nn {

struct Parameter {
  std::string name;
  Mat value;
  Mat grad;
};

// Owns every trainable tensor of a network. Pointers handed out by Add stay
// valid for the lifetime of the set.
class ParameterSet {
 public:
  Parameter *Add(const std::string &name, Eigen::Index rows, Eigen::Index cols);

  const std::vector<std::unique_ptr<Parameter>> &all() const { return params_; }
  Parameter *Find(const std::string &name) const;
  void ZeroGrad();
  std::size_t Count() const;  // scalar parameters
  bool AllFinite() const;

  // Copies values (not gradients) from a set with identical layout.
  void CopyValuesFrom(const ParameterSet &other);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

void InitNormal(Parameter &p, double stddev, Rng &rng);
void InitXavierUniform(Parameter &p, Eigen::Index fan_in, Eigen::Index fan_out, Rng &rng);
// Each of the `blocks` stacked square blocks becomes an orthogonal matrix.
void InitOrthogonalBlocks(Parameter &p, int blocks, Rng &rng);

}  // namespace neurotalk::nn

#endif  // NEUROTALK_NN_PARAMETERS_H_
