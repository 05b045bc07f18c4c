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

// embedding/csp.h

#ifndef NEUROTALK_EMBEDDING_CSP_H_
#define NEUROTALK_EMBEDDING_CSP_H_

#include <string>
#include <vector>

#include "common/types.h"

namespace neurotalk::embedding {

struct CspConfig {
  int filters_per_class = 8;  // half from each end of the eigenvalue spectrum
  double shrinkage = 0.05;
  int segments = 16;
  double variance_floor = 1e-12;
};

// One-vs-rest spatial filters for every class, stacked in class order, plus
// the z-score statistics of the log-variance features they produce.
struct CspBank {
  Mat filters;  // (classes * filters_per_class) x channels
  std::vector<std::string> class_order;
  std::string trained_on;  // condition name of the fitting data
  int filters_per_class = 8;
  int segments = 16;
  double variance_floor = 1e-12;
  Vec feature_mean;  // per filter row
  Vec feature_std;

  int NumFeatures() const { return static_cast<int>(filters.rows()); }
  std::string Hash() const;
};

// Trace-normalised spatial covariance X X^T / tr(X X^T).
Mat TrialCovariance(const Mat &trial);

// Accumulates per-class covariance sums so that trials need not be held in
// memory while fitting.
class CspFitter {
 public:
  CspFitter(int num_classes, int channels, CspConfig config = {});

  void Add(const Mat &trial, int class_index);
  void AddCovariance(const Mat &covariance, int class_index);

  // Filters only; feature statistics are left empty (see FitFeatureNorm).
  CspBank Fit(const std::vector<std::string> &class_order, const std::string &trained_on) const;

 private:
  CspConfig config_;
  int channels_;
  std::vector<Mat> sums_;
  std::vector<int> counts_;
};

// Log-variance features before normalisation: features x segments.
Mat LogVarianceFeatures(const Mat &trial, const CspBank &bank);

// Per-row mean/std over a set of raw feature matrices.
void FitFeatureNorm(CspBank &bank, const std::vector<Mat> &raw_features);

Mat NormalizeFeatures(const Mat &raw, const CspBank &bank);

// The generator input: z-scored log-variance features (features x segments).
Mat Embed(const Mat &trial, const CspBank &bank);

}  // namespace neurotalk::embedding

#endif  // NEUROTALK_EMBEDDING_CSP_H_
