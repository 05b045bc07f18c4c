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

// eval/evaluate.cc

#include "eval/evaluate.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>

#include "align/dtw.h"
#include "asr/cer.h"
#include "common/error.h"
#include "common/rng.h"
#include "corpus/classes.h"
#include "eval/metrics.h"

namespace neurotalk::eval {

const char *AsrRouteName(AsrRoute route) { return route == AsrRoute::kVocoder ? "vocoder" : "direct"; }

AsrRoute ParseAsrRoute(const std::string &name) {
  if (name == "vocoder") return AsrRoute::kVocoder;
  if (name == "direct") return AsrRoute::kDirect;
  Fail(ErrorCode::kConfig, "unknown asr route: " + name);
}

const ConditionRow *EvalReport::Row(const std::string &condition) const {
  for (const auto &r : rows)
    if (r.condition == condition) return &r;
  return nullptr;
}

std::string Recognize(const Mat &gen_mel, const asr::Recognizer &asr, const EvalOptions &options) {
  if (options.route == AsrRoute::kDirect) return asr.Transcribe(gen_mel);
  if (!options.norm) Fail(ErrorCode::kInvalidArgument, "vocoder route needs mel normalisation statistics");
  dsp::MelSpectrogram mel;
  mel.values = gen_mel;
  mel.hop = options.vocoder.stft.hop;
  mel.sample_rate = options.vocoder.stft.sample_rate;
  mel.norm = options.norm;
  const std::vector<double> wave = vocoder::MelToWaveform(mel, options.vocoder);
  return asr.Transcribe(dsp::ComputeMelSpectrogram(wave, options.vocoder.stft, *options.norm).values);
}

TrialRecord EvaluateTrial(const EvalItem &e, const model::Generator &gen, const asr::Recognizer &asr,
                          const EvalOptions &options) {
  const train::TrainItem &it = e.item;
  const Mat out = gen.Forward(it.embedding, nullptr);
  const Mat target = align::WarpTo(static_cast<int>(out.cols()), it.target, align::Dtw(out, it.target));
  TrialRecord r;
  r.id = it.id;
  r.subject = it.subject;
  r.class_index = it.class_index;
  r.condition = e.condition;
  r.rmse = MelRmse(out, target);
  r.reference = it.text;
  r.hypothesis = Recognize(out, asr, options);
  r.cer = asr::Cer(r.reference, r.hypothesis);
  return r;
}

double ShuffleCer(const std::vector<const TrialRecord *> &records,
                  const std::vector<const TrialRecord *> &pool, int permutations, std::uint64_t seed) {
  if (records.empty() || pool.size() < 2 || permutations < 1) return 0.0;
  Rng rng(seed);
  std::vector<std::size_t> perm(pool.size());
  double total = 0.0;
  for (int p = 0; p < permutations; ++p) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < records.size(); ++i)
      total += asr::Cer(records[i]->reference, pool[perm[i % pool.size()]]->hypothesis);
  }
  return total / (static_cast<double>(permutations) * static_cast<double>(records.size()));
}

std::string ConditionDomain(const std::string &condition) {
  return condition.find("imagined") != std::string::npos ? "imagined" : "spoken";
}

namespace {

void MeanStd(const std::vector<double> &v, double &mean, double &stddev) {
  mean = stddev = 0.0;
  if (v.empty()) return;
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<ConditionRow> Aggregate(const std::vector<TrialRecord> &records, int shuffle_permutations,
                                    std::uint64_t seed) {
  std::vector<ConditionRow> rows;
  for (std::size_t ci = 0; ci < kConditions.size(); ++ci) {
    const std::string &cond = kConditions[ci];
    std::vector<const TrialRecord *> subset, pool;
    for (const auto &r : records) {
      if (r.condition == cond) subset.push_back(&r);
      if (ConditionDomain(r.condition) == ConditionDomain(cond)) pool.push_back(&r);
    }
    if (subset.empty()) continue;
    ConditionRow row;
    row.condition = cond;
    row.trials = static_cast<int>(subset.size());
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_subject;
    for (const TrialRecord *r : subset) {
      by_subject[r->subject].first.push_back(r->rmse);
      by_subject[r->subject].second.push_back(r->cer);
      if (r->class_index == corpus::SilenceClass()) {
        ++row.silence_trials;
        if (r->hypothesis.empty()) ++row.silence_empty;
      }
    }
    std::vector<double> rmse_means, cer_means;
    for (const auto &[subject, vals] : by_subject) {
      rmse_means.push_back(std::accumulate(vals.first.begin(), vals.first.end(), 0.0) / vals.first.size());
      cer_means.push_back(std::accumulate(vals.second.begin(), vals.second.end(), 0.0) / vals.second.size());
    }
    row.subjects = static_cast<int>(by_subject.size());
    MeanStd(rmse_means, row.rmse_mean, row.rmse_std);
    MeanStd(cer_means, row.cer_mean, row.cer_std);
    row.shuffle_cer = ShuffleCer(subset, pool, shuffle_permutations, DeriveSeed(seed, {ci}));
    rows.push_back(row);
  }
  return rows;
}

void WriteTable(std::ostream &out, const EvalReport &report) {
  out << "condition\ttrials\tsubjects\trmse_mean\trmse_std\tcer_mean\tcer_std\tshuffle_cer\tsilence_empty\n";
  out << std::fixed;
  for (const auto &r : report.rows) {
    out << r.condition << '\t' << r.trials << '\t' << r.subjects << '\t' << std::setprecision(4) << r.rmse_mean
        << '\t' << r.rmse_std << '\t' << std::setprecision(2) << r.cer_mean << '\t' << r.cer_std << '\t'
        << r.shuffle_cer << '\t' << r.silence_empty << '/' << r.silence_trials << '\n';
  }
}

}  // namespace neurotalk::eval
