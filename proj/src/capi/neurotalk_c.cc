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

// capi/neurotalk_c.cc

#include "neurotalk/neurotalk.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "align/dtw.h"
#include "asr/cer.h"
#include "asr/ctc.h"
#include "common/error.h"
#include "common/log.h"
#include "dsp/spectral.h"
#include "pipeline/stages.h"

struct nt_session {
  std::unique_ptr<neurotalk::pipeline::Pipeline> pipeline;
  std::optional<neurotalk::pipeline::DirectoryLock> lock;
  std::string summary = "{}";
};

namespace {

using neurotalk::ErrorCode;

thread_local std::string g_last_error;

nt_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return NT_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return NT_CONFIG;
    case ErrorCode::kMissingArtifact: return NT_MISSING_ARTIFACT;
    case ErrorCode::kNumerical: return NT_NUMERICAL;
    case ErrorCode::kIo: return NT_IO;
    case ErrorCode::kFingerprintMismatch: return NT_FINGERPRINT;
  }
  return NT_INTERNAL;
}

template <typename F>
nt_status Guard(F &&body) {
  try {
    body();
    g_last_error.clear();
    return NT_OK;
  } catch (const neurotalk::Error &e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const nlohmann::json::exception &e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return NT_CONFIG;
  } catch (const std::filesystem::filesystem_error &e) {
    g_last_error = e.what();
    return NT_IO;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return NT_INTERNAL;
  }
}

void Copy(const std::string &s, char *buf, std::size_t len) {
  if (s.size() + 1 > len) neurotalk::Fail(ErrorCode::kInvalidArgument, "output buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

nt_status Open(neurotalk::pipeline::RunConfig config, const char *output_dir, int force, nt_session **out) {
  return Guard([&] {
    if (!out) neurotalk::Fail(ErrorCode::kInvalidArgument, "null session pointer");
    *out = nullptr;
    if (output_dir && *output_dir) config.output_dir = output_dir;
    auto s = std::make_unique<nt_session>();
    s->pipeline = std::make_unique<neurotalk::pipeline::Pipeline>(std::move(config), force != 0);
    *out = s.release();
  });
}

}  // namespace

extern "C" {

const char *nt_version(void) { return "0.1.0"; }

const char *nt_last_error(void) { return g_last_error.c_str(); }

void nt_set_log_level(int level) {
  if (level < 0) level = 0;
  if (level > 4) level = 4;
  neurotalk::SetLogLevel(static_cast<neurotalk::LogLevel>(level));
}

nt_status nt_session_open(const char *config_path, const char *output_dir, int force, nt_session **out) {
  neurotalk::pipeline::RunConfig config;
  const nt_status st = Guard([&] {
    if (!config_path) neurotalk::Fail(ErrorCode::kConfig, "no config path given");
    config = neurotalk::pipeline::LoadRunConfig(config_path);
  });
  if (st != NT_OK) return st;
  return Open(std::move(config), output_dir, force, out);
}

nt_status nt_session_open_json(const char *config_json, const char *output_dir, int force, nt_session **out) {
  neurotalk::pipeline::RunConfig config;
  const nt_status st = Guard([&] {
    if (!config_json) neurotalk::Fail(ErrorCode::kConfig, "no config document given");
    config = neurotalk::pipeline::ParseRunConfig(nlohmann::json::parse(config_json));
  });
  if (st != NT_OK) return st;
  return Open(std::move(config), output_dir, force, out);
}

void nt_session_close(nt_session *session) { delete session; }

nt_status nt_session_lock(nt_session *session) {
  return Guard([&] {
    if (!session) neurotalk::Fail(ErrorCode::kInvalidArgument, "null session");
    if (!session->lock) session->lock.emplace(session->pipeline->config().output_dir);
  });
}

nt_status nt_run_stage(nt_session *session, const char *stage) {
  return Guard([&] {
    if (!session || !stage) neurotalk::Fail(ErrorCode::kInvalidArgument, "null session or stage");
    const auto outcome = session->pipeline->Run(stage);
    session->summary = nlohmann::json{{"stage", outcome.stage},
                                      {"fingerprint", outcome.fingerprint},
                                      {"dir", outcome.dir.string()},
                                      {"reused", outcome.reused},
                                      {"summary", outcome.summary}}
                           .dump();
  });
}

const char *nt_session_summary(const nt_session *session) { return session ? session->summary.c_str() : "{}"; }

nt_status nt_stage_dir(nt_session *session, const char *stage, char *buf, size_t len) {
  return Guard([&] {
    if (!session || !stage || !buf) neurotalk::Fail(ErrorCode::kInvalidArgument, "null argument");
    Copy(session->pipeline->StageDir(stage).string(), buf, len);
  });
}

nt_status nt_infer(nt_session *session, const char *trial_id, const char *wave_path, nt_infer_result *out) {
  return Guard([&] {
    if (!session || !trial_id || !out) neurotalk::Fail(ErrorCode::kInvalidArgument, "null argument");
    const auto r = session->pipeline->Infer(trial_id, wave_path ? wave_path : "");
    Copy(r.transcript, out->transcript, sizeof(out->transcript));
    Copy(r.reference, out->reference, sizeof(out->reference));
    Copy(r.wave_path.string(), out->wave_path, sizeof(out->wave_path));
    out->cer = r.cer;
    out->rms_dbfs = r.rms_dbfs;
    session->summary = nlohmann::json{{"trial", r.trial_id},   {"transcript", r.transcript},
                                      {"reference", r.reference}, {"cer", r.cer},
                                      {"rms_dbfs", r.rms_dbfs},  {"wave", r.wave_path.string()}}
                           .dump();
  });
}

nt_status nt_cer(const char *reference, const char *hypothesis, double *out) {
  return Guard([&] {
    if (!reference || !hypothesis || !out) neurotalk::Fail(ErrorCode::kInvalidArgument, "null argument");
    *out = neurotalk::asr::Cer(reference, hypothesis);
  });
}

nt_status nt_dtw(const double *a, size_t na, const double *b, size_t nb, size_t dim, double *cost, size_t *path,
                 size_t path_capacity, size_t *path_len) {
  return Guard([&] {
    if (!a || !b || !cost || na == 0 || nb == 0 || dim == 0)
      neurotalk::Fail(ErrorCode::kInvalidArgument, "empty or null DTW input");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const neurotalk::Mat ma = Eigen::Map<const RowMajor>(a, static_cast<Eigen::Index>(na),
                                                         static_cast<Eigen::Index>(dim)).transpose();
    const neurotalk::Mat mb = Eigen::Map<const RowMajor>(b, static_cast<Eigen::Index>(nb),
                                                         static_cast<Eigen::Index>(dim)).transpose();
    const auto w = neurotalk::align::Dtw(ma, mb);
    *cost = w.cost;
    if (path_len) *path_len = w.pairs.size();
    if (path)
      for (std::size_t k = 0; k < w.pairs.size() && k < path_capacity; ++k) {
        path[2 * k] = static_cast<size_t>(w.pairs[k].first);
        path[2 * k + 1] = static_cast<size_t>(w.pairs[k].second);
      }
  });
}

nt_status nt_ctc_loss(const double *log_probs, size_t steps, size_t symbols, const int *target, size_t target_len,
                      int blank, double *loss, double *grad) {
  return Guard([&] {
    if (!log_probs || !loss || (target_len > 0 && !target) || steps == 0 || symbols == 0)
      neurotalk::Fail(ErrorCode::kInvalidArgument, "empty or null CTC input");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const neurotalk::Mat lp = Eigen::Map<const RowMajor>(log_probs, static_cast<Eigen::Index>(steps),
                                                         static_cast<Eigen::Index>(symbols)).transpose();
    const std::vector<int> tgt(target, target + target_len);
    const auto r = neurotalk::asr::CtcLoss(lp, tgt, blank, grad != nullptr);
    *loss = r.loss;
    if (grad) {
      Eigen::Map<RowMajor>(grad, static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(symbols)) =
          r.grad.transpose();
    }
  });
}

nt_status nt_mel_spectrogram(const double *wave, size_t samples, double *out, size_t capacity, size_t *mels,
                             size_t *frames) {
  return Guard([&] {
    if (!wave || samples == 0 || !mels || !frames) neurotalk::Fail(ErrorCode::kInvalidArgument, "null argument");
    const neurotalk::dsp::StftConfig config;
    const neurotalk::Mat m = neurotalk::dsp::LogMel(std::span<const double>(wave, samples), config);
    *mels = static_cast<size_t>(m.rows());
    *frames = static_cast<size_t>(m.cols());
    if (!out) return;
    if (capacity < static_cast<size_t>(m.size())) neurotalk::Fail(ErrorCode::kInvalidArgument, "output buffer too small");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor>(out, m.rows(), m.cols()) = m;
  });
}

}  // extern "C"
