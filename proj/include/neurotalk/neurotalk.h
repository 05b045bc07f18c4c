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

/* neurotalk/neurotalk.h
 *
 * C interface to the neurotalk pipeline. All handles are opaque; every
 * function returns an nt_status and, on failure, leaves a message that
 * nt_last_error() returns for the calling thread.
 */

#ifndef NEUROTALK_NEUROTALK_H_
#define NEUROTALK_NEUROTALK_H_

#include <stddef.h>

#if defined(_WIN32)
#define NT_API __declspec(dllexport)
#else
#define NT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nt_status {
  NT_OK = 0,
  NT_INVALID_ARGUMENT = 1,
  NT_CONFIG = 2,
  NT_MISSING_ARTIFACT = 3,
  NT_NUMERICAL = 4,
  NT_IO = 5,
  NT_FINGERPRINT = 6,
  NT_INTERNAL = 7
} nt_status;

typedef struct nt_session nt_session;

typedef struct nt_infer_result {
  char transcript[256];
  char reference[256];
  double cer;
  double rms_dbfs;
  char wave_path[1024];
} nt_infer_result;

NT_API const char *nt_version(void);

/* 0 debug, 1 info (default), 2 warning, 3 error, 4 silent; logs go to stderr. */
NT_API void nt_set_log_level(int level);

/* Message for the last failed call on this thread; never NULL. */
NT_API const char *nt_last_error(void);

/* Opens a session from a JSON config file. output_dir overrides the
 * configured output directory when non-NULL and non-empty. */
NT_API nt_status nt_session_open(const char *config_path, const char *output_dir, int force, nt_session **out);

/* Same as nt_session_open but takes the config document as a string. */
NT_API nt_status nt_session_open_json(const char *config_json, const char *output_dir, int force, nt_session **out);

NT_API void nt_session_close(nt_session *session);

/* Holds an exclusive lock on the output directory until the session closes. */
NT_API nt_status nt_session_lock(nt_session *session);

/* Runs one stage ("corpus", "preprocess", "fit-csp", "train-asr",
 * "train-spoken", "adapt", "loo", "evaluate", "ablate"). */
NT_API nt_status nt_run_stage(nt_session *session, const char *stage);

/* JSON summary of the last stage run (or reused) by this session. The
 * pointer stays valid until the next call on the session. */
NT_API const char *nt_session_summary(const nt_session *session);

/* Directory holding the artifacts of a stage under the session config. */
NT_API nt_status nt_stage_dir(nt_session *session, const char *stage, char *buf, size_t len);

/* Synthesizes one trial to a wave file; wave_path may be NULL for the
 * default location under the output directory. */
NT_API nt_status nt_infer(nt_session *session, const char *trial_id, const char *wave_path, nt_infer_result *out);

/* Character error rate in percent. */
NT_API nt_status nt_cer(const char *reference, const char *hypothesis, double *out);

/* DTW between row-major sequences a (na x dim) and b (nb x dim) under the
 * Euclidean frame distance. path receives up to path_capacity (i, j)
 * pairs; path_len receives the full path length. */
NT_API nt_status nt_dtw(const double *a, size_t na, const double *b, size_t nb, size_t dim, double *cost,
                        size_t *path, size_t path_capacity, size_t *path_len);

/* CTC negative log-likelihood of target under log_probs given row-major
 * as steps x symbols. grad (same shape) may be NULL. */
NT_API nt_status nt_ctc_loss(const double *log_probs, size_t steps, size_t symbols, const int *target,
                             size_t target_len, int blank, double *loss, double *grad);

/* Log-mel spectrogram of a mono waveform at the default STFT settings,
 * written row-major as mels x frames. With out NULL only the shape is
 * reported. */
NT_API nt_status nt_mel_spectrogram(const double *wave, size_t samples, double *out, size_t capacity,
                                    size_t *mels, size_t *frames);

#ifdef __cplusplus
}
#endif

#endif /* NEUROTALK_NEUROTALK_H_ */
