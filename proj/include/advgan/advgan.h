// Copyright 2026 The advgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVGAN_ADVGAN_H
#define ADVGAN_ADVGAN_H

/* C interface to the advgan library. Every function returns an
 * advgan_status; on failure advgan_last_error() describes the cause. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with advgan_free_string(). */

#include <stddef.h>
#include <stdint.h>

#if defined(ADVGAN_BUILDING)
#define ADVGAN_API __attribute__((visibility("default")))
#else
#define ADVGAN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum advgan_status {
  ADVGAN_OK = 0,
  ADVGAN_PARTIAL = 1,       /* finished, but some inputs failed */
  ADVGAN_VERIFY_FAILED = 2, /* a verification suite ran and did not pass */
  ADVGAN_E_CONFIG = 10,
  ADVGAN_E_ARGUMENT = 11,
  ADVGAN_E_DIMENSION = 12,
  ADVGAN_E_FORMAT = 13,
  ADVGAN_E_IO = 14,
  ADVGAN_E_NUMERIC = 15,
  ADVGAN_E_CONTRACT = 16,
  ADVGAN_E_INTERNAL = 99
} advgan_status;

typedef enum advgan_log_level {
  ADVGAN_LOG_ERROR = 0,
  ADVGAN_LOG_INFO = 1,
  ADVGAN_LOG_DEBUG = 2
} advgan_log_level;

typedef struct advgan_config advgan_config;
typedef struct advgan_model advgan_model;

ADVGAN_API const char* advgan_version(void);
/* Message of the last failure on the calling thread; empty if none. */
ADVGAN_API const char* advgan_last_error(void);
ADVGAN_API const char* advgan_status_name(advgan_status status);
ADVGAN_API void advgan_free_string(char* s);
ADVGAN_API void advgan_set_log_level(advgan_log_level level);

/* Training configuration: key=value entries, later entries win. */
ADVGAN_API advgan_status advgan_config_create(advgan_config** out);
ADVGAN_API void advgan_config_destroy(advgan_config* cfg);
ADVGAN_API advgan_status advgan_config_set(advgan_config* cfg, const char* key, const char* value);
ADVGAN_API advgan_status advgan_config_load_file(advgan_config* cfg, const char* path);
/* Fully resolved configuration as key=value lines. */
ADVGAN_API advgan_status advgan_config_resolve(const advgan_config* cfg, char** text_out);

/* Analyzes every file below wav_dir into a corpus directory. Returns
 * ADVGAN_PARTIAL when some files were skipped; *failures (optional)
 * receives their count and *report_out (optional) one "path: reason" line
 * per failure. */
ADVGAN_API advgan_status advgan_extract(const char* wav_dir, const char* corpus_dir,
                                        size_t* failures, char** report_out);

/* Writes the synthetic corpora to <out_dir>/x and <out_dir>/y. */
ADVGAN_API advgan_status advgan_synthgen(const char* out_dir, uint64_t seed);

/* Trains on two corpus directories, writing into run_dir. With a non-null
 * resume_checkpoint, the run continues from that checkpoint; cfg may then
 * only change iterations and checkpoint_every. */
ADVGAN_API advgan_status advgan_train(const advgan_config* cfg, const char* x_dir,
                                      const char* y_dir, const char* run_dir,
                                      const char* resume_checkpoint);

ADVGAN_API advgan_status advgan_model_load(const char* checkpoint, advgan_model** out);
ADVGAN_API void advgan_model_destroy(advgan_model* model);
ADVGAN_API advgan_status advgan_model_iteration(const advgan_model* model, uint64_t* out);

/* direction is "xy" or "yx". */
ADVGAN_API advgan_status advgan_convert_gram(const advgan_model* model, const char* in_gram,
                                             const char* out_gram, const char* direction);
ADVGAN_API advgan_status advgan_convert_wav(const advgan_model* model, const char* in_wav,
                                            const char* out_wav, const char* direction);

/* suite is "gradcheck", "invariants" or "toyeval" (needs model). Writes the
 * JSON-lines report to *report_out and returns ADVGAN_OK iff every check
 * passed, ADVGAN_VERIFY_FAILED otherwise. */
ADVGAN_API advgan_status advgan_verify(const char* suite, const advgan_model* model,
                                       char** report_out);

/* Generator and discriminator parameter counts at the given width, as JSON. */
ADVGAN_API advgan_status advgan_param_report(double width, char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* ADVGAN_ADVGAN_H */
