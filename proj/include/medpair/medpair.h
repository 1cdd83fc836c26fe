/* Copyright 2026 The Medpair Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the dual-agent consultation engine.
 *
 * Every call returns an mp_status. On failure a description is available
 * from mp_last_error_message() on the same thread until the next call.
 * Strings handed out through char** parameters are owned by the caller and
 * released with mp_string_free().
 */
#ifndef MEDPAIR_MEDPAIR_H_
#define MEDPAIR_MEDPAIR_H_

#include <stdint.h>

#if defined(_WIN32)
#define MP_API __declspec(dllexport)
#else
#define MP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mp_status {
  MP_OK = 0,
  MP_ERR_INVALID_ARGUMENT = 1,
  MP_ERR_IO = 2,
  MP_ERR_FORMAT = 3,
  MP_ERR_VERSION = 4,
  MP_ERR_TRUNCATED = 5,
  MP_ERR_DIM_MISMATCH = 6,
  MP_ERR_SCHEMA = 7,
  MP_ERR_PARSE = 8,
  MP_ERR_TRANSPORT = 9,
  MP_ERR_CLASSIFICATION = 10,
  MP_ERR_EMBEDDING = 11,
  MP_ERR_MISSING_INDEX = 12,
  MP_ERR_INTERNAL = 13
} mp_status;

typedef struct mp_session mp_session;

/* config_path may be NULL for built-in defaults. */
MP_API mp_status mp_session_create(const char* config_path, mp_session** out);
MP_API void mp_session_destroy(mp_session* session);

/* Overrides applied before the first command runs. Keys:
 *   "seed"          unsigned integer
 *   "workers"       integer >= 1
 *   "mock"          chat mock script path; every backend switches to mock
 *   "out"           output directory
 *   "index_dir"     directory holding the index files
 *   "record_timing" "0" or "1"
 */
MP_API mp_status mp_session_set_option(mp_session* session, const char* key,
                                       const char* value);

/* Writes the index files and manifest.json into the output directory.
 * summary_out (optional) receives the manifest as JSON. */
MP_API mp_status mp_build_kb(mp_session* session, const char* corpus_path,
                             char** summary_out);

/* Consults and scores every case; writes run.jsonl, report.json and
 * report.tsv. with_judge != 0 also scores evidence with the judge backend.
 * summary_out (optional) receives the flat report table. */
MP_API mp_status mp_bench(mp_session* session, const char* dataset_path,
                          int with_judge, char** summary_out);

/* grid: "doctor,pharmacist" pairs separated by ';' using on/off, or NULL
 * for all four combinations. table_out (optional) receives the table. */
MP_API mp_status mp_ablate(mp_session* session, const char* dataset_path,
                           const char* grid, char** table_out);

/* record_path (optional) receives the raw record as JSON. pretty_out
 * (optional) receives the per-stage trace. A case that fails inside the
 * pipeline still returns MP_OK; the trace names the failed stage. */
MP_API mp_status mp_consult(mp_session* session, const char* complaint,
                            const char* record_path, char** pretty_out);

/* Judges the final evidence of a run file; writes judge.json. */
MP_API mp_status mp_judge(mp_session* session, const char* run_path,
                          const char* dataset_path, char** summary_out);

/* Synthetic benchmark: cases, corpus, chat mock script, expected outcomes
 * and a mock-mode config.json. n_corrupt designates cases whose agent
 * pharmacist is scripted to answer wrongly. */
MP_API mp_status mp_generate_fixture(uint64_t seed, int n_cases, int n_corrupt,
                                     const char* out_dir);

/* ROUGE-1, ROUGE-2 and ROUGE-L F1 between two texts. */
MP_API mp_status mp_rouge(const char* candidate, const char* reference,
                          double* rouge1, double* rouge2, double* rouge_l);

MP_API void mp_string_free(char* s);
MP_API const char* mp_last_error_message(void);
MP_API const char* mp_status_string(mp_status status);
MP_API const char* mp_version(void);

#ifdef __cplusplus
}
#endif

#endif /* MEDPAIR_MEDPAIR_H_ */
