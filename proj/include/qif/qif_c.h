/* Copyright 2026 The qifdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qifdyn toolkit.
 *
 * Objects are opaque handles created from the JSON formats documented in the
 * README and freed with the matching *_free function. Every function returns
 * QIF_OK or an error code; qif_last_error() describes the most recent failure
 * on the calling thread. Strings returned through char** out-parameters are
 * heap-allocated and must be released with qif_string_free().
 *
 * Scalar values cross this interface as strings: exact rationals as "a/b",
 * Shannon quantities as decimals, infinities as "inf"/"-inf". A negative
 * `decimals` argument keeps exact values exact; a non-negative one formats
 * everything with that many fractional digits (presentation only).
 */

#ifndef QIF_QIF_C_H_
#define QIF_QIF_C_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qif_status {
  QIF_OK = 0,
  QIF_ERR_PARSE = 1,
  QIF_ERR_SHAPE_MISMATCH = 2,
  QIF_ERR_NOT_STOCHASTIC = 3,
  QIF_ERR_NEGATIVE_ENTRY = 4,
  QIF_ERR_NOT_NORMALIZED = 5,
  QIF_ERR_NEGATIVE_MASS = 6,
  QIF_ERR_DUPLICATE_LABEL = 7,
  QIF_ERR_UNKNOWN_LABEL = 8,
  QIF_ERR_ZERO_PROBABILITY_OBSERVATION = 9,
  QIF_ERR_ENUMERATION_TOO_LARGE = 10,
  QIF_ERR_UNKNOWN_SCENARIO = 11,
  QIF_ERR_UNKNOWN_PERSON = 12,
  QIF_ERR_INVALID_ARGUMENT = 13,
  QIF_ERR_IO = 14,
  QIF_ERR_INTERNAL = 15
} qif_status;

typedef struct qif_dist qif_dist;
typedef struct qif_channel qif_channel;
typedef struct qif_model qif_model;

/* Message for the last failure on this thread; empty string if none. */
const char* qif_last_error(void);
void qif_string_free(char* s);

/* ---- distributions ---- */
qif_status qif_dist_from_json(const char* text, qif_dist** out);
qif_status qif_dist_to_json(const qif_dist* d, int decimals, char** out);
void qif_dist_free(qif_dist* d);

/* ---- channels ---- */
qif_status qif_channel_from_json(const char* text, qif_channel** out);
qif_status qif_channel_from_csv(const char* text, qif_channel** out);
qif_status qif_channel_to_json(const qif_channel* c, int decimals, char** out);
qif_status qif_channel_to_csv(const qif_channel* c, char** out);
qif_status qif_channel_cascade(const qif_channel* c, const qif_channel* d,
                               qif_channel** out);
qif_status qif_channel_parallel(const qif_channel* c, const qif_channel* d,
                                qif_channel** out);
void qif_channel_free(qif_channel* c);

/* ---- adversary models ---- */
qif_status qif_model_from_json(const char* text, qif_model** out);
qif_status qif_model_to_json(const qif_model* m, char** out);
void qif_model_free(qif_model* m);

/* ---- measures ----
 * kind is "expected" or "extreme". The result JSON carries the static
 * posterior measure and static leakage: {"posterior": "...", "leakage": "..."}.
 */
qif_status qif_eval_static(const qif_model* m, const char* kind, const qif_dist* prior,
                           const qif_channel* c, int decimals, char** out_json);

/* mode is "traditional" or "strategy". Traditional mode reports the classical
 * posterior-minus-prior leakage; strategy mode returns the full report with
 * belief, baseline, strategy and both strategy-based measures. */
qif_status qif_dynamic(const qif_model* m, const qif_dist* prior, const qif_channel* c,
                       const char* observe, const char* mode, int decimals,
                       char** out_json);

/* Optimal actions and the uniform strategy for a belief. */
qif_status qif_strategy_report(const qif_model* m, const qif_dist* belief, int decimals,
                               char** out_json);

/* Multi-step, analyst-side leakage against an explicit baseline. */
qif_status qif_multi_step(const qif_model* m, const qif_dist* baseline,
                          const qif_dist* prior, const qif_dist* posterior_belief,
                          int decimals, char** out_json);

/* *out is NULL when no witness exists (QIF_OK is still returned). */
qif_status qif_refinement_witness(const qif_channel* c, const qif_channel* d,
                                  qif_channel** out);

/* ---- scenario registry ---- */
qif_status qif_scenario_list(char** out_json);
qif_status qif_scenario_run(const char* name, int decimals, char** out_json);
/* Writes prior.json and channel_<name>.json files into the directory. */
qif_status qif_scenario_export(const char* name, const char* directory);

/* ---- simulator ----
 * stages is an array of stage_count channels with chained shapes. With a
 * model and budget, the run is monitored: after each stage the cumulative
 * strategy-based leakage of the composed prefix at the realised output is
 * compared against the budget ("inf" disables aborting); the first exceedance
 * aborts. Pass model = NULL for plain sampling. Returns JSON lines. */
qif_status qif_simulate(const qif_dist* prior, const qif_channel* const* stages,
                        size_t stage_count, const qif_model* model, const char* budget,
                        uint64_t seed, int decimals, char** out_jsonl);

/* Checks the static-recovery identities; post may be NULL. */
qif_status qif_verify_consistency(const qif_model* m, const qif_dist* prior,
                                  const qif_channel* c, const qif_channel* post,
                                  char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* QIF_QIF_C_H_ */
