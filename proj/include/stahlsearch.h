/* Copyright 2026 The StahlSearch Authors
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

/* C interface to the consumer-search market library.
 *
 * All objects are opaque handles created and destroyed here. Functions
 * return STAHL_OK on success; on failure they return a status code and leave
 * a message in stahl_last_error() (thread-local, valid until the next call
 * on the same thread). Strings handed back through char** are heap-allocated
 * and must be released with stahl_string_free().
 */

#ifndef STAHLSEARCH_H_
#define STAHLSEARCH_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stahl_status {
  STAHL_OK = 0,
  STAHL_ERR_INVALID_ARGUMENT = 1,
  STAHL_ERR_INVALID_CONFIG = 2,
  STAHL_ERR_INVALID_STRATEGY = 3,
  STAHL_ERR_INVALID_PROFILE = 4,
  STAHL_ERR_CONSTRUCT = 5,
  STAHL_ERR_BELIEF = 6,
  STAHL_ERR_NUMERIC = 7,
  STAHL_ERR_PARSE = 8,
  STAHL_ERR_IO = 9,
  STAHL_ERR_INTERNAL = 10
} stahl_status;

typedef struct stahl_config stahl_config;
typedef struct stahl_profile stahl_profile;
typedef struct stahl_report stahl_report;
typedef struct stahl_sim stahl_sim;

const char* stahl_version(void);
/* Message for the most recent failure on this thread ("" if none). The
 * pointer stays owned by the library; do not free it. */
const char* stahl_last_error(void);
void stahl_string_free(char* s);

/* ----- market configuration ------------------------------------------- */

/* Parses the "stahl-config 1" text format. */
stahl_status stahl_config_parse(const char* text, stahl_config** out);
stahl_status stahl_config_load(const char* path, stahl_config** out);
stahl_status stahl_config_to_text(const stahl_config* config, char** out);
/* Derived quantities (store totals, searcher shares) as readable text. */
stahl_status stahl_config_describe(const stahl_config* config, char** out);
void stahl_config_free(stahl_config* config);

/* ----- equilibrium construction --------------------------------------- */

/* groups: NULL/"" for the default arrangement, else
 * "mixers=0,1;pure=2;cutoff=3:0.8" with zero-based seller indices and
 * cutoff prices as fractions of the reserve price. */
stahl_status stahl_construct(const stahl_config* config, const char* groups,
                             stahl_profile** out);
/* Construction summary (reserve, supports, atoms, per-seller profits). */
stahl_status stahl_construct_summary(const stahl_config* config,
                                     const char* groups, char** out);

/* ----- strategy profiles ----------------------------------------------- */

/* Parses the "stahl-profile 1" text format. */
stahl_status stahl_profile_parse(const char* text, stahl_profile** out);
stahl_status stahl_profile_load(const char* path, stahl_profile** out);
stahl_status stahl_profile_to_text(const stahl_profile* profile, char** out);
stahl_status stahl_profile_save(const stahl_profile* profile,
                                const char* path);
void stahl_profile_free(stahl_profile* profile);

/* ----- equilibrium verification ---------------------------------------- */

typedef struct stahl_tolerances {
  double deviation_rel; /* max deviation gain, relative to the reserve */
  double profit_rel;    /* on-support profit variation, relative */
  int grid;             /* best-response price grid size */
} stahl_tolerances;

stahl_tolerances stahl_tolerances_default(void);

/* Runs the full audit; out receives a report even when checks fail (the
 * status is still STAHL_OK unless the audit itself could not run). */
stahl_status stahl_verify(const stahl_profile* profile,
                          const stahl_config* config,
                          const stahl_tolerances* tolerances,
                          stahl_report** out);
int stahl_report_passed(const stahl_report* report);
stahl_status stahl_report_text(const stahl_report* report, char** out);
void stahl_report_free(stahl_report* report);

/* ----- demand replay ---------------------------------------------------- */

typedef struct stahl_sim_options {
  uint64_t replications;
  uint64_t seed;
  int threads;
  int agent_mode; /* 0: expected consumer flows; 1: discrete searchers */
  int agents;     /* searcher count when agent_mode != 0 */
  int histogram_bins;
} stahl_sim_options;

stahl_sim_options stahl_sim_options_default(void);

stahl_status stahl_simulate(const stahl_profile* profile,
                            const stahl_config* config,
                            const stahl_sim_options* options, stahl_sim** out);
stahl_status stahl_sim_summary_csv(const stahl_sim* sim, char** out);
stahl_status stahl_sim_histogram_csv(const stahl_sim* sim, char** out);
void stahl_sim_free(stahl_sim* sim);

/* ----- comparative-statics sweeps --------------------------------------- */

/* counts_list: comma-separated store-count rows, stores joined by '+',
 * e.g. "2+2,2+3,2+2+2". options NULL or replications 0 keeps the sweep
 * analytic. */
stahl_status stahl_sweep_counts_csv(const char* counts_list,
                                    double shopper_fraction,
                                    double search_cost, double valuation_bound,
                                    const stahl_sim_options* options,
                                    char** out);
/* counts: one store-count row, e.g. "1+2+2"; mu_list: comma-separated
 * shopper fractions. */
stahl_status stahl_sweep_mu_csv(const char* counts, const char* mu_list,
                                double search_cost, double valuation_bound,
                                const stahl_sim_options* options, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STAHLSEARCH_H_ */
