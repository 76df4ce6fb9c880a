/* SPDX-License-Identifier: Apache-2.0
 *
 * qlamc - Q-learning link adaptation simulator for beam-based 5G NR
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------ */

#ifndef QLAMC_H
#define QLAMC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QLAMC_API __declspec(dllexport)
#else
#define QLAMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qlamc_status
{
    QLAMC_OK = 0,
    QLAMC_ERR_CONFIG = 1,   /* invalid config, missing input, output exists */
    QLAMC_ERR_RUNTIME = 2,  /* I/O or simulation failure */
    QLAMC_ERR_ARGUMENT = 3, /* null handle, index out of range */
} qlamc_status;

/* Message of the last failed call on this thread; "" after a success. */
QLAMC_API const char *qlamc_last_error(void);
QLAMC_API const char *qlamc_version(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct qlamc_config qlamc_config;

QLAMC_API qlamc_status qlamc_config_default(qlamc_config **out);
QLAMC_API qlamc_status qlamc_config_load(const char *path, qlamc_config **out);
QLAMC_API qlamc_status qlamc_config_parse(const char *yaml_text, qlamc_config **out);
QLAMC_API void qlamc_config_free(qlamc_config *cfg);

QLAMC_API qlamc_status qlamc_config_set_seed(qlamc_config *cfg, uint64_t seed);
QLAMC_API qlamc_status qlamc_config_set_output_dir(qlamc_config *cfg, const char *dir);
QLAMC_API qlamc_status qlamc_config_set_trace(qlamc_config *cfg, int enabled);
QLAMC_API qlamc_status qlamc_config_set_parallel(qlamc_config *cfg, int threads);
/* Cardinality and reward of the table trained by qlamc_train */
QLAMC_API qlamc_status qlamc_config_set_training_agent(qlamc_config *cfg, int n_cqi, const char *reward);
/* Agent ids: "qlamc:<n_cqi>:<se|bler>", "table", "olla:<delta_up_db>" */
QLAMC_API qlamc_status qlamc_config_set_agents(qlamc_config *cfg, const char *const *ids, size_t count);
QLAMC_API qlamc_status qlamc_config_set_learning_frames(qlamc_config *cfg, int64_t n_frames);
QLAMC_API qlamc_status qlamc_config_set_deployment_size(qlamc_config *cfg, int n_runs, int64_t n_frames);
QLAMC_API qlamc_status qlamc_config_get_seed(const qlamc_config *cfg, uint64_t *seed);

/* ---- subcommands ------------------------------------------------------ */

typedef struct qlamc_train_summary
{
    int n_states;
    int n_actions;
    int64_t decisions;
    double final_epsilon;
    double simulated_time_s;
    char qtable_path[1024];
} qlamc_train_summary;

/* Learning pass; writes qtable_n<N>_<reward>.txt and learning_trace_n<N>_<reward>.csv
 * into the output directory. Existing files are kept unless overwrite != 0. */
QLAMC_API qlamc_status qlamc_train(const qlamc_config *cfg, int overwrite, qlamc_train_summary *summary);

typedef struct qlamc_deployment qlamc_deployment;

/* Deployment runs; writes per_run.csv, aggregate.csv, cdf.csv (and trace.csv when
 * tracing). Q-tables are read from the deployment Q-table directory, default the
 * output directory. out may be NULL. */
QLAMC_API qlamc_status qlamc_deploy(const qlamc_config *cfg, int overwrite, qlamc_deployment **out);
QLAMC_API void qlamc_deployment_free(qlamc_deployment *d);
QLAMC_API size_t qlamc_deployment_agent_count(const qlamc_deployment *d);
QLAMC_API const char *qlamc_deployment_agent_id(const qlamc_deployment *d, size_t index);
QLAMC_API qlamc_status qlamc_deployment_mean_bler(const qlamc_deployment *d, size_t index, double *out);
QLAMC_API qlamc_status qlamc_deployment_mean_se(const qlamc_deployment *d, size_t index, double *out);
/* Aggregate table, one line per agent */
QLAMC_API const char *qlamc_deployment_summary(const qlamc_deployment *d);

/* BLER curves on a 0.1 dB grid and ILLA thresholds: bler_curves.csv, illa_thresholds.csv */
QLAMC_API qlamc_status qlamc_curves(const qlamc_config *cfg, int overwrite);

/* ---- Q-tables --------------------------------------------------------- */

typedef struct qlamc_qtable qlamc_qtable;

QLAMC_API qlamc_status qlamc_qtable_load(const char *path, qlamc_qtable **out);
QLAMC_API void qlamc_qtable_free(qlamc_qtable *q);
QLAMC_API qlamc_status qlamc_qtable_dims(const qlamc_qtable *q, int *n_states, int *n_actions);
QLAMC_API qlamc_status qlamc_qtable_value(const qlamc_qtable *q, int state, int action, double *out);
QLAMC_API qlamc_status qlamc_qtable_visits(const qlamc_qtable *q, int state, int action, uint64_t *out);

#ifdef __cplusplus
}
#endif

#endif
