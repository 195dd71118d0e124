/* optw — operational probabilistic theory workbench, C interface.
 *
 * All functions return optw_status; results come back through out
 * parameters as opaque handles. Handles are freed with their matching
 * _free function. Error details for the calling thread are available via
 * optw_last_error(). The library is safe for concurrent use on distinct
 * handles; individual handles are immutable after creation.
 */
#ifndef OPTW_H
#define OPTW_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum optw_status {
    OPTW_OK = 0,
    OPTW_E_INVALID_ARGUMENT = 1,
    OPTW_E_PARSE = 2,
    OPTW_E_IO = 3,
    OPTW_E_DOMAIN = 4,
    OPTW_E_UNRESOLVED = 5,
    OPTW_E_INTERNAL = 6
} optw_status;

typedef struct optw_theory optw_theory;
typedef struct optw_config optw_config;
typedef struct optw_report optw_report;

const char* optw_version(void);
/* thread-local message for the most recent failing call */
const char* optw_last_error(void);

/* ---- run configuration ------------------------------------------------ */
optw_config* optw_config_new(void);
void optw_config_free(optw_config* cfg);
optw_status optw_config_set_seed(optw_config* cfg, uint64_t seed);
optw_status optw_config_set_tolerance(optw_config* cfg, double tol);
optw_status optw_config_set_cutoff(optw_config* cfg, int cutoff);
/* "text" | "tsv" | "json" */
optw_status optw_config_set_format(optw_config* cfg, const char* format);
optw_status optw_config_set_jobs(optw_config* cfg, int jobs);
optw_status optw_config_set_witness_dir(optw_config* cfg, const char* dir);

/* ---- theories ----------------------------------------------------------
 * optw_theory_open loads a theory definition file (JSON). optw_theory_builtin
 * builds a generator theory from a spec string such as "classical:3",
 * "gbit", "polygon:5", "hypersphere:2:642", "bloch:3", "qubit", "quantum:3".
 */
optw_status optw_theory_open(const char* path, optw_theory** out);
optw_status optw_theory_builtin(const char* spec, optw_theory** out);
void optw_theory_free(optw_theory* t);
const char* optw_theory_name(const optw_theory* t);
int optw_theory_embed_dim(const optw_theory* t);
int optw_theory_vertex_count(const optw_theory* t);
optw_status optw_theory_save(const optw_theory* t, const char* path);

/* ---- commands ----------------------------------------------------------
 * Each command produces a report handle; rendering and exit-code semantics
 * match the CLI (0 all pass, 1 any fail, 2 unresolved without failures).
 */
optw_status optw_run_analyze(const optw_theory* t, const optw_config* cfg,
                             optw_report** out);
optw_status optw_run_verify(const optw_theory* t, const optw_config* cfg,
                            optw_report** out);
optw_status optw_run_composite(const char* scenario_path, const optw_config* cfg,
                               optw_report** out);
optw_status optw_run_teleport(const char* scenario_path, const optw_config* cfg,
                              optw_report** out);
optw_status optw_run_distance(const optw_theory* t, const char* states_path,
                              const optw_config* cfg, optw_report** out);

/* ---- reports ----------------------------------------------------------- */
int optw_report_record_count(const optw_report* rep);
int optw_report_exit_code(const optw_report* rep);
/* Renders into a NUL-terminated buffer owned by the caller; release with
 * optw_string_free. format NULL means the config format used at run time. */
optw_status optw_report_render(const optw_report* rep, const char* format, char** out);
void optw_report_free(optw_report* rep);
void optw_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OPTW_H */
