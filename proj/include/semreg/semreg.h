/* C interface to the semantic-regularization learning library.
 *
 * Every function returns a semreg_status; on failure a human-readable
 * message is available from semreg_last_error() until the next call on the
 * same thread. Handles are opaque and must be released with the matching
 * _free function. NULL handle arguments are reported as
 * SEMREG_ERR_INVALID, never dereferenced.
 */
#ifndef SEMREG_H
#define SEMREG_H

#include <stdint.h>

#if defined(_WIN32)
#define SEMREG_API __declspec(dllexport)
#else
#define SEMREG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum semreg_status {
    SEMREG_OK = 0,
    SEMREG_ERR_IO = 1,       /* missing/unreadable/unwritable files */
    SEMREG_ERR_PARSE = 2,    /* malformed clause/CSV/config/model text */
    SEMREG_ERR_INVALID = 3,  /* structurally valid input violating a contract */
    SEMREG_ERR_DIVERGED = 4, /* training produced a non-finite objective */
    SEMREG_ERR_INTERNAL = 5, /* invariant failure inside the library */
} semreg_status;

SEMREG_API const char* semreg_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
SEMREG_API const char* semreg_last_error(void);

/* ------------------------------------------------------------------ */
/* Datasets: CSV with header x1,...,xd,<task names>; cells 0, 1 or ?. */

typedef struct semreg_dataset semreg_dataset;

SEMREG_API semreg_status semreg_dataset_load(const char* path, semreg_dataset** out);
SEMREG_API semreg_status semreg_dataset_save(const semreg_dataset* d, const char* path);
SEMREG_API void semreg_dataset_free(semreg_dataset* d);

SEMREG_API int semreg_dataset_num_points(const semreg_dataset* d);
SEMREG_API int semreg_dataset_dimension(const semreg_dataset* d);
SEMREG_API int semreg_dataset_num_tasks(const semreg_dataset* d);
SEMREG_API const char* semreg_dataset_task_name(const semreg_dataset* d, int task);
/* -1 unlabeled, else 0/1 */
SEMREG_API int semreg_dataset_label(const semreg_dataset* d, int task, int point);

/* ------------------------------------------------------------------ */
/* Clause sets parsed against a dataset's task table. */

typedef struct semreg_clauses semreg_clauses;

SEMREG_API semreg_status semreg_clauses_load(const char* path, const semreg_dataset* tasks_from,
                                             semreg_clauses** out);
SEMREG_API semreg_status semreg_clauses_parse(const char* text, const semreg_dataset* tasks_from,
                                              semreg_clauses** out);
SEMREG_API void semreg_clauses_free(semreg_clauses* c);
SEMREG_API int semreg_clauses_count(const semreg_clauses* c);

/* ------------------------------------------------------------------ */
/* Models. */

typedef struct semreg_model semreg_model;

SEMREG_API semreg_status semreg_model_load(const char* path, semreg_model** out);
SEMREG_API semreg_status semreg_model_save(const semreg_model* m, const char* path);
SEMREG_API void semreg_model_free(semreg_model* m);

SEMREG_API int semreg_model_num_tasks(const semreg_model* m);
SEMREG_API int semreg_model_dimension(const semreg_model* m);
SEMREG_API const char* semreg_model_task_name(const semreg_model* m, int task);

/* Writes one real output per task into out[0..num_tasks). Class k is
 * asserted when out[k] >= 0.5. */
SEMREG_API semreg_status semreg_model_predict(const semreg_model* m, const double* x, int dim,
                                              double* out);

/* ------------------------------------------------------------------ */
/* File-oriented operations backing the CLI subcommands. Optional paths
 * may be NULL; config files are text key-value and NULL means defaults. */

SEMREG_API semreg_status semreg_generate(int benchmark, int dimension, int classes,
                                         int labeled_per_class, int unlabeled, int test_per_class,
                                         uint64_t seed, double side, double alpha,
                                         const char* out_dir);

typedef struct semreg_train_stats {
    double final_objective;
    double final_residual;
    double constraint_labeled_initial;
    double constraint_labeled_after_stage1;
    int epochs_stage1;
    int epochs_stage2;
} semreg_train_stats;

/* clauses_path NULL trains without the constraint term; single_stage != 0
 * skips the supervised-only first stage. stats may be NULL. */
SEMREG_API semreg_status semreg_train(const char* train_csv, const char* clauses_path,
                                      const char* config_path, int single_stage,
                                      const char* model_out, semreg_train_stats* stats);

/* Writes a CSV with columns f_<task>... then y_<task>... (raw outputs and
 * 0/1 decisions) for each row of points_csv. */
SEMREG_API semreg_status semreg_predict(const char* model_path, const char* points_csv,
                                        const char* out_csv);

/* Macro-averaged per-task accuracy and all-tasks exact-match rate on a
 * fully labeled test set. Either out pointer may be NULL. */
SEMREG_API semreg_status semreg_evaluate(const char* model_path, const char* test_csv,
                                         double* accuracy, double* exact_match);

typedef void (*semreg_progress_fn)(const char* message, void* user);

/* Runs the experiment grid described by the key-value spec file and writes
 * long.csv, details.csv, summary.csv, ttests.csv, series files and a
 * manifest into out_dir. progress may be NULL. */
SEMREG_API semreg_status semreg_run_experiment(const char* spec_path, const char* out_dir,
                                               semreg_progress_fn progress, void* user);

/* Rebuilds summary/series files from a previously written long.csv. */
SEMREG_API semreg_status semreg_report(const char* long_csv, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SEMREG_H */
