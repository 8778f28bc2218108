/* C interface to the mmdd library. All functions return an mmdd_status;
 * on failure mmdd_last_error() describes the problem (thread-local). Arrays
 * are row-major float64 with one row per item. */
#ifndef MMDD_H
#define MMDD_H

#include <stddef.h>
#include <stdint.h>

#if defined(MMDD_BUILDING_LIBRARY)
#define MMDD_API __attribute__((visibility("default")))
#else
#define MMDD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmdd_status {
  MMDD_OK = 0,
  MMDD_ERR_INVALID_ARGUMENT = 1,
  MMDD_ERR_EMPTY_INPUT = 2,
  MMDD_ERR_INSUFFICIENT_DATA = 3,
  MMDD_ERR_NUMERIC = 4,
  MMDD_ERR_CONFIG = 5,
  MMDD_ERR_INGESTION = 6,
  MMDD_ERR_VALIDATION = 7,
  MMDD_ERR_RESOLUTION = 8,
  MMDD_ERR_ORCHESTRATION = 9,
  MMDD_ERR_PLOTTING = 10,
  MMDD_ERR_IO = 11,
  MMDD_ERR_INTERNAL = 99
} mmdd_status;

typedef struct mmdd_config mmdd_config;
typedef struct mmdd_schedule mmdd_schedule;
typedef struct mmdd_bank mmdd_bank;
typedef struct mmdd_mixture mmdd_mixture;

MMDD_API const char* mmdd_version(void);
MMDD_API const char* mmdd_status_name(mmdd_status status);
/* Message of the last failed call on this thread, "" if none. */
MMDD_API const char* mmdd_last_error(void);

/* Experiment configuration */
MMDD_API mmdd_status mmdd_config_load(const char* path, mmdd_config** out);
MMDD_API mmdd_status mmdd_config_parse(const char* json_text, mmdd_config** out);
MMDD_API void mmdd_config_free(mmdd_config* cfg);
MMDD_API mmdd_status mmdd_config_set_seed(mmdd_config* cfg, uint64_t seed);
MMDD_API mmdd_status mmdd_config_set_output(mmdd_config* cfg, const char* dir);
/* Writes the 64-character hex hash plus NUL; buf_len must be >= 65. */
MMDD_API mmdd_status mmdd_config_hash(const mmdd_config* cfg, char* buf, size_t buf_len);
MMDD_API mmdd_status mmdd_config_save(const mmdd_config* cfg, const char* path);

/* Experiment verbs; outputs go to the configured output directory. */
MMDD_API mmdd_status mmdd_run_distill(const mmdd_config* cfg);
MMDD_API mmdd_status mmdd_run_eval(const mmdd_config* cfg);
MMDD_API mmdd_status mmdd_run_control_sim(const mmdd_config* cfg);
MMDD_API mmdd_status mmdd_run_plot(const mmdd_config* cfg);
MMDD_API mmdd_status mmdd_run_all(const mmdd_config* cfg);

/* Diffusion schedule; kind is "linear" or "cosine". */
MMDD_API mmdd_status mmdd_schedule_create(int steps, const char* kind, mmdd_schedule** out);
MMDD_API void mmdd_schedule_free(mmdd_schedule* schedule);
MMDD_API mmdd_status mmdd_schedule_alpha_bar(const mmdd_schedule* schedule, int t, double* out);
MMDD_API mmdd_status mmdd_forward_noise(const mmdd_schedule* schedule, const double* z0, const double* eps,
                                        size_t dim, int t, double* out);

/* Memory bank of class-partitioned FIFO queues (global_partition != 0: one queue). */
MMDD_API mmdd_status mmdd_bank_create(int capacity, int num_classes, int dim, int global_partition,
                                      mmdd_bank** out);
MMDD_API void mmdd_bank_free(mmdd_bank* bank);
MMDD_API mmdd_status mmdd_bank_enqueue(mmdd_bank* bank, const double* rows, const int* labels, size_t n);
MMDD_API mmdd_status mmdd_bank_size(const mmdd_bank* bank, int label, size_t* out);
/* Minimax terms over a bank: representativeness (min similarity, negated
 * mean) and diversity (max similarity, mean). */
MMDD_API mmdd_status mmdd_repr_loss(const mmdd_bank* bank, const double* z_hat, const int* labels, size_t n,
                                    double* out);
MMDD_API mmdd_status mmdd_div_loss(const mmdd_bank* bank, const double* z_hat, const int* labels, size_t n,
                                   double* out);

/* Coreset selection; method is "random", "herding" or "kcenter". out_ids
 * receives num_classes * ipc source row indices, class-major in rank order. */
MMDD_API mmdd_status mmdd_select(const char* method, const double* features, const int* labels, size_t n,
                                 size_t dim, int num_classes, int ipc, uint64_t seed, int64_t* out_ids);

/* Distribution metrics. bandwidth <= 0 selects the median heuristic. */
MMDD_API mmdd_status mmdd_mmd_rbf(const double* a, size_t na, const double* b, size_t nb, size_t dim,
                                  double bandwidth, double* out);
/* out[0..3] = precision %, recall %, density, coverage %. */
MMDD_API mmdd_status mmdd_prdc(const double* real, size_t n_real, const double* gen, size_t n_gen, size_t dim,
                               int k, double* out);
MMDD_API mmdd_status mmdd_gaussian_fid(const double* real, size_t n_real, const double* gen, size_t n_gen,
                                       size_t dim, double* out);

/* Identity-covariance Gaussian mixture and its Follmer drift. */
MMDD_API mmdd_status mmdd_mixture_create(const double* weights, const double* means, size_t components,
                                         size_t dim, mmdd_mixture** out);
MMDD_API void mmdd_mixture_free(mmdd_mixture* mixture);
MMDD_API mmdd_status mmdd_follmer_drift(const mmdd_mixture* mixture, const double* z, double t, double* out);

#ifdef __cplusplus
}
#endif

#endif
