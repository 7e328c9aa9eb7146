/*
 * C interface to the adaptive-k nearest-neighbor classification toolkit.
 *
 * Every object is an opaque handle created and destroyed by this
 * library. Functions return ACKER_OK (0) on success or a nonzero status;
 * acker_last_error() describes the most recent failure on the calling
 * thread. Strings returned through char** are owned by the caller and
 * released with acker_string_free().
 */
#ifndef ACKER_H
#define ACKER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ACKER_API __declspec(dllexport)
#else
#define ACKER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct acker_dataset_t acker_dataset_t;
typedef struct acker_points_t acker_points_t;
typedef struct acker_model_t acker_model_t;
typedef struct acker_result_t acker_result_t;
typedef struct acker_report_t acker_report_t;

/* Status values double as CLI exit codes. */
typedef enum acker_status_t {
  ACKER_OK = 0,
  ACKER_ERROR_CONFIG = 2, /* invalid parameters or configuration */
  ACKER_ERROR_DATA = 3,   /* unreadable or malformed input data */
  ACKER_ERROR_RUNTIME = 4 /* anything else */
} acker_status_t;

ACKER_API const char* acker_version(void);

/* Message of the last failure on this thread; never NULL. */
ACKER_API const char* acker_last_error(void);

ACKER_API void acker_string_free(char* s);

/* ------------------------------------------------------------ datasets */

typedef struct acker_csv_schema_t {
  const char* lon_column;   /* header name or 0-based position; NULL = "lon" */
  const char* lat_column;   /* NULL = "lat" */
  const char* label_column; /* NULL = "label" */
  char delimiter;           /* 0 = ',' */
  int has_header;           /* nonzero = first row is a header */
} acker_csv_schema_t;

ACKER_API acker_status_t acker_dataset_load_csv(const char* path,
                                                const acker_csv_schema_t* schema,
                                                acker_dataset_t** out);

/*
 * Synthetic datasets; generator is one of
 *   separable_halves | noisy_dense_plus_sparse_checkerboard |
 *   uniform_random_labels
 * Equal arguments produce an identical dataset on every platform.
 */
ACKER_API acker_status_t acker_dataset_generate(const char* generator,
                                                uint64_t count, uint32_t classes,
                                                double noise_rate, uint64_t seed,
                                                acker_dataset_t** out);

ACKER_API acker_status_t acker_dataset_write_csv(const acker_dataset_t* dataset,
                                                 const char* path);
ACKER_API size_t acker_dataset_size(const acker_dataset_t* dataset);
ACKER_API size_t acker_dataset_classes(const acker_dataset_t* dataset);
ACKER_API void acker_dataset_free(acker_dataset_t* dataset);

/* Bare query points; the label column is ignored and may be absent. */
ACKER_API acker_status_t acker_points_load_csv(const char* path,
                                               const acker_csv_schema_t* schema,
                                               acker_points_t** out);
ACKER_API size_t acker_points_size(const acker_points_t* points);
ACKER_API void acker_points_free(acker_points_t* points);

/* -------------------------------------------------------------- models */

/* Standard kNN with a fixed k; requires 1 <= k <= train size. */
ACKER_API acker_status_t acker_model_knn(const acker_dataset_t* train,
                                         uint32_t k, acker_model_t** out);

/*
 * Adaptive-k model: feature is one of
 *   avg_dist | max_dist | max_avg_comb | lat_lon
 * range accepts "1..50" or "1,5,25"; its max must be < train size, and
 * 1 <= l <= train size. Building precomputes the feature index.
 */
ACKER_API acker_status_t acker_model_acker(const acker_dataset_t* train,
                                           const char* feature,
                                           const char* range, uint32_t l,
                                           acker_model_t** out);

ACKER_API void acker_model_free(acker_model_t* model);

/* ------------------------------------------------------ classification */

/* threads = 0 means 1; results are identical for every thread count. */
ACKER_API acker_status_t acker_model_classify(const acker_model_t* model,
                                              const acker_points_t* queries,
                                              uint32_t threads,
                                              acker_result_t** out);

ACKER_API size_t acker_result_size(const acker_result_t* result);

/*
 * Row accessors. chosen_k and expected_accuracy are meaningful for
 * adaptive models only; for standard kNN they read 0 and -1.
 */
ACKER_API acker_status_t acker_result_row(const acker_result_t* result,
                                          size_t index, uint32_t* label,
                                          uint32_t* chosen_k,
                                          double* expected_accuracy);
ACKER_API const char* acker_result_label_name(const acker_result_t* result,
                                              uint32_t label);

/* Columns: point_id,predicted,chosen_k,expected_accuracy */
ACKER_API acker_status_t acker_result_to_csv(const acker_result_t* result,
                                             char** out_csv);
ACKER_API void acker_result_free(acker_result_t* result);

/* --------------------------------------------------------- experiments */

/*
 * experiment: evaluate | sweep_fixed_k | sweep_l | sweep_kmax | roc
 * method (evaluate only): standard_knn | acker
 * values: the swept parameter list ("1..50" or "10,50,100"), meaning
 *   k values for sweep_fixed_k, l values for sweep_l and roc, and k_max
 *   values for sweep_kmax.
 * k: the k of standard_knn evaluation; for roc, a nonzero k pins the
 *   candidate range to exactly {k} (the fixed-k reading); zero sweeps
 *   the full range instead.
 * folds = 0 means 10; threads = 0 means 1.
 */
typedef struct acker_experiment_t {
  const char* experiment;
  const char* method;
  uint32_t k;
  const char* feature;
  const char* range;
  const char* values;
  uint32_t l;
  uint32_t folds;
  uint64_t seed;
  uint32_t threads;
} acker_experiment_t;

ACKER_API acker_status_t acker_run_experiment(const acker_dataset_t* data,
                                              const acker_experiment_t* config,
                                              acker_report_t** out);

/* format: "csv" or "text". The bytes equal the library rendering. */
ACKER_API acker_status_t acker_report_render(const acker_report_t* report,
                                             const char* format,
                                             char** out_text);
ACKER_API void acker_report_free(acker_report_t* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ACKER_H */
