/* SPDX-License-Identifier: Apache-2.0 */
#ifndef PTOMO_PTOMO_H
#define PTOMO_PTOMO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PTOMO_API __declspec(dllexport)
#else
#define PTOMO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning ptomo_status records a message
 * retrievable with ptomo_last_error() on failure. */
typedef enum ptomo_status {
  PTOMO_OK = 0,
  PTOMO_ERR_INVALID_ARGUMENT = 1,
  PTOMO_ERR_IO = 2,
  PTOMO_ERR_FORMAT = 3,
  PTOMO_ERR_NUMERICAL = 4,
  PTOMO_ERR_MISMATCH = 5,
  PTOMO_ERR_ILL_POSED = 6,
  PTOMO_ERR_OVERFLOW = 7,
  PTOMO_ERR_INTERNAL = 99
} ptomo_status;

typedef struct ptomo_config ptomo_config;
typedef struct ptomo_surrogate ptomo_surrogate;
typedef struct ptomo_measurements ptomo_measurements;
typedef struct ptomo_result ptomo_result;

PTOMO_API const char* ptomo_version(void);
/* Message of the most recent failure on the calling thread ("" if none). */
PTOMO_API const char* ptomo_last_error(void);

/* Configuration ---------------------------------------------------------- */

PTOMO_API ptomo_status ptomo_config_default(int dim, ptomo_config** out);
PTOMO_API ptomo_status ptomo_config_load(const char* path, ptomo_config** out);
/* Sets one key as if it appeared in the file under [section]. */
PTOMO_API ptomo_status ptomo_config_set(ptomo_config* config, const char* section,
                                        const char* key, const char* value);
/* The configuration in file syntax; writes at most `size` bytes including the
 * NUL. A short buffer gives PTOMO_ERR_INVALID_ARGUMENT naming the size needed. */
PTOMO_API ptomo_status ptomo_config_describe(const ptomo_config* config, char* buffer,
                                             size_t size);
/* Output paths: "surrogate", "measurements", "report" or "grid". */
PTOMO_API ptomo_status ptomo_config_output_path(const ptomo_config* config, const char* which,
                                                char* buffer, size_t size);
PTOMO_API void ptomo_config_free(ptomo_config* config);

/* Forward build ---------------------------------------------------------- */

typedef struct ptomo_forward_stats {
  int M;
  int P;
  int64_t N;
  int64_t nnz_lambda;
  int64_t nnz_S;
  int64_t nnz_A;
  double eta;
  long steps;
  double assembly_seconds;
  double stepping_seconds;
} ptomo_forward_stats;

PTOMO_API ptomo_status ptomo_forward(const ptomo_config* config, ptomo_surrogate** out,
                                     ptomo_forward_stats* stats);

/* Surrogates ------------------------------------------------------------- */

typedef struct ptomo_surrogate_info {
  int dim;
  int Q;
  int P;
  int total_degree;
  int64_t N;
  int64_t nnz_lambda;
  int spatial_points;
  int times;
  double lo;
  double hi;
  int spline_per_axis;
  int spline_degree;
  int nodes_per_side;
  double dt;
  double final_time;
  double flux;
} ptomo_surrogate_info;

PTOMO_API ptomo_status ptomo_surrogate_save(const ptomo_surrogate* s, const char* path);
PTOMO_API ptomo_status ptomo_surrogate_load(const char* path, ptomo_surrogate** out);
PTOMO_API ptomo_status ptomo_surrogate_info_get(const ptomo_surrogate* s,
                                                ptomo_surrogate_info* info);
/* U(theta): theta has P entries, u receives Q. `extrapolated` may be NULL. */
PTOMO_API ptomo_status ptomo_surrogate_eval(const ptomo_surrogate* s, const double* theta,
                                            size_t p, double* u, size_t q, int* extrapolated);
/* Jacobian, Q x P row-major. */
PTOMO_API ptomo_status ptomo_surrogate_jacobian(const ptomo_surrogate* s, const double* theta,
                                                size_t p, double* j, size_t size);
PTOMO_API ptomo_status ptomo_surrogate_truncate(const ptomo_surrogate* s, int64_t keep,
                                                ptomo_surrogate** out);
PTOMO_API void ptomo_surrogate_free(ptomo_surrogate* s);

/* Measurements ----------------------------------------------------------- */

typedef struct ptomo_measurements_info {
  int dim;
  int Q;
  int spatial_points;
  int times;
  double sigma;
  double sigma0;
  uint64_t seed;
} ptomo_measurements_info;

/* Simulates data for `target` (NULL or "" uses the configured one). */
PTOMO_API ptomo_status ptomo_simulate(const ptomo_config* config, const char* target,
                                      ptomo_measurements** out);
PTOMO_API ptomo_status ptomo_measurements_save(const ptomo_measurements* m, const char* path);
PTOMO_API ptomo_status ptomo_measurements_load(const char* path, ptomo_measurements** out);
PTOMO_API ptomo_status ptomo_measurements_info_get(const ptomo_measurements* m,
                                                   ptomo_measurements_info* info);
PTOMO_API ptomo_status ptomo_measurements_values(const ptomo_measurements* m, double* values,
                                                 size_t q);
PTOMO_API void ptomo_measurements_free(ptomo_measurements* m);

/* Reconstruction --------------------------------------------------------- */

typedef struct ptomo_result_info {
  double lambda;
  double misfit;
  double sqrtq_sigma;
  int iterations;
  int converged;
  int morozov_used;
  int morozov_satisfied;
  int has_approximation_error;
  double approximation_error;
  int has_target_error;
  double target_error;
  double seconds;
  int P;
} ptomo_result_info;

PTOMO_API ptomo_status ptomo_reconstruct(const ptomo_config* config, const ptomo_surrogate* s,
                                         const ptomo_measurements* m, ptomo_result** out);
PTOMO_API ptomo_status ptomo_result_info_get(const ptomo_result* r, ptomo_result_info* info);
PTOMO_API ptomo_status ptomo_result_theta(const ptomo_result* r, double* theta, size_t p);
PTOMO_API ptomo_status ptomo_result_write_report(const ptomo_result* r, const char* path);
PTOMO_API ptomo_status ptomo_result_write_grid(const ptomo_result* r, const char* path);
PTOMO_API void ptomo_result_free(ptomo_result* r);

/* Verification ----------------------------------------------------------- */

/* Called once per acceptance criterion as it finishes. */
typedef void (*ptomo_verify_callback)(void* user, int id, const char* name, int passed,
                                      const char* detail, double seconds);

/* tier: "quick" or "full". *failures receives the number of failed criteria. */
PTOMO_API ptomo_status ptomo_verify(const char* tier, ptomo_verify_callback callback, void* user,
                                    int* failures);

#ifdef __cplusplus
}
#endif

#endif /* PTOMO_PTOMO_H */
