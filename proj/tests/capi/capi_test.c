/* SPDX-License-Identifier: Apache-2.0 */
/* Exercises the C interface end to end on a seconds-scale setup. */
#include <ptomo/ptomo.h>

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__, \
              __LINE__, #cond, ptomo_last_error());                    \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void set(ptomo_config* c, const char* s, const char* k, const char* v) {
  EXPECT(ptomo_config_set(c, s, k, v) == PTOMO_OK);
}

static int verify_calls = 0;
static void on_criterion(void* user, int id, const char* name, int passed, const char* detail,
                         double seconds) {
  (void)user; (void)id; (void)name; (void)passed; (void)detail; (void)seconds;
  ++verify_calls;
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  char surrogate_path[1024], csv_path[1024], report_path[1024], grid_path[1024];
  snprintf(surrogate_path, sizeof surrogate_path, "%s/capi.bin", dir);
  snprintf(csv_path, sizeof csv_path, "%s/capi.csv", dir);
  snprintf(report_path, sizeof report_path, "%s/capi-report.txt", dir);
  snprintf(grid_path, sizeof grid_path, "%s/capi-grid.csv", dir);

  EXPECT(strlen(ptomo_version()) > 0);

  ptomo_config* cfg = NULL;
  EXPECT(ptomo_config_default(4, &cfg) == PTOMO_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(ptomo_last_error()) > 0);
  EXPECT(ptomo_config_default(2, NULL) == PTOMO_ERR_INVALID_ARGUMENT);
  EXPECT(ptomo_config_load("/nonexistent/config.ini", &cfg) == PTOMO_ERR_IO);
  EXPECT(ptomo_config_default(2, &cfg) == PTOMO_OK);
  set(cfg, "problem", "nodes_per_side", "9");
  set(cfg, "problem", "dt", "0.01");
  set(cfg, "splines", "per_axis", "3");
  set(cfg, "splines", "degree", "1");
  set(cfg, "spectral", "total_degree", "1");
  set(cfg, "data", "nodes_per_side", "17");
  set(cfg, "data", "dt", "0.01");
  set(cfg, "data", "sigma0", "0");
  set(cfg, "inverse", "lambda", "0");
  set(cfg, "inverse", "plot_points", "11");
  EXPECT(ptomo_config_set(cfg, "problem", "dt", "zero") == PTOMO_ERR_INVALID_ARGUMENT);
  EXPECT(ptomo_config_set(cfg, "nope", "dt", "1") == PTOMO_ERR_INVALID_ARGUMENT);

  char buf[8192];
  EXPECT(ptomo_config_describe(cfg, buf, sizeof buf) == PTOMO_OK);
  EXPECT(strstr(buf, "per_axis = 3") != NULL);
  EXPECT(ptomo_config_describe(cfg, buf, 8) == PTOMO_ERR_INVALID_ARGUMENT);
  EXPECT(ptomo_config_output_path(cfg, "surrogate", buf, sizeof buf) == PTOMO_OK);
  EXPECT(ptomo_config_output_path(cfg, "elsewhere", buf, sizeof buf) == PTOMO_ERR_INVALID_ARGUMENT);

  ptomo_surrogate* s = NULL;
  ptomo_forward_stats st;
  EXPECT(ptomo_forward(cfg, &s, &st) == PTOMO_OK);
  EXPECT(st.P == 9 && st.N == 10 && st.M == 81);

  ptomo_surrogate_info info;
  EXPECT(ptomo_surrogate_info_get(s, &info) == PTOMO_OK);
  EXPECT(info.Q == 468 && info.P == 9 && info.N == 10 && info.total_degree == 1);

  double theta[9], u[468], j[468 * 9];
  for (int p = 0; p < 9; ++p) theta[p] = 1.0 + 0.05 * p;
  int ext = -1;
  EXPECT(ptomo_surrogate_eval(s, theta, 9, u, 468, &ext) == PTOMO_OK);
  EXPECT(ext == 0);
  EXPECT(ptomo_surrogate_eval(s, theta, 8, u, 468, NULL) == PTOMO_ERR_MISMATCH);
  EXPECT(ptomo_surrogate_jacobian(s, theta, 9, j, 468 * 9) == PTOMO_OK);
  EXPECT(ptomo_surrogate_jacobian(s, theta, 9, j, 10) == PTOMO_ERR_MISMATCH);
  {
    /* Row-major layout: d u[q] / d theta[p] at j[q * P + p]. */
    double tp[9], up[468];
    memcpy(tp, theta, sizeof tp);
    tp[4] += 1e-6;
    ptomo_surrogate_eval(s, tp, 9, up, 468, NULL);
    double worst = 0.0;
    for (int q = 0; q < 468; ++q) {
      const double d = fabs((up[q] - u[q]) / 1e-6 - j[q * 9 + 4]);
      if (d > worst) worst = d;
    }
    EXPECT(worst < 1e-4);
  }

  EXPECT(ptomo_surrogate_save(s, surrogate_path) == PTOMO_OK);
  ptomo_surrogate* loaded = NULL;
  EXPECT(ptomo_surrogate_load(surrogate_path, &loaded) == PTOMO_OK);
  {
    double u2[468];
    ptomo_surrogate_eval(loaded, theta, 9, u2, 468, NULL);
    EXPECT(memcmp(u, u2, sizeof u) == 0);
  }
  EXPECT(ptomo_surrogate_load(csv_path, &loaded) != PTOMO_OK || loaded != NULL);
  ptomo_surrogate* small = NULL;
  EXPECT(ptomo_surrogate_truncate(s, 4, &small) == PTOMO_OK);
  EXPECT(ptomo_surrogate_info_get(small, &info) == PTOMO_OK && info.N == 4);
  EXPECT(ptomo_surrogate_truncate(s, 0, &small) == PTOMO_ERR_INVALID_ARGUMENT);

  ptomo_measurements* m = NULL;
  EXPECT(ptomo_simulate(cfg, "0 - 1", &m) == PTOMO_ERR_INVALID_ARGUMENT);
  EXPECT(ptomo_simulate(cfg, NULL, &m) == PTOMO_OK);
  EXPECT(ptomo_measurements_save(m, csv_path) == PTOMO_OK);
  ptomo_measurements* m2 = NULL;
  EXPECT(ptomo_measurements_load(csv_path, &m2) == PTOMO_OK);
  ptomo_measurements_info mi;
  EXPECT(ptomo_measurements_info_get(m2, &mi) == PTOMO_OK);
  EXPECT(mi.Q == 468 && mi.sigma == 0.0);
  double values[468];
  EXPECT(ptomo_measurements_values(m2, values, 468) == PTOMO_OK);
  EXPECT(ptomo_surrogate_load(csv_path, &small) == PTOMO_ERR_FORMAT);

  /* Self-generated data: fit is exact. */
  ptomo_result* r = NULL;
  EXPECT(ptomo_reconstruct(cfg, s, m2, &r) == PTOMO_OK);
  ptomo_result_info ri;
  EXPECT(ptomo_result_info_get(r, &ri) == PTOMO_OK);
  EXPECT(ri.P == 9 && ri.morozov_used == 0 && isfinite(ri.misfit));
  double est[9];
  EXPECT(ptomo_result_theta(r, est, 9) == PTOMO_OK);
  for (int p = 0; p < 9; ++p) EXPECT(est[p] >= 0.5 && est[p] <= 2.0);
  EXPECT(ptomo_result_write_report(r, report_path) == PTOMO_OK);
  EXPECT(ptomo_result_write_grid(r, grid_path) == PTOMO_OK);
  EXPECT(ptomo_result_write_report(r, "/nonexistent/dir/report.txt") == PTOMO_ERR_IO);

  /* Morozov needs noise. */
  set(cfg, "inverse", "lambda", "morozov");
  ptomo_result* r2 = NULL;
  EXPECT(ptomo_reconstruct(cfg, s, m2, &r2) == PTOMO_ERR_INVALID_ARGUMENT);

  int fails = -1;
  EXPECT(ptomo_verify("medium", on_criterion, NULL, &fails) == PTOMO_ERR_INVALID_ARGUMENT);
  EXPECT(verify_calls == 0);

  ptomo_result_free(r);
  ptomo_measurements_free(m2);
  ptomo_measurements_free(m);
  ptomo_surrogate_free(small);
  ptomo_surrogate_free(loaded);
  ptomo_surrogate_free(s);
  ptomo_config_free(cfg);
  ptomo_config_free(NULL);

  if (failures) fprintf(stderr, "%d expectation(s) failed\n", failures);
  else printf("C API: all expectations met\n");
  return failures ? 1 : 0;
}
