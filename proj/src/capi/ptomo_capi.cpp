// SPDX-License-Identifier: Apache-2.0
#include "ptomo/ptomo.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "acceptance.hpp"
#include "config.hpp"
#include "container.hpp"
#include "error.hpp"
#include "pipeline.hpp"

struct ptomo_config {
  ptomo::RunConfig config;
};
struct ptomo_surrogate {
  ptomo::ParametricSurrogate surrogate;
};
struct ptomo_measurements {
  ptomo::MeasurementSet set;
};
struct ptomo_result {
  ptomo::Reconstruction reconstruction;
};

namespace {

thread_local std::string last_error;

ptomo_status to_status(ptomo::ErrorCode c) { return static_cast<ptomo_status>(static_cast<int>(c)); }

template <class F>
ptomo_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PTOMO_OK;
  } catch (const ptomo::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PTOMO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PTOMO_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return PTOMO_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) ptomo::fail(ptomo::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

void copy_string(const std::string& s, char* buffer, size_t size) {
  need(buffer, "buffer");
  if (size < s.size() + 1)
    ptomo::fail(ptomo::ErrorCode::invalid_argument,
                "buffer too small: need " + std::to_string(s.size() + 1) + " bytes");
  std::memcpy(buffer, s.c_str(), s.size() + 1);
}

}  // namespace

extern "C" {

const char* ptomo_version(void) { return "1.0.0"; }

const char* ptomo_last_error(void) { return last_error.c_str(); }

ptomo_status ptomo_config_default(int dim, ptomo_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ptomo_config{ptomo::default_config(dim)};
  });
}

ptomo_status ptomo_config_load(const char* path, ptomo_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ptomo_config{ptomo::load_config(path)};
  });
}

ptomo_status ptomo_config_set(ptomo_config* config, const char* section, const char* key,
                              const char* value) {
  return guarded([&] {
    need(config, "config");
    need(section, "section");
    need(key, "key");
    need(value, "value");
    ptomo::RunConfig next = config->config;
    ptomo::set_config_value(next, section, key, value);
    ptomo::validate_config(next);
    config->config = std::move(next);
  });
}

ptomo_status ptomo_config_describe(const ptomo_config* config, char* buffer, size_t size) {
  return guarded([&] {
    need(config, "config");
    copy_string(ptomo::describe_config(config->config), buffer, size);
  });
}

ptomo_status ptomo_config_output_path(const ptomo_config* config, const char* which, char* buffer,
                                      size_t size) {
  return guarded([&] {
    need(config, "config");
    need(which, "which");
    const auto& c = config->config;
    const std::string w = which;
    if (w == "surrogate") copy_string(c.surrogate_path, buffer, size);
    else if (w == "measurements") copy_string(c.measurements_path, buffer, size);
    else if (w == "report") copy_string(c.report_path, buffer, size);
    else if (w == "grid") copy_string(c.grid_path, buffer, size);
    else ptomo::fail(ptomo::ErrorCode::invalid_argument, "unknown output '" + w + "'");
  });
}

void ptomo_config_free(ptomo_config* config) { delete config; }

ptomo_status ptomo_forward(const ptomo_config* config, ptomo_surrogate** out,
                           ptomo_forward_stats* stats) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    ptomo::ForwardStats st;
    auto s = ptomo::run_forward(config->config, &st);
    if (stats) {
      stats->M = st.M;
      stats->P = st.P;
      stats->N = st.N;
      stats->nnz_lambda = st.nnz_lambda;
      stats->nnz_S = st.nnz_S;
      stats->nnz_A = st.nnz_A;
      stats->eta = st.eta;
      stats->steps = st.steps;
      stats->assembly_seconds = st.assembly_seconds;
      stats->stepping_seconds = st.stepping_seconds;
    }
    *out = new ptomo_surrogate{std::move(s)};
  });
}

ptomo_status ptomo_surrogate_save(const ptomo_surrogate* s, const char* path) {
  return guarded([&] {
    need(s, "surrogate");
    need(path, "path");
    ptomo::write_surrogate(path, s->surrogate);
  });
}

ptomo_status ptomo_surrogate_load(const char* path, ptomo_surrogate** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ptomo_surrogate{ptomo::read_surrogate(path)};
  });
}

ptomo_status ptomo_surrogate_info_get(const ptomo_surrogate* s, ptomo_surrogate_info* info) {
  return guarded([&] {
    need(s, "surrogate");
    need(info, "info");
    const auto& x = s->surrogate;
    info->dim = x.layout().dim;
    info->Q = x.Q();
    info->P = x.P();
    info->total_degree = x.total_degree();
    info->N = x.N();
    info->nnz_lambda = x.lambda().nnz();
    info->spatial_points = x.layout().spatial_count();
    info->times = x.layout().time_count();
    info->lo = x.interval().lo;
    info->hi = x.interval().hi;
    info->spline_per_axis = x.spline().per_axis;
    info->spline_degree = x.spline().degree;
    info->nodes_per_side = x.provenance().nodes_per_side;
    info->dt = x.provenance().dt;
    info->final_time = x.provenance().final_time;
    info->flux = x.provenance().flux;
  });
}

ptomo_status ptomo_surrogate_eval(const ptomo_surrogate* s, const double* theta, size_t p,
                                  double* u, size_t q, int* extrapolated) {
  return guarded([&] {
    need(s, "surrogate");
    need(theta, "theta");
    need(u, "u");
    const auto& x = s->surrogate;
    if (q != static_cast<size_t>(x.Q()))
      ptomo::fail(ptomo::ErrorCode::mismatch, "output length must equal Q");
    bool ext = false;
    const Eigen::VectorXd v = x.eval_U({theta, p}, &ext);
    std::memcpy(u, v.data(), q * sizeof(double));
    if (extrapolated) *extrapolated = ext ? 1 : 0;
  });
}

ptomo_status ptomo_surrogate_jacobian(const ptomo_surrogate* s, const double* theta, size_t p,
                                      double* j, size_t size) {
  return guarded([&] {
    need(s, "surrogate");
    need(theta, "theta");
    need(j, "jacobian");
    const auto& x = s->surrogate;
    if (size != static_cast<size_t>(x.Q()) * static_cast<size_t>(x.P()))
      ptomo::fail(ptomo::ErrorCode::mismatch, "jacobian buffer must hold Q*P values");
    const Eigen::MatrixXd jac = x.eval_JU({theta, p});
    Eigen::Map<ptomo::RowMatrix>(j, x.Q(), x.P()) = jac;
  });
}

ptomo_status ptomo_surrogate_truncate(const ptomo_surrogate* s, int64_t keep,
                                      ptomo_surrogate** out) {
  return guarded([&] {
    need(s, "surrogate");
    need(out, "out");
    *out = new ptomo_surrogate{s->surrogate.truncate(keep)};
  });
}

void ptomo_surrogate_free(ptomo_surrogate* s) { delete s; }

ptomo_status ptomo_simulate(const ptomo_config* config, const char* target,
                            ptomo_measurements** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = new ptomo_measurements{ptomo::run_simulate(config->config, target ? target : "")};
  });
}

ptomo_status ptomo_measurements_save(const ptomo_measurements* m, const char* path) {
  return guarded([&] {
    need(m, "measurements");
    need(path, "path");
    ptomo::write_measurements(path, m->set);
  });
}

ptomo_status ptomo_measurements_load(const char* path, ptomo_measurements** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ptomo_measurements{ptomo::read_measurements(path)};
  });
}

ptomo_status ptomo_measurements_info_get(const ptomo_measurements* m,
                                         ptomo_measurements_info* info) {
  return guarded([&] {
    need(m, "measurements");
    need(info, "info");
    info->dim = m->set.layout.dim;
    info->Q = m->set.layout.size();
    info->spatial_points = m->set.layout.spatial_count();
    info->times = m->set.layout.time_count();
    info->sigma = m->set.sigma;
    info->sigma0 = m->set.sigma0;
    info->seed = m->set.seed;
  });
}

ptomo_status ptomo_measurements_values(const ptomo_measurements* m, double* values, size_t q) {
  return guarded([&] {
    need(m, "measurements");
    need(values, "values");
    if (q != static_cast<size_t>(m->set.values.size()))
      ptomo::fail(ptomo::ErrorCode::mismatch, "output length must equal Q");
    std::memcpy(values, m->set.values.data(), q * sizeof(double));
  });
}

void ptomo_measurements_free(ptomo_measurements* m) { delete m; }

ptomo_status ptomo_reconstruct(const ptomo_config* config, const ptomo_surrogate* s,
                               const ptomo_measurements* m, ptomo_result** out) {
  return guarded([&] {
    need(config, "config");
    need(s, "surrogate");
    need(m, "measurements");
    need(out, "out");
    *out = new ptomo_result{ptomo::run_reconstruct(config->config, s->surrogate, m->set)};
  });
}

ptomo_status ptomo_result_info_get(const ptomo_result* r, ptomo_result_info* info) {
  return guarded([&] {
    need(r, "result");
    need(info, "info");
    const auto& x = r->reconstruction;
    info->lambda = x.result.lambda;
    info->misfit = x.result.misfit;
    info->sqrtq_sigma = x.target_misfit;
    info->iterations = x.result.iterations;
    info->converged = x.result.converged ? 1 : 0;
    info->morozov_used = x.morozov ? 1 : 0;
    info->morozov_satisfied = x.morozov && x.morozov->satisfied ? 1 : 0;
    info->has_approximation_error = x.result.approximation_error ? 1 : 0;
    info->approximation_error = x.result.approximation_error.value_or(0.0);
    info->has_target_error = x.target_error ? 1 : 0;
    info->target_error = x.target_error.value_or(0.0);
    info->seconds = x.seconds;
    info->P = static_cast<int>(x.result.theta.size());
  });
}

ptomo_status ptomo_result_theta(const ptomo_result* r, double* theta, size_t p) {
  return guarded([&] {
    need(r, "result");
    need(theta, "theta");
    const auto& t = r->reconstruction.result.theta;
    if (p != static_cast<size_t>(t.size()))
      ptomo::fail(ptomo::ErrorCode::mismatch, "output length must equal P");
    std::memcpy(theta, t.data(), p * sizeof(double));
  });
}

ptomo_status ptomo_result_write_report(const ptomo_result* r, const char* path) {
  return guarded([&] {
    need(r, "result");
    need(path, "path");
    ptomo::write_report(path, r->reconstruction);
  });
}

ptomo_status ptomo_result_write_grid(const ptomo_result* r, const char* path) {
  return guarded([&] {
    need(r, "result");
    need(path, "path");
    ptomo::write_grid(path, r->reconstruction);
  });
}

void ptomo_result_free(ptomo_result* r) { delete r; }

ptomo_status ptomo_verify(const char* tier, ptomo_verify_callback callback, void* user,
                          int* failures) {
  return guarded([&] {
    need(tier, "tier");
    const std::string t = tier;
    ptomo::verify::Tier level;
    if (t == "quick") level = ptomo::verify::Tier::quick;
    else if (t == "full") level = ptomo::verify::Tier::full;
    else ptomo::fail(ptomo::ErrorCode::invalid_argument, "tier must be 'quick' or 'full'");
    const int failed = ptomo::verify::run_acceptance(
        level, [&](const ptomo::verify::CriterionResult& r) {
          if (callback) callback(user, r.id, r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), r.seconds);
        });
    if (failures) *failures = failed;
  });
}

}  // extern "C"
