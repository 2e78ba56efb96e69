// SPDX-License-Identifier: Apache-2.0
#include "pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "error.hpp"

namespace ptomo {

ParametricSurrogate run_forward(const RunConfig& c, ForwardStats* stats) {
  validate_config(c);
  ParametricSurrogate s = build_surrogate(c.forward_setup(), stats);
  if (c.keep > 0 && c.keep < s.N()) s = s.truncate(c.keep);
  return s;
}

MeasurementSet run_simulate(const RunConfig& c, const std::string& target_override) {
  validate_config(c);
  const std::string target = target_override.empty() ? c.target : target_override;
  const ScalarField a = make_target(target);
  const Mesh mesh = build_mesh(c.dim, c.data_nodes_per_side);
  for (const auto& x : mesh.nodes) {
    const double v = a(x);
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorCode::invalid_argument,
           "target diffusivity '" + target + "' is not positive at (" + std::to_string(x[0]) +
               ", " + std::to_string(x[1]) + ", " + std::to_string(x[2]) + ")");
  }
  MeasurementSet m;
  m.layout = c.layout();
  const Eigen::VectorXd clean = simulate_boundary_data(c.dim, c.data_nodes_per_side, c.data_dt,
                                                       c.final_time, c.flux, a, m.layout);
  const NoisyValues noisy = add_noise(clean, c.sigma0, c.seed);
  m.values = noisy.values;
  m.sigma = noisy.sigma;
  m.sigma0 = c.sigma0;
  m.seed = c.seed;
  m.target = target;
  return m;
}

namespace {

double relative_field_error(const SplineBasis& basis, const Eigen::VectorXd& theta,
                            const ScalarField& target, int per_side) {
  const std::vector<Point> grid = uniform_grid(basis.dim(), per_side);
  const std::vector<double> th(theta.data(), theta.data() + theta.size());
  return sample_field_error(basis, th, target, grid);
}

}  // namespace

Reconstruction run_reconstruct(const RunConfig& c, const ParametricSurrogate& s,
                               const MeasurementSet& data) {
  const auto t0 = std::chrono::steady_clock::now();
  check_same_layout(s.layout(), data.layout);
  Reconstruction r;
  r.sigma = data.sigma;
  r.target_misfit = std::sqrt(static_cast<double>(s.Q())) * data.sigma;
  r.target = data.target;
  r.spline = s.spline();
  r.interval = s.interval();
  r.plot_points = c.plot_points;

  const Regularizer g = build_laplacian(s.spline().dim, s.spline().per_axis);
  if (g.rows() != s.P()) fail(ErrorCode::mismatch, "surrogate spline metadata does not match P");
  const Eigen::VectorXd theta0 =
      c.theta0 > 0.0 ? Eigen::VectorXd::Constant(s.P(), c.theta0) : midpoint_vector(s);
  if (c.morozov) {
    MorozovResult m = morozov_select(s, data.values, data.sigma, g, theta0, c.gauss_newton,
                                     c.morozov_options);
    r.result = m.result;
    r.morozov = std::move(m);
  } else {
    r.result = gauss_newton(s, data.values, g, c.lambda, theta0, c.gauss_newton);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (c.approximation_error) {
    const int nodes =
        c.approximation_nodes_per_side > 0 ? c.approximation_nodes_per_side : c.data_nodes_per_side;
    r.result.approximation_error = approximation_error(s, r.result.theta, nodes, c.data_dt);
  }
  if (!data.target.empty()) {
    try {
      const ScalarField target = make_target(data.target);
      const SplineBasis basis = build_partition(r.spline.dim, r.spline.per_axis, r.spline.degree);
      r.target_error = relative_field_error(basis, r.result.theta, target, c.plot_points);
    } catch (const Error&) {
      // Free-form descriptions that are not targets have no reference field.
    }
  }
  return r;
}

namespace {
std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_report(const std::string& path, const Reconstruction& r) {
  std::ofstream o(path, std::ios::trunc);
  if (!o) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  const auto& res = r.result;
  o << "# ptomo reconstruction report\n";
  o << "lambda = " << g17(res.lambda) << "\n";
  o << "lambda_selection = " << (r.morozov ? "morozov" : "fixed") << "\n";
  if (r.morozov) {
    o << "morozov_satisfied = " << (r.morozov->satisfied ? "true" : "false") << "\n";
    o << "morozov_probes = " << r.morozov->probes.size() << "\n";
    o << "morozov_monotone = " << (r.morozov->monotone ? "true" : "false") << "\n";
    if (!r.morozov->warning.empty()) o << "warning = " << r.morozov->warning << "\n";
  }
  o << "iterations = " << res.iterations << "\n";
  o << "converged = " << (res.converged ? "true" : "false") << "\n";
  o << "stop_reason = " << res.stop_reason << "\n";
  o << "misfit = " << g17(res.misfit) << "\n";
  o << "sigma = " << g17(r.sigma) << "\n";
  o << "sqrtQ_sigma = " << g17(r.target_misfit) << "\n";
  if (r.target_misfit > 0.0) o << "misfit_ratio = " << g17(res.misfit / r.target_misfit) << "\n";
  if (res.approximation_error) o << "approximation_error = " << g17(*res.approximation_error) << "\n";
  if (r.target_error) o << "relative_l2_error = " << g17(*r.target_error) << "\n";
  if (!r.target.empty()) o << "target = " << r.target << "\n";
  o << "extrapolated = " << (res.extrapolated ? "true" : "false") << "\n";
  o << "seconds = " << g17(r.seconds) << "\n";
  o << "\n# misfit history\n";
  for (std::size_t k = 0; k < res.misfit_history.size(); ++k)
    o << k << "," << g17(res.misfit_history[k]) << "," << g17(res.objective_history[k]) << "\n";
  if (r.morozov) {
    o << "\n# lambda probes\nlambda,misfit\n";
    for (const auto& p : r.morozov->probes) o << g17(p.lambda) << "," << g17(p.misfit) << "\n";
  }
  o << "\n# theta\np,theta\n";
  for (Eigen::Index p = 0; p < res.theta.size(); ++p) o << p << "," << g17(res.theta[p]) << "\n";
  if (!o) fail(ErrorCode::io, "failed writing '" + path + "'");
}

void write_grid(const std::string& path, const Reconstruction& r) {
  std::ofstream o(path, std::ios::trunc);
  if (!o) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  const SplineBasis basis = build_partition(r.spline.dim, r.spline.per_axis, r.spline.degree);
  const std::vector<double> th(r.result.theta.data(),
                               r.result.theta.data() + r.result.theta.size());
  const int n = r.plot_points;
  const double h = 1.0 / (n - 1);
  if (r.spline.dim == 2) {
    o << "x,y,a\n";
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Point x{i * h, j * h, 0.0};
        o << g17(x[0]) << "," << g17(x[1]) << "," << g17(evaluate_diffusivity(basis, th, x)) << "\n";
      }
  } else {
    o << "axis,x,y,z,a\n";
    for (int axis = 0; axis < 3; ++axis)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          Point x{};
          const int u = (axis + 1) % 3, v = (axis + 2) % 3;
          x[axis] = 0.5;
          x[u] = i * h;
          x[v] = j * h;
          o << axis + 1 << "," << g17(x[0]) << "," << g17(x[1]) << "," << g17(x[2]) << ","
            << g17(evaluate_diffusivity(basis, th, x)) << "\n";
        }
  }
  if (!o) fail(ErrorCode::io, "failed writing '" + path + "'");
}

}  // namespace ptomo
