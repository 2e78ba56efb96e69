// SPDX-License-Identifier: Apache-2.0
#include "forward.hpp"

#include <algorithm>
#include <chrono>
#include <memory>

#include "error.hpp"
#include "stepper.hpp"

namespace ptomo {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

MeasurementLayout default_layout(int dim) {
  require(dim == 2 || dim == 3, "layout: dimension must be 2 or 3");
  MeasurementLayout layout;
  layout.dim = dim;
  layout.spatial = boundary_grid_points(dim, dim == 2 ? 10 : 6);
  layout.times = time_grid(0.01, 0.04, 13);
  return layout;
}

ParametricSurrogate build_surrogate(const ForwardSetup& setup, ForwardStats* stats) {
  require(setup.dim == setup.layout.dim, "forward: layout dimension differs from the problem");
  require(setup.dt > 0.0 && setup.final_time > 0.0, "forward: dt and T must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  auto mesh = std::make_shared<const Mesh>(build_mesh(setup.dim, setup.nodes_per_side));
  const SplineBasis basis = build_partition(setup.dim, setup.spline_per_axis, setup.spline_degree);
  DegreeMatrix lambda = total_degree_indices(basis.size(), setup.total_degree);
  const ParametricOperator op = build_operator(*mesh, basis, lambda, setup.interval);
  const double t_assembly = seconds_since(t0);

  const ProblemSpec problem = balanced_flux_problem(mesh, setup.flux, setup.final_time);
  const auto t1 = std::chrono::steady_clock::now();
  SurrogateBuilder builder(*mesh, setup.layout, lambda.rows());
  semi_implicit_solve(op, problem, setup.dt, setup.layout.times, builder.observer());
  const double t_stepping = seconds_since(t1);

  if (stats) {
    stats->M = mesh->node_count();
    stats->P = basis.size();
    stats->N = lambda.rows();
    stats->nnz_lambda = lambda.nnz();
    stats->nnz_S = op.nnz_S();
    stats->nnz_A = op.unit_stiffness().nonZeros();
    stats->eta = compute_eta(op.spline_stiffness(), op.unit_stiffness());
    const auto steps = snapshot_steps(setup.layout.times, setup.dt, setup.final_time);
    stats->steps = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());
    stats->assembly_seconds = t_assembly;
    stats->stepping_seconds = t_stepping;
  }
  return builder.finish(std::move(lambda), setup.interval,
                        {setup.dim, setup.spline_per_axis, setup.spline_degree},
                        {setup.nodes_per_side, setup.dt, setup.final_time, setup.flux});
}

Eigen::VectorXd simulate_boundary_data(int dim, int nodes_per_side, double dt, double final_time,
                                       double flux, const ScalarField& diffusivity,
                                       const MeasurementLayout& layout) {
  require(layout.dim == dim, "simulate: layout dimension differs from the problem");
  check_boundary_layout(layout);
  auto mesh = std::make_shared<const Mesh>(build_mesh(dim, nodes_per_side));
  const ProblemSpec problem = balanced_flux_problem(mesh, flux, final_time);
  const NodalSnapshots snaps = crank_nicolson_solve(*mesh, diffusivity, problem, dt, layout.times);
  return sample_layout(*mesh, snaps, layout);
}

}  // namespace ptomo
