// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "surrogate.hpp"

namespace ptomo {

using Regularizer = Eigen::SparseMatrix<double>;

/// Tensor sum of tridiag(-1, 2, -1) per axis on the dim-dimensional spline
/// coefficient grid with `per_axis` coefficients per axis.
Regularizer build_laplacian(int dim, int per_axis);

struct GaussNewtonOptions {
  int max_iterations = 50;
  double step_tolerance = -1.0;  // negative means 1e-8 * sqrt(P)
  double objective_tolerance = 1e-10;
  int max_halvings = 20;
};

struct ReconstructionResult {
  Eigen::VectorXd theta;
  std::vector<double> misfit_history;     // ||U - data|| at the start and after each accepted step
  std::vector<double> objective_history;  // ||U - data||^2 + lambda^2 ||G theta||^2, same points
  double misfit = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  bool extrapolated = false;  // some evaluation left the parameter box
  std::string stop_reason;
  std::optional<double> approximation_error;
};

/// Box-projected Gauss-Newton for min ||U(theta) - data||^2 + lambda^2 ||G theta||^2.
ReconstructionResult gauss_newton(const ParametricSurrogate& surrogate, const Eigen::VectorXd& data,
                                  const Regularizer& g, double lambda,
                                  const Eigen::VectorXd& theta0,
                                  const GaussNewtonOptions& options = {});

struct MorozovOptions {
  double log10_lo = -6.0;
  double log10_hi = 2.0;
  double band_lo = 0.9;
  double band_hi = 1.1;
  int max_bisections = 40;
};

struct MorozovProbe {
  double lambda;
  double misfit;
};

struct MorozovResult {
  double lambda = 0.0;
  ReconstructionResult result;
  double target = 0.0;  // sqrt(Q) * sigma
  bool satisfied = false;
  bool bracketed = true;
  bool monotone = true;
  std::vector<MorozovProbe> probes;
  std::string warning;
};

/// Bisection on log10(lambda) for a converged misfit within the band
/// around sqrt(Q) * sigma.
MorozovResult morozov_select(const ParametricSurrogate& surrogate, const Eigen::VectorXd& data,
                             double sigma, const Regularizer& g, const Eigen::VectorXd& theta0,
                             const GaussNewtonOptions& gn = {}, const MorozovOptions& options = {});

/// ||U(theta) - U_theta|| where U_theta is Crank-Nicolson boundary data on a
/// mesh with `nodes_per_side` for the coefficient a(.; theta). The problem
/// setup (flux, T, layout) comes from the surrogate.
double approximation_error(const ParametricSurrogate& surrogate, const Eigen::VectorXd& theta,
                           int nodes_per_side, double dt);

/// theta0 = interval midpoint in every coordinate.
Eigen::VectorXd midpoint_vector(const ParametricSurrogate& surrogate);

}  // namespace ptomo
