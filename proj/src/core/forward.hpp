// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>

#include "splines.hpp"
#include "surrogate.hpp"

namespace ptomo {

/// Everything the parametric forward build needs.
struct ForwardSetup {
  int dim = 2;
  int spline_per_axis = 14;
  int spline_degree = 2;
  ParameterInterval interval{0.5, 2.0};
  int total_degree = 2;
  int nodes_per_side = 37;
  double dt = 1e-3;
  double final_time = 0.5;
  double flux = 20.0;
  MeasurementLayout layout;
};

struct ForwardStats {
  int M = 0;
  int P = 0;
  std::int64_t N = 0;
  std::int64_t nnz_lambda = 0;
  std::int64_t nnz_S = 0;
  std::int64_t nnz_A = 0;
  double eta = 0.0;
  long steps = 0;
  double assembly_seconds = 0.0;
  double stepping_seconds = 0.0;
};

/// 36 (2D) or 152 (3D) boundary points and t = 0.01, 0.05, ..., 0.49.
MeasurementLayout default_layout(int dim);

/// Assembles the parametric operator, steps it and extracts V.
ParametricSurrogate build_surrogate(const ForwardSetup& setup, ForwardStats* stats = nullptr);

/// Noiseless boundary data of the non-parametric problem with coefficient
/// `diffusivity`, by Crank-Nicolson on its own mesh.
Eigen::VectorXd simulate_boundary_data(int dim, int nodes_per_side, double dt, double final_time,
                                       double flux, const ScalarField& diffusivity,
                                       const MeasurementLayout& layout);

}  // namespace ptomo
