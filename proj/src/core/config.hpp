// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forward.hpp"
#include "inverse.hpp"
#include "splines.hpp"

namespace ptomo {

/// Named target diffusivities: smooth-2d, piecewise-2d, smooth-3d. Anything
/// else is parsed as an expression over x1, x2, x3.
ScalarField make_target(const std::string& name_or_expression);

/// Plain-text experiment description. Sections and keys:
///
///   [problem]     dim, nodes_per_side, dt, final_time, flux
///   [splines]     per_axis, degree
///   [spectral]    lo, hi, total_degree, keep
///   [measurement] points_per_side, first_time, time_step, time_count, times
///   [data]        target, nodes_per_side, dt, sigma0, seed
///   [inverse]     lambda, theta0, max_iterations, step_tolerance,
///                 objective_tolerance, morozov_log10_lo, morozov_log10_hi,
///                 approximation_error, approximation_nodes_per_side,
///                 plot_points
///   [output]      surrogate, measurements, report, grid
///
/// Lines are `key = value`; '#' and ';' start comments.
struct RunConfig {
  int dim = 2;
  int nodes_per_side = 37;
  double dt = 1e-3;
  double final_time = 0.5;
  double flux = 20.0;

  int spline_per_axis = 14;
  int spline_degree = 2;

  double lo = 0.5;
  double hi = 2.0;
  int total_degree = 2;
  std::int64_t keep = 0;  // 0 keeps every column

  int points_per_side = 10;
  double first_time = 0.01;
  double time_step = 0.04;
  int time_count = 13;
  std::vector<double> times;  // explicit list; overrides the grid when set

  std::string target = "smooth-2d";
  int data_nodes_per_side = 129;
  double data_dt = 1e-3;
  double sigma0 = 0.001;
  std::uint64_t seed = 1;

  bool morozov = true;
  double lambda = 0.025;
  double theta0 = 0.0;  // 0 means the interval midpoint
  GaussNewtonOptions gauss_newton;
  MorozovOptions morozov_options;
  bool approximation_error = false;
  int approximation_nodes_per_side = 0;  // 0 means data_nodes_per_side
  int plot_points = 101;

  std::string surrogate_path = "surrogate.bin";
  std::string measurements_path = "measurements.csv";
  std::string report_path = "report.txt";
  std::string grid_path = "reconstruction.csv";

  ForwardSetup forward_setup() const;
  MeasurementLayout layout() const;
  std::vector<double> measurement_times() const;
};

/// Reference experiment constants for dim = 2 or 3.
RunConfig default_config(int dim);

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Applies one key; throws with `where` prefixed to the message.
void set_config_value(RunConfig& c, const std::string& section, const std::string& key,
                      const std::string& value, const std::string& where = "");

/// Cross-field checks (times on the step grid inside (0, T), sizes positive).
void validate_config(const RunConfig& c);

/// The configuration in file syntax; parse_config reads it back unchanged.
std::string describe_config(const RunConfig& c);

}  // namespace ptomo
