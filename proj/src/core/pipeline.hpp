// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "config.hpp"
#include "measurements.hpp"

namespace ptomo {

/// Forward build, truncated to `keep` columns when requested.
ParametricSurrogate run_forward(const RunConfig& c, ForwardStats* stats = nullptr);

/// Fine-mesh Crank-Nicolson data for the configured target plus noise.
/// An empty `target` uses the one from the config.
MeasurementSet run_simulate(const RunConfig& c, const std::string& target = "");

struct Reconstruction {
  ReconstructionResult result;
  std::optional<MorozovResult> morozov;
  double sigma = 0.0;
  double target_misfit = 0.0;           // sqrt(Q) * sigma
  std::optional<double> target_error;   // relative L2 error against the data's target
  std::string target;
  SplineMeta spline;
  ParameterInterval interval;
  int plot_points = 101;
  double seconds = 0.0;
};

Reconstruction run_reconstruct(const RunConfig& c, const ParametricSurrogate& surrogate,
                               const MeasurementSet& data);

void write_report(const std::string& path, const Reconstruction& r);

/// a(x; theta*) on a regular grid: x,y,a in 2D; the three axis mid-planes
/// as axis,x,y,z,a in 3D.
void write_grid(const std::string& path, const Reconstruction& r);

}  // namespace ptomo
