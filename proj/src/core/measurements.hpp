// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "surrogate.hpp"

namespace ptomo {

struct MeasurementSet {
  MeasurementLayout layout;
  Eigen::VectorXd values;
  double sigma = 0.0;   // absolute noise level
  double sigma0 = 0.0;  // relative level it was derived from
  std::uint64_t seed = 0;
  std::string target;   // free-form description of the data source
};

struct NoisyValues {
  Eigen::VectorXd values;
  double sigma = 0.0;
};

/// sigma = sigma0 * max_j values_j; adds i.i.d. N(0, sigma^2) samples drawn
/// from a mt19937_64 generator seeded with `seed`.
NoisyValues add_noise(const Eigen::VectorXd& values, double sigma0, std::uint64_t seed);

/// Self-describing CSV: '#' header lines, then x,y[,z],t,value rows in
/// time-major order.
void write_measurements(const std::string& path, const MeasurementSet& m);
MeasurementSet read_measurements(const std::string& path);

/// Throws ErrorCode::mismatch unless both layouts agree within `tolerance`.
void check_same_layout(const MeasurementLayout& a, const MeasurementLayout& b,
                       double tolerance = 1e-12);

}  // namespace ptomo
