// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "mesh.hpp"
#include "spectral.hpp"
#include "stepper.hpp"

namespace ptomo {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Measurement coordinates in time-major order: q = (time index) * Q_s + (space index).
struct MeasurementLayout {
  int dim = 2;
  std::vector<Point> spatial;
  std::vector<double> times;

  int spatial_count() const { return static_cast<int>(spatial.size()); }
  int time_count() const { return static_cast<int>(times.size()); }
  int size() const { return spatial_count() * time_count(); }
  Point point(int q) const { return spatial[q % spatial_count()]; }
  double time(int q) const { return times[q / spatial_count()]; }

  bool operator==(const MeasurementLayout&) const = default;
};

/// Boundary nodes of the uniform grid with `per_side` points per axis,
/// corners included once, in grid index order.
std::vector<Point> boundary_grid_points(int dim, int per_side);

/// t = first, first + step, ... (count values).
std::vector<double> time_grid(double first, double step, int count);

struct SplineMeta {
  int dim = 2;
  int per_axis = 0;
  int degree = 0;

  bool operator==(const SplineMeta&) const = default;
};

struct Provenance {
  int nodes_per_side = 0;
  double dt = 0.0;
  double final_time = 0.0;
  double flux = 0.0;

  bool operator==(const Provenance&) const = default;
};

/// U(theta) = V phi(theta) on the measurement coordinates.
class ParametricSurrogate {
 public:
  ParametricSurrogate() = default;
  ParametricSurrogate(RowMatrix v, DegreeMatrix lambda, ParameterInterval interval,
                      MeasurementLayout layout, SplineMeta spline, Provenance provenance);

  int Q() const { return static_cast<int>(v_.rows()); }
  std::int64_t N() const { return v_.cols(); }
  int P() const { return lambda_.parameters(); }
  int total_degree() const { return lambda_.total_degree(); }

  const RowMatrix& V() const { return v_; }
  const DegreeMatrix& lambda() const { return lambda_; }
  const ParameterInterval& interval() const { return interval_; }
  const MeasurementLayout& layout() const { return layout_; }
  const SplineMeta& spline() const { return spline_; }
  const Provenance& provenance() const { return provenance_; }

  /// Sets *extrapolated when some coordinate of theta lies outside the closed box.
  Eigen::VectorXd eval_U(std::span<const double> theta, bool* extrapolated = nullptr) const;
  /// Q x P Jacobian.
  Eigen::MatrixXd eval_JU(std::span<const double> theta, bool* extrapolated = nullptr) const;

  /// Keeps the `keep` columns of largest norm (the constant column always).
  ParametricSurrogate truncate(std::int64_t keep) const;

 private:
  void check_theta(std::span<const double> theta, bool* extrapolated) const;

  RowMatrix v_;
  DegreeMatrix lambda_;
  ParameterInterval interval_;
  MeasurementLayout layout_;
  SplineMeta spline_;
  Provenance provenance_;
};

/// Fills V row blocks from streamed snapshots. Feed it through
/// semi_implicit_solve's observer; snapshot index k fills the rows of time k.
class SurrogateBuilder {
 public:
  SurrogateBuilder(const Mesh& mesh, MeasurementLayout layout, std::int64_t basis_size);

  void add_snapshot(std::size_t time_index, const Eigen::MatrixXd& coefficients);
  SnapshotObserver observer();
  bool complete() const;

  ParametricSurrogate finish(DegreeMatrix lambda, ParameterInterval interval, SplineMeta spline,
                             Provenance provenance);

 private:
  MeasurementLayout layout_;
  std::vector<PointStencil> stencils_;
  RowMatrix v_;
  std::vector<bool> filled_;
  int nodes_ = 0;
};

/// Rows of V from stored snapshots; every layout time must match one
/// snapshot stamp within 1e-12.
ParametricSurrogate extract_surrogate(const SolutionSnapshots& snapshots, const Mesh& mesh,
                                      const MeasurementLayout& layout, DegreeMatrix lambda,
                                      ParameterInterval interval, SplineMeta spline,
                                      Provenance provenance);

/// Nodal snapshots sampled on the layout, time-major.
Eigen::VectorXd sample_layout(const Mesh& mesh, const NodalSnapshots& snapshots,
                              const MeasurementLayout& layout);

/// Checks every layout point lies on the boundary of the unit square/cube.
void check_boundary_layout(const MeasurementLayout& layout, double tolerance = 1e-12);

}  // namespace ptomo
