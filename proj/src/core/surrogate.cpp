// SPDX-License-Identifier: Apache-2.0
#include "surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace ptomo {

std::vector<Point> boundary_grid_points(int dim, int per_side) {
  require(dim == 2 || dim == 3, "boundary points: dimension must be 2 or 3");
  require(per_side >= 2, "boundary points: need at least 2 points per side");
  std::vector<Point> out;
  const int nz = dim == 3 ? per_side : 1;
  const double h = 1.0 / (per_side - 1);
  auto on_edge = [per_side](int i) { return i == 0 || i == per_side - 1; };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < per_side; ++j)
      for (int i = 0; i < per_side; ++i)
        if (on_edge(i) || on_edge(j) || (dim == 3 && on_edge(k)))
          out.push_back({i * h, j * h, dim == 3 ? k * h : 0.0});
  return out;
}

std::vector<double> time_grid(double first, double step, int count) {
  require(count >= 1, "time grid: need at least one time");
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = first + k * step;
  return t;
}

void check_boundary_layout(const MeasurementLayout& layout, double tolerance) {
  for (const auto& x : layout.spatial) {
    bool inside = true, on_boundary = false;
    for (int a = 0; a < layout.dim; ++a) {
      if (x[a] < -tolerance || x[a] > 1.0 + tolerance) inside = false;
      if (std::abs(x[a]) <= tolerance || std::abs(x[a] - 1.0) <= tolerance) on_boundary = true;
    }
    if (!inside || !on_boundary)
      fail(ErrorCode::invalid_argument, "measurement point (" + std::to_string(x[0]) + ", " +
                                            std::to_string(x[1]) + ", " + std::to_string(x[2]) +
                                            ") is not on the boundary");
  }
}

ParametricSurrogate::ParametricSurrogate(RowMatrix v, DegreeMatrix lambda,
                                         ParameterInterval interval, MeasurementLayout layout,
                                         SplineMeta spline, Provenance provenance)
    : v_(std::move(v)),
      lambda_(std::move(lambda)),
      interval_(interval),
      layout_(std::move(layout)),
      spline_(spline),
      provenance_(provenance) {
  if (v_.cols() != lambda_.rows())
    fail(ErrorCode::mismatch, "surrogate: V has " + std::to_string(v_.cols()) +
                                  " columns but the degree matrix has " +
                                  std::to_string(lambda_.rows()) + " rows");
  if (v_.rows() != layout_.size())
    fail(ErrorCode::mismatch, "surrogate: V has " + std::to_string(v_.rows()) +
                                  " rows but the layout has " + std::to_string(layout_.size()) +
                                  " coordinates");
}

void ParametricSurrogate::check_theta(std::span<const double> theta, bool* extrapolated) const {
  if (theta.size() != static_cast<std::size_t>(P()))
    fail(ErrorCode::mismatch, "parameter vector has length " + std::to_string(theta.size()) +
                                  ", expected " + std::to_string(P()));
  if (extrapolated)
    *extrapolated = std::any_of(theta.begin(), theta.end(),
                                [&](double x) { return !interval_.contains(x); });
}

Eigen::VectorXd ParametricSurrogate::eval_U(std::span<const double> theta,
                                            bool* extrapolated) const {
  check_theta(theta, extrapolated);
  const Eigen::VectorXd phi = eval_phi(lambda_, interval_, theta);
  return v_ * phi;
}

Eigen::MatrixXd ParametricSurrogate::eval_JU(std::span<const double> theta,
                                             bool* extrapolated) const {
  check_theta(theta, extrapolated);
  const BasisJacobian jphi = eval_basis_jacobian(lambda_, interval_, theta);
  const auto& ptr = lambda_.row_ptr();
  const auto& cs = lambda_.coords();
  RowMatrix ju = RowMatrix::Zero(Q(), P());
  for (int q = 0; q < Q(); ++q) {
    const double* vrow = v_.row(q).data();
    double* jrow = ju.row(q).data();
    for (std::int64_t j = 1; j < N(); ++j) {
      const double v = vrow[j];
      for (auto k = ptr[j]; k < ptr[j + 1]; ++k) jrow[cs[k]] += v * jphi.values[k];
    }
  }
  return ju;
}

ParametricSurrogate ParametricSurrogate::truncate(std::int64_t keep) const {
  require(keep >= 1 && keep <= N(), "truncate: keep must lie in [1, N]");
  std::vector<double> norms(N());
  for (std::int64_t j = 0; j < N(); ++j) norms[j] = v_.col(j).squaredNorm();
  std::vector<std::int64_t> order(N() - 1);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) { return norms[a] > norms[b]; });
  std::vector<std::int64_t> rows{0};
  rows.insert(rows.end(), order.begin(), order.begin() + (keep - 1));
  std::sort(rows.begin(), rows.end());
  RowMatrix v(Q(), keep);
  for (std::int64_t c = 0; c < keep; ++c) v.col(c) = v_.col(rows[c]);
  return ParametricSurrogate(std::move(v), lambda_.select_rows(rows), interval_, layout_, spline_,
                             provenance_);
}

SurrogateBuilder::SurrogateBuilder(const Mesh& mesh, MeasurementLayout layout,
                                   std::int64_t basis_size)
    : layout_(std::move(layout)), nodes_(mesh.node_count()) {
  require(layout_.dim == mesh.dim, "surrogate: layout and mesh dimensions differ");
  check_boundary_layout(layout_);
  stencils_.reserve(layout_.spatial.size());
  for (const auto& x : layout_.spatial) stencils_.push_back(locate(mesh, x));
  v_ = RowMatrix::Zero(layout_.size(), basis_size);
  filled_.assign(layout_.times.size(), false);
}

void SurrogateBuilder::add_snapshot(std::size_t time_index, const Eigen::MatrixXd& u) {
  require(time_index < filled_.size(), "surrogate: snapshot index out of range");
  if (u.rows() != nodes_ || u.cols() != v_.cols())
    fail(ErrorCode::mismatch, "surrogate: snapshot table has the wrong shape");
  const int qs = layout_.spatial_count();
  for (int s = 0; s < qs; ++s) {
    const auto& st = stencils_[s];
    double* row = v_.row(static_cast<Eigen::Index>(time_index) * qs + s).data();
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < st.count; ++k) acc += st.weights[k] * u(st.nodes[k], j);
      row[j] = acc;
    }
  }
  filled_[time_index] = true;
}

SnapshotObserver SurrogateBuilder::observer() {
  return [this](std::size_t index, double, const Eigen::MatrixXd& u) { add_snapshot(index, u); };
}

bool SurrogateBuilder::complete() const {
  return std::all_of(filled_.begin(), filled_.end(), [](bool b) { return b; });
}

ParametricSurrogate SurrogateBuilder::finish(DegreeMatrix lambda, ParameterInterval interval,
                                             SplineMeta spline, Provenance provenance) {
  if (!complete()) fail(ErrorCode::invalid_argument, "surrogate: some measurement times were never filled");
  return ParametricSurrogate(std::move(v_), std::move(lambda), interval, layout_, spline,
                             provenance);
}

ParametricSurrogate extract_surrogate(const SolutionSnapshots& snapshots, const Mesh& mesh,
                                      const MeasurementLayout& layout, DegreeMatrix lambda,
                                      ParameterInterval interval, SplineMeta spline,
                                      Provenance provenance) {
  SurrogateBuilder builder(mesh, layout, lambda.rows());
  for (std::size_t k = 0; k < layout.times.size(); ++k) {
    std::size_t found = snapshots.times.size();
    for (std::size_t i = 0; i < snapshots.times.size(); ++i)
      if (std::abs(snapshots.times[i] - layout.times[k]) <= 1e-12) found = i;
    if (found == snapshots.times.size())
      fail(ErrorCode::invalid_argument,
           "surrogate: no snapshot at measurement time " + std::to_string(layout.times[k]));
    builder.add_snapshot(k, snapshots.tables[found]);
  }
  return builder.finish(std::move(lambda), interval, spline, provenance);
}

Eigen::VectorXd sample_layout(const Mesh& mesh, const NodalSnapshots& snapshots,
                              const MeasurementLayout& layout) {
  const int qs = layout.spatial_count();
  std::vector<PointStencil> stencils;
  for (const auto& x : layout.spatial) stencils.push_back(locate(mesh, x));
  Eigen::VectorXd out(layout.size());
  for (int k = 0; k < layout.time_count(); ++k) {
    std::size_t found = snapshots.times.size();
    for (std::size_t i = 0; i < snapshots.times.size(); ++i)
      if (std::abs(snapshots.times[i] - layout.times[k]) <= 1e-12) found = i;
    if (found == snapshots.times.size())
      fail(ErrorCode::invalid_argument,
           "no snapshot at measurement time " + std::to_string(layout.times[k]));
    const Eigen::VectorXd& u = snapshots.values[found];
    for (int s = 0; s < qs; ++s) {
      double acc = 0.0;
      for (int i = 0; i < stencils[s].count; ++i) acc += stencils[s].weights[i] * u[stencils[s].nodes[i]];
      out[k * qs + s] = acc;
    }
  }
  return out;
}

}  // namespace ptomo
