// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mesh.hpp"

namespace ptomo {

/// Standard uniform (cardinal) B-spline of degree s, supported on [0, s+1].
double bspline_value(int degree, double x);

/// Nonzero tensor-product spline values at one point.
struct SplineStencil {
  std::vector<int> indices;
  std::vector<double> values;
};

/// Tensor-product B-spline partition of unity on [0,1]^dim built from clamped
/// uniform knot vectors: `per_axis` functions of degree `degree` per axis.
/// Function p has per-axis indices (p % m, (p / m) % m, p / m^2).
class SplineBasis {
 public:
  SplineBasis(int dim, int per_axis, int degree);

  int dim() const { return dim_; }
  int per_axis() const { return m_; }
  int degree() const { return s_; }
  int size() const { return size_; }
  const std::vector<double>& knots() const { return knots_; }

  /// Values of the univariate functions at x: writes degree+1 values and
  /// returns the index of the first one.
  int univariate_nonzero(double x, std::span<double> values) const;
  double univariate(int i, double x) const;

  void nonzero(const Point& x, SplineStencil& out) const;
  double value(int p, const Point& x) const;

  /// Per-axis support [lo, hi] of function p.
  std::array<std::array<double, 2>, 3> support(int p) const;

 private:
  int dim_, m_, s_, size_;
  std::vector<double> knots_;
};

SplineBasis build_partition(int dim, int per_axis, int degree);

/// a(x; theta) = sum_p theta_p psi_p(x).
double evaluate_diffusivity(const SplineBasis& basis, std::span<const double> theta,
                            const Point& x);

using ScalarField = std::function<double(const Point&)>;

/// Relative discrete L2 error of a(.; theta) against `target` over `grid`.
double sample_field_error(const SplineBasis& basis, std::span<const double> theta,
                          const ScalarField& target, std::span<const Point> grid);

/// Uniform sample grid with `per_side` points per axis, including the boundary.
std::vector<Point> uniform_grid(int dim, int per_side);

}  // namespace ptomo
