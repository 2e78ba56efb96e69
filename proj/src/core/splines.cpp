// SPDX-License-Identifier: Apache-2.0
#include "splines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace ptomo {

double bspline_value(int degree, double x) {
  require(degree >= 0, "bspline_value: negative degree");
  if (x < 0.0 || x >= degree + 1.0) return 0.0;
  // Cox-de Boor on the integer knots 0, 1, ..., degree+1.
  std::vector<double> b(degree + 1, 0.0);
  const int cell = static_cast<int>(std::floor(x));
  b[cell] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    for (int i = 0; i + k <= degree; ++i) {
      const double left = (x - i) / k * b[i];
      const double right = (i + k + 1 - x) / k * b[i + 1];
      b[i] = left + right;
    }
  }
  return b[0];
}

SplineBasis::SplineBasis(int dim, int per_axis, int degree)
    : dim_(dim), m_(per_axis), s_(degree) {
  require(dim >= 1 && dim <= 3, "build_partition: dim must be 1, 2 or 3");
  require(degree >= 0, "build_partition: negative degree");
  if (per_axis < degree + 1)
    fail(ErrorCode::invalid_argument,
         "build_partition: need at least degree+1 = " + std::to_string(degree + 1) +
             " functions per axis, got " + std::to_string(per_axis));
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= m_;
  const int spans = m_ - s_;
  knots_.assign(m_ + s_ + 1, 0.0);
  for (int k = 0; k <= spans; ++k) knots_[s_ + k] = static_cast<double>(k) / spans;
  for (int k = m_; k <= m_ + s_; ++k) knots_[k] = 1.0;
}

int SplineBasis::univariate_nonzero(double x, std::span<double> values) const {
  const int spans = m_ - s_;
  x = std::clamp(x, 0.0, 1.0);
  int span = s_ + std::min(static_cast<int>(std::floor(x * spans)), spans - 1);
  while (span > s_ && x < knots_[span]) --span;
  while (span < m_ - 1 && x >= knots_[span + 1]) ++span;

  // NURBS-book basis function algorithm on the clamped knot vector.
  double left[8], right[8];
  values[0] = 1.0;
  for (int j = 1; j <= s_; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = values[r] / (right[r + 1] + left[j - r]);
      values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    values[j] = saved;
  }
  return span - s_;
}

double SplineBasis::univariate(int i, double x) const {
  double v[8];
  const int first = univariate_nonzero(x, std::span<double>(v, s_ + 1));
  if (i < first || i > first + s_) return 0.0;
  return v[i - first];
}

void SplineBasis::nonzero(const Point& x, SplineStencil& out) const {
  double v[3][8];
  int first[3] = {0, 0, 0};
  for (int a = 0; a < dim_; ++a) first[a] = univariate_nonzero(x[a], std::span<double>(v[a], s_ + 1));
  const int k = s_ + 1;
  int count = 1;
  for (int a = 0; a < dim_; ++a) count *= k;
  out.indices.resize(count);
  out.values.resize(count);
  for (int c = 0; c < count; ++c) {
    int rem = c;
    int index = 0, stride = 1;
    double value = 1.0;
    for (int a = 0; a < dim_; ++a) {
      const int o = rem % k;
      rem /= k;
      index += (first[a] + o) * stride;
      stride *= m_;
      value *= v[a][o];
    }
    out.indices[c] = index;
    out.values[c] = value;
  }
}

double SplineBasis::value(int p, const Point& x) const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) {
    v *= univariate(p % m_, x[a]);
    p /= m_;
  }
  return v;
}

std::array<std::array<double, 2>, 3> SplineBasis::support(int p) const {
  std::array<std::array<double, 2>, 3> box{};
  for (int a = 0; a < dim_; ++a) {
    const int i = p % m_;
    p /= m_;
    box[a] = {knots_[i], knots_[i + s_ + 1]};
  }
  return box;
}

SplineBasis build_partition(int dim, int per_axis, int degree) {
  require(degree <= 6, "build_partition: degree above 6 is not supported");
  return SplineBasis(dim, per_axis, degree);
}

double evaluate_diffusivity(const SplineBasis& basis, std::span<const double> theta,
                            const Point& x) {
  require(theta.size() == static_cast<std::size_t>(basis.size()),
          "evaluate_diffusivity: parameter vector has wrong length");
  SplineStencil st;
  basis.nonzero(x, st);
  double a = 0.0;
  for (std::size_t k = 0; k < st.indices.size(); ++k) a += theta[st.indices[k]] * st.values[k];
  return a;
}

double sample_field_error(const SplineBasis& basis, std::span<const double> theta,
                          const ScalarField& target, std::span<const Point> grid) {
  double num = 0.0, den = 0.0;
  for (const Point& x : grid) {
    const double t = target(x);
    const double d = evaluate_diffusivity(basis, theta, x) - t;
    num += d * d;
    den += t * t;
  }
  require(den > 0.0, "sample_field_error: target vanishes on the sample grid");
  return std::sqrt(num / den);
}

std::vector<Point> uniform_grid(int dim, int per_side) {
  require(per_side >= 2, "uniform_grid: need at least two points per side");
  const double h = 1.0 / (per_side - 1);
  std::vector<Point> pts;
  const int nz = dim == 3 ? per_side : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < per_side; ++j)
      for (int i = 0; i < per_side; ++i) pts.push_back({i * h, j * h, dim == 3 ? k * h : 0.0});
  return pts;
}

}  // namespace ptomo
