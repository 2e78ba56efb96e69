// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ptomo {

/// Parameter interval E = (lo, hi), lo > 0. The polynomial family is
/// orthonormal with respect to the uniform probability measure on E.
struct ParameterInterval {
  double lo = 0.5;
  double hi = 2.0;

  ParameterInterval() = default;
  ParameterInterval(double lo_, double hi_);

  double center() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Off-diagonal coefficient b_r = h r / sqrt(4 r^2 - 1) of the three-term
/// recurrence x p_r = b_{r+1} p_{r+1} + c p_r + b_r p_{r-1}.
double recurrence_coefficient(const ParameterInterval& e, int r);

struct PolyValue {
  double value;
  double derivative;
};

PolyValue legendre_eval(const ParameterInterval& e, int degree, double x);

/// Values and derivatives of degrees 0..max_degree at x.
void legendre_table(const ParameterInterval& e, int max_degree, double x,
                    std::span<double> values, std::span<double> derivatives);

/// Multi-index table stored row-compressed: row j lists the coordinates p
/// with nonzero degree, ascending in p. Row 0 is the constant polynomial.
class DegreeMatrix {
 public:
  DegreeMatrix() = default;
  DegreeMatrix(int parameters, int total_degree, std::vector<std::int64_t> row_ptr,
               std::vector<std::int32_t> coords, std::vector<std::int32_t> degrees);

  int parameters() const { return parameters_; }
  int total_degree() const { return total_degree_; }
  std::int64_t rows() const { return static_cast<std::int64_t>(row_ptr_.size()) - 1; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(coords_.size()); }

  std::span<const std::int32_t> row_coords(std::int64_t j) const {
    return {coords_.data() + row_ptr_[j], static_cast<std::size_t>(row_ptr_[j + 1] - row_ptr_[j])};
  }
  std::span<const std::int32_t> row_degrees(std::int64_t j) const {
    return {degrees_.data() + row_ptr_[j], static_cast<std::size_t>(row_ptr_[j + 1] - row_ptr_[j])};
  }
  int row_sum(std::int64_t j) const;
  int entry(std::int64_t j, int p) const;

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int32_t>& coords() const { return coords_; }
  const std::vector<std::int32_t>& degrees() const { return degrees_; }

  /// Keeps the listed rows (ascending) in order.
  DegreeMatrix select_rows(std::span<const std::int64_t> rows) const;

  bool operator==(const DegreeMatrix&) const = default;

 private:
  int parameters_ = 0;
  int total_degree_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int32_t> coords_;
  std::vector<std::int32_t> degrees_;
};

/// C(P+n, n); throws ErrorCode::overflow when it does not fit in 63 bits.
std::int64_t total_degree_count(int parameters, int total_degree);

/// All multi-indices with row sum <= n in graded lexicographic order:
/// ascending total degree, then descending exponent of the first coordinate
/// where two rows differ.
DegreeMatrix total_degree_indices(int parameters, int total_degree);

/// Closed form P * C(P+n-1, n-1) (0 when n = 0).
std::int64_t nnz_lambda(int parameters, int total_degree);

/// One off-diagonal entry of Y^(p): rows `lower` and `upper` agree except in
/// coordinate p, where the degree of `upper` is one higher.
struct TripleEntry {
  int p;
  std::int64_t lower;
  std::int64_t upper;
  double value;
};

/// Off-diagonal entries of every Y^(p), grouped by p (ascending), each
/// stored once. Diagonals are all equal to the interval midpoint.
std::vector<TripleEntry> assemble_triple_products(const DegreeMatrix& lambda,
                                                  const ParameterInterval& e);

/// Y^(p) as a symmetric sparse N x N matrix (0-based p).
Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> assemble_Y(
    int p, const DegreeMatrix& lambda, const ParameterInterval& e);

/// phi(theta) in R^N.
Eigen::VectorXd eval_phi(const DegreeMatrix& lambda, const ParameterInterval& e,
                         std::span<const double> theta);

/// Basis Jacobian with exactly the sparsity pattern of lambda: values[k] is
/// the derivative of phi_j with respect to theta_{coords[k]} for the k-th
/// stored entry of the degree matrix.
struct BasisJacobian {
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }
};

BasisJacobian eval_basis_jacobian(const DegreeMatrix& lambda, const ParameterInterval& e,
                                  std::span<const double> theta);

}  // namespace ptomo
