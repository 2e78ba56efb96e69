// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "assembly.hpp"

namespace ptomo {

/// Sparse Cholesky factor P K P^T = L L^T of a symmetric positive-definite
/// matrix. The factorization itself is Eigen's simplicial LLT with AMD
/// ordering; the triangular sweeps are done here so that many right-hand
/// sides are processed in cache-sized column blocks.
class SpdFactor {
 public:
  explicit SpdFactor(const SparseSymMatrix& matrix);

  int size() const { return n_; }
  long factor_nnz() const { return static_cast<long>(values_.size()); }

  /// Solves K X = B in place for every column of `rhs`.
  void solve_in_place(Eigen::Ref<Eigen::MatrixXd> rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  template <int W>
  void solve_blocked(Eigen::Ref<Eigen::MatrixXd> rhs) const;

  int n_ = 0;
  std::vector<int> col_ptr_, row_idx_;  // strictly lower part of L, by column
  std::vector<double> values_, diag_;
  std::vector<int> perm_;  // (P b)[perm_[i]] = b[i]
};

}  // namespace ptomo
