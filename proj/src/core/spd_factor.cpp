// SPDX-License-Identifier: Apache-2.0
#include "spd_factor.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>

#include "error.hpp"

namespace ptomo {

namespace {
constexpr int kBlock = 32;
}

SpdFactor::SpdFactor(const SparseSymMatrix& matrix) : n_(static_cast<int>(matrix.rows())) {
  require(matrix.rows() == matrix.cols(), "SpdFactor: matrix must be square");
  const Eigen::SparseMatrix<double> colmajor = matrix;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt(
      colmajor);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::numerical, "SpdFactor: matrix is not positive definite");

  const Eigen::SparseMatrix<double> lower = llt.matrixL();
  col_ptr_.assign(n_ + 1, 0);
  diag_.assign(n_, 0.0);
  for (int k = 0; k < n_; ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(lower, k); it; ++it) {
      if (it.row() == k) {
        diag_[k] = it.value();
      } else if (it.row() > k) {
        row_idx_.push_back(static_cast<int>(it.row()));
        values_.push_back(it.value());
      }
    }
    col_ptr_[k + 1] = static_cast<int>(row_idx_.size());
    if (!(diag_[k] > 0.0)) fail(ErrorCode::numerical, "SpdFactor: non-positive pivot");
  }
  const auto& idx = llt.permutationP().indices();
  perm_.resize(n_);
  for (int i = 0; i < n_; ++i) perm_[i] = idx[i];
}

template <int W>
void SpdFactor::solve_blocked(Eigen::Ref<Eigen::MatrixXd> rhs) const {
  const Eigen::Index cols = rhs.cols();
  std::vector<double> z(static_cast<std::size_t>(n_) * W);
  for (Eigen::Index c0 = 0; c0 < cols; c0 += W) {
    const int width = static_cast<int>(std::min<Eigen::Index>(W, cols - c0));
    if (width < W) std::fill(z.begin(), z.end(), 0.0);
    for (int c = 0; c < width; ++c) {
      const double* src = rhs.col(c0 + c).data();
      for (int i = 0; i < n_; ++i) z[static_cast<std::size_t>(perm_[i]) * W + c] = src[i];
    }
    // L y = P b
    for (int k = 0; k < n_; ++k) {
      double* zk = z.data() + static_cast<std::size_t>(k) * W;
      const double inv = 1.0 / diag_[k];
      for (int c = 0; c < W; ++c) zk[c] *= inv;
      for (int e = col_ptr_[k]; e < col_ptr_[k + 1]; ++e) {
        double* zi = z.data() + static_cast<std::size_t>(row_idx_[e]) * W;
        const double l = values_[e];
        for (int c = 0; c < W; ++c) zi[c] -= l * zk[c];
      }
    }
    // L^T x = y
    for (int k = n_ - 1; k >= 0; --k) {
      double* zk = z.data() + static_cast<std::size_t>(k) * W;
      for (int e = col_ptr_[k]; e < col_ptr_[k + 1]; ++e) {
        const double* zi = z.data() + static_cast<std::size_t>(row_idx_[e]) * W;
        const double l = values_[e];
        for (int c = 0; c < W; ++c) zk[c] -= l * zi[c];
      }
      const double inv = 1.0 / diag_[k];
      for (int c = 0; c < W; ++c) zk[c] *= inv;
    }
    for (int c = 0; c < width; ++c) {
      double* dst = rhs.col(c0 + c).data();
      for (int i = 0; i < n_; ++i) dst[i] = z[static_cast<std::size_t>(perm_[i]) * W + c];
    }
  }
}

void SpdFactor::solve_in_place(Eigen::Ref<Eigen::MatrixXd> rhs) const {
  require(rhs.rows() == n_, "SpdFactor::solve: row count mismatch");
  if (rhs.cols() == 1)
    solve_blocked<1>(rhs);
  else
    solve_blocked<kBlock>(rhs);
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const {
  Eigen::MatrixXd x = b;
  solve_in_place(x);
  return x.col(0);
}

}  // namespace ptomo
