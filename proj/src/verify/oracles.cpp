// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace ptomo::oracle {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::uint64_t>(c);
}

std::vector<std::vector<int>> multi_indices(int P, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> digit(P, 0);
  for (;;) {
    int sum = 0;
    for (int d : digit) sum += d;
    if (sum <= n) out.push_back(digit);
    int k = 0;
    while (k < P && ++digit[k] > n) digit[k++] = 0;
    if (k == P) break;
  }
  std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int sa = 0, sb = 0;
    for (int d : a) sa += d;
    for (int d : b) sb += d;
    if (sa != sb) return sa < sb;
    return a > b;
  });
  return out;
}

void golub_welsch(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(points);
  weights.resize(points);
  for (int k = 0; k < points; ++k) {
    nodes[k] = es.eigenvalues()[k];
    const double v = es.eigenvectors()(0, k);
    weights[k] = 2.0 * v * v;
  }
}

double legendre(const ParameterInterval& e, int r, double x) {
  const double t = (x - e.center()) / e.half_width();
  return std::sqrt(2.0 * r + 1.0) * std::legendre(static_cast<unsigned>(r), t);
}

double basis_function(const std::vector<int>& index, const ParameterInterval& e,
                      const std::vector<double>& theta) {
  double v = 1.0;
  for (std::size_t p = 0; p < index.size(); ++p) v *= legendre(e, index[p], theta[p]);
  return v;
}

Eigen::MatrixXd triple_product_matrix(int p, const std::vector<std::vector<int>>& indices,
                                      const ParameterInterval& e) {
  const int n_rows = static_cast<int>(indices.size());
  const int P = n_rows ? static_cast<int>(indices[0].size()) : 0;
  int max_deg = 0;
  for (const auto& ix : indices)
    for (int d : ix) max_deg = std::max(max_deg, d);
  const int pts = max_deg + 1;  // exact for degree 2*max_deg + 1
  std::vector<double> xs, ws;
  golub_welsch(pts, xs, ws);

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n_rows, n_rows);
  std::vector<int> counter(P, 0);
  std::vector<double> theta(P);
  for (;;) {
    double w = 1.0;
    for (int q = 0; q < P; ++q) {
      theta[q] = e.center() + e.half_width() * xs[counter[q]];
      w *= 0.5 * ws[counter[q]];  // uniform probability density on E
    }
    Eigen::VectorXd phi(n_rows);
    for (int j = 0; j < n_rows; ++j) phi[j] = basis_function(indices[j], e, theta);
    y.noalias() += (w * theta[p]) * phi * phi.transpose();
    int k = 0;
    while (k < P && ++counter[k] == pts) counter[k++] = 0;
    if (k == P) break;
  }
  return y;
}

std::vector<Eigen::VectorXd> dense_semi_implicit(const Eigen::MatrixXd& mass,
                                                 const std::vector<Eigen::MatrixXd>& a,
                                                 const std::vector<Eigen::MatrixXd>& y,
                                                 double mu, double dt,
                                                 const Eigen::VectorXd& u0_block,
                                                 const std::vector<Eigen::VectorXd>& loads,
                                                 int steps) {
  const Eigen::Index m = mass.rows();
  const Eigen::Index n = y.empty() ? 1 : y[0].rows();
  const Eigen::Index mn = m * n;
  Eigen::MatrixXd a_sum = Eigen::MatrixXd::Zero(m, m);
  for (const auto& ap : a) a_sum += ap;

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(mn, mn);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(mn, mn);
  for (Eigen::Index j = 0; j < n; ++j) {
    lhs.block(j * m, j * m, m, m) = mass + dt * mu * a_sum;
    rhs.block(j * m, j * m, m, m) = mass;
  }
  for (std::size_t p = 0; p < a.size(); ++p)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 0; l < n; ++l)
        if (j != l && y[p](j, l) != 0.0) rhs.block(j * m, l * m, m, m) -= dt * y[p](j, l) * a[p];

  const Eigen::LLT<Eigen::MatrixXd> llt(lhs);
  if (llt.info() != Eigen::Success) fail(ErrorCode::numerical, "dense oracle: LLT failed");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mn);
  u.head(m) = u0_block;
  std::vector<Eigen::VectorXd> out;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd b = rhs * u;
    b.head(m) += dt * loads[k];
    u = llt.solve(b);
    out.push_back(u);
  }
  return out;
}

Eigen::MatrixXd finite_difference_jacobian(const ParametricSurrogate& s,
                                           const std::vector<double>& theta, double h) {
  Eigen::MatrixXd j(s.Q(), s.P());
  for (int p = 0; p < s.P(); ++p) {
    std::vector<double> tp = theta, tm = theta;
    tp[p] += h;
    tm[p] -= h;
    j.col(p) = (s.eval_U(tp) - s.eval_U(tm)) / (2.0 * h);
  }
  return j;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace ptomo::oracle
