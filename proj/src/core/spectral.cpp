// SPDX-License-Identifier: Apache-2.0
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "error.hpp"

namespace ptomo {

ParameterInterval::ParameterInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  require(std::isfinite(lo) && std::isfinite(hi), "parameter interval: ends must be finite");
  require(hi > lo, "parameter interval: upper end must exceed lower end");
}

double recurrence_coefficient(const ParameterInterval& e, int r) {
  const double rr = r;
  return e.half_width() * rr / std::sqrt(4.0 * rr * rr - 1.0);
}

void legendre_table(const ParameterInterval& e, int max_degree, double x,
                    std::span<double> values, std::span<double> derivatives) {
  const double c = e.center();
  values[0] = 1.0;
  derivatives[0] = 0.0;
  if (max_degree == 0) return;
  const double b1 = recurrence_coefficient(e, 1);
  values[1] = (x - c) / b1;
  derivatives[1] = 1.0 / b1;
  for (int r = 1; r < max_degree; ++r) {
    const double br = recurrence_coefficient(e, r);
    const double bn = recurrence_coefficient(e, r + 1);
    values[r + 1] = ((x - c) * values[r] - br * values[r - 1]) / bn;
    derivatives[r + 1] =
        (values[r] + (x - c) * derivatives[r] - br * derivatives[r - 1]) / bn;
  }
}

PolyValue legendre_eval(const ParameterInterval& e, int degree, double x) {
  require(degree >= 0, "legendre_eval: negative degree");
  std::vector<double> v(degree + 1), d(degree + 1);
  legendre_table(e, degree, x, v, d);
  return {v[degree], d[degree]};
}

DegreeMatrix::DegreeMatrix(int parameters, int total_degree, std::vector<std::int64_t> row_ptr,
                           std::vector<std::int32_t> coords, std::vector<std::int32_t> degrees)
    : parameters_(parameters),
      total_degree_(total_degree),
      row_ptr_(std::move(row_ptr)),
      coords_(std::move(coords)),
      degrees_(std::move(degrees)) {
  require(!row_ptr_.empty() && row_ptr_.front() == 0, "degree matrix: malformed row pointer");
  require(row_ptr_.back() == static_cast<std::int64_t>(coords_.size()) &&
              coords_.size() == degrees_.size(),
          "degree matrix: inconsistent storage");
  for (std::size_t k = 0; k < coords_.size(); ++k)
    require(coords_[k] >= 0 && coords_[k] < parameters_ && degrees_[k] > 0,
            "degree matrix: entry out of range");
}

int DegreeMatrix::row_sum(std::int64_t j) const {
  int s = 0;
  for (auto d : row_degrees(j)) s += d;
  return s;
}

int DegreeMatrix::entry(std::int64_t j, int p) const {
  const auto cs = row_coords(j);
  const auto ds = row_degrees(j);
  for (std::size_t k = 0; k < cs.size(); ++k)
    if (cs[k] == p) return ds[k];
  return 0;
}

DegreeMatrix DegreeMatrix::select_rows(std::span<const std::int64_t> rows) const {
  std::vector<std::int64_t> ptr{0};
  std::vector<std::int32_t> cs, ds;
  for (auto j : rows) {
    require(j >= 0 && j < this->rows(), "select_rows: row out of range");
    const auto rc = row_coords(j);
    const auto rd = row_degrees(j);
    cs.insert(cs.end(), rc.begin(), rc.end());
    ds.insert(ds.end(), rd.begin(), rd.end());
    ptr.push_back(static_cast<std::int64_t>(cs.size()));
  }
  return DegreeMatrix(parameters_, total_degree_, std::move(ptr), std::move(cs), std::move(ds));
}

std::int64_t total_degree_count(int parameters, int total_degree) {
  require(parameters >= 1, "total degree space: need at least one parameter");
  require(total_degree >= 0, "total degree space: negative degree");
  __int128 c = 1;
  for (int k = 1; k <= total_degree; ++k) {
    c = c * (parameters + k) / k;
    if (c > std::numeric_limits<std::int64_t>::max())
      fail(ErrorCode::overflow, "total degree space: basis size overflows for P=" +
                                    std::to_string(parameters) +
                                    ", n=" + std::to_string(total_degree));
  }
  return static_cast<std::int64_t>(c);
}

std::int64_t nnz_lambda(int parameters, int total_degree) {
  if (total_degree == 0) return 0;
  const __int128 v =
      static_cast<__int128>(parameters) * total_degree_count(parameters, total_degree - 1);
  if (v > std::numeric_limits<std::int64_t>::max())
    fail(ErrorCode::overflow, "nnz_lambda: count overflows");
  return static_cast<std::int64_t>(v);
}

namespace {

struct Generator {
  int parameters;
  std::vector<std::int64_t>& ptr;
  std::vector<std::int32_t>& cs;
  std::vector<std::int32_t>& ds;
  std::vector<std::pair<int, int>> stack;

  // Emits every multi-index of exactly `remaining` additional degree using
  // coordinates >= start, in lexicographically descending order.
  void run(int start, int remaining) {
    if (remaining == 0) {
      for (const auto& [p, d] : stack) {
        cs.push_back(p);
        ds.push_back(d);
      }
      ptr.push_back(static_cast<std::int64_t>(cs.size()));
      return;
    }
    for (int p = start; p < parameters; ++p)
      for (int d = remaining; d >= 1; --d) {
        stack.emplace_back(p, d);
        run(p + 1, remaining - d);
        stack.pop_back();
      }
  }
};

struct RowKeyHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::vector<std::int32_t> row_key(const DegreeMatrix& lambda, std::int64_t j) {
  std::vector<std::int32_t> key;
  const auto cs = lambda.row_coords(j);
  const auto ds = lambda.row_degrees(j);
  key.reserve(2 * cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    key.push_back(cs[k]);
    key.push_back(ds[k]);
  }
  return key;
}

}  // namespace

DegreeMatrix total_degree_indices(int parameters, int total_degree) {
  const std::int64_t n_rows = total_degree_count(parameters, total_degree);
  const std::int64_t n_nnz = nnz_lambda(parameters, total_degree);
  require(n_rows <= std::numeric_limits<std::int32_t>::max(),
          "total degree space: basis too large to store");
  std::vector<std::int64_t> ptr{0};
  std::vector<std::int32_t> cs, ds;
  ptr.reserve(n_rows + 1);
  cs.reserve(n_nnz);
  ds.reserve(n_nnz);
  Generator gen{parameters, ptr, cs, ds, {}};
  for (int d = 0; d <= total_degree; ++d) gen.run(0, d);
  return DegreeMatrix(parameters, total_degree, std::move(ptr), std::move(cs), std::move(ds));
}

std::vector<TripleEntry> assemble_triple_products(const DegreeMatrix& lambda,
                                                  const ParameterInterval& e) {
  std::unordered_map<std::vector<std::int32_t>, std::int64_t, RowKeyHash> index;
  index.reserve(static_cast<std::size_t>(lambda.rows()) * 2);
  for (std::int64_t j = 0; j < lambda.rows(); ++j) index.emplace(row_key(lambda, j), j);

  std::vector<std::vector<TripleEntry>> per_p(lambda.parameters());
  std::vector<std::int32_t> key;
  for (std::int64_t j = 0; j < lambda.rows(); ++j) {
    const auto cs = lambda.row_coords(j);
    const auto ds = lambda.row_degrees(j);
    if (lambda.row_sum(j) >= lambda.total_degree()) continue;
    for (int p = 0; p < lambda.parameters(); ++p) {
      // Raise the degree of coordinate p by one and look the row up.
      key.clear();
      int r = 0;
      bool placed = false;
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (!placed && cs[k] > p) {
          key.push_back(p);
          key.push_back(1);
          placed = true;
        }
        key.push_back(cs[k]);
        if (cs[k] == p) {
          r = ds[k];
          key.push_back(ds[k] + 1);
          placed = true;
        } else {
          key.push_back(ds[k]);
        }
      }
      if (!placed) {
        key.push_back(p);
        key.push_back(1);
      }
      const auto it = index.find(key);
      if (it == index.end()) continue;
      per_p[p].push_back({p, j, it->second, recurrence_coefficient(e, r + 1)});
    }
  }
  std::vector<TripleEntry> out;
  for (auto& v : per_p) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> assemble_Y(
    int p, const DegreeMatrix& lambda, const ParameterInterval& e) {
  require(p >= 0 && p < lambda.parameters(), "assemble_Y: parameter index out of range");
  using T = Eigen::Triplet<double, std::int64_t>;
  std::vector<T> t;
  const std::int64_t n = lambda.rows();
  for (std::int64_t j = 0; j < n; ++j) t.emplace_back(j, j, e.center());
  for (const auto& te : assemble_triple_products(lambda, e)) {
    if (te.p != p) continue;
    t.emplace_back(te.lower, te.upper, te.value);
    t.emplace_back(te.upper, te.lower, te.value);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> y(n, n);
  y.setFromTriplets(t.begin(), t.end());
  return y;
}

namespace {

struct UnivariateTable {
  int width;
  std::vector<double> values, derivatives;
};

UnivariateTable tabulate(const DegreeMatrix& lambda, const ParameterInterval& e,
                         std::span<const double> theta) {
  require(theta.size() == static_cast<std::size_t>(lambda.parameters()),
          "parameter vector length does not match the degree matrix");
  int max_deg = 0;
  for (auto d : lambda.degrees()) max_deg = std::max(max_deg, static_cast<int>(d));
  UnivariateTable t{max_deg + 1, {}, {}};
  t.values.resize(theta.size() * t.width);
  t.derivatives.resize(theta.size() * t.width);
  for (std::size_t p = 0; p < theta.size(); ++p)
    legendre_table(e, max_deg, theta[p],
                   std::span<double>(t.values.data() + p * t.width, t.width),
                   std::span<double>(t.derivatives.data() + p * t.width, t.width));
  return t;
}

}  // namespace

Eigen::VectorXd eval_phi(const DegreeMatrix& lambda, const ParameterInterval& e,
                         std::span<const double> theta) {
  const UnivariateTable t = tabulate(lambda, e, theta);
  Eigen::VectorXd phi(lambda.rows());
  const auto& ptr = lambda.row_ptr();
  const auto& cs = lambda.coords();
  const auto& ds = lambda.degrees();
  for (std::int64_t j = 0; j < lambda.rows(); ++j) {
    double v = 1.0;
    for (auto k = ptr[j]; k < ptr[j + 1]; ++k) v *= t.values[cs[k] * t.width + ds[k]];
    phi[j] = v;
  }
  return phi;
}

BasisJacobian eval_basis_jacobian(const DegreeMatrix& lambda, const ParameterInterval& e,
                                  std::span<const double> theta) {
  const UnivariateTable t = tabulate(lambda, e, theta);
  BasisJacobian jac;
  jac.values.resize(lambda.nnz());
  const auto& ptr = lambda.row_ptr();
  const auto& cs = lambda.coords();
  const auto& ds = lambda.degrees();
  for (std::int64_t j = 0; j < lambda.rows(); ++j) {
    for (auto k = ptr[j]; k < ptr[j + 1]; ++k) {
      double v = t.derivatives[cs[k] * t.width + ds[k]];
      for (auto q = ptr[j]; q < ptr[j + 1]; ++q)
        if (q != k) v *= t.values[cs[q] * t.width + ds[q]];
      jac.values[k] = v;
    }
  }
  return jac;
}

}  // namespace ptomo
