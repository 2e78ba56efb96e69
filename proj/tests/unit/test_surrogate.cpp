// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <Eigen/QR>
#include <memory>

#include "container.hpp"
#include "forward.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "surrogate.hpp"

using namespace ptomo;
using ptomo::test::Gen;
using ptomo::test::error_code_of;

namespace {

ParametricSurrogate random_surrogate(Gen& g, int m, int n, bool orthogonal = false) {
  const MeasurementLayout layout = default_layout(2);
  DegreeMatrix lam = total_degree_indices(m * m, n);
  RowMatrix v(layout.size(), lam.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = g.real(-1, 1);
  if (orthogonal) {
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd(v)).householderQ() *
                              Eigen::MatrixXd::Identity(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j) = q.col(j) * (1.0 + j % 7);
  }
  return ParametricSurrogate(std::move(v), std::move(lam), {0.5, 2.0}, layout, {2, m, 1},
                             {9, 0.01, 0.5, 20.0});
}

ForwardSetup toy_setup() {
  ForwardSetup f;
  f.spline_per_axis = 3;
  f.spline_degree = 1;
  f.total_degree = 2;
  f.nodes_per_side = 7;
  f.dt = 0.01;
  f.layout = default_layout(2);
  return f;
}

}  // namespace

TEST_CASE("boundary measurement points") {
  CHECK(boundary_grid_points(2, 10).size() == 36);
  CHECK(boundary_grid_points(3, 6).size() == 152);
  MeasurementLayout l = default_layout(2);
  CHECK(l.size() == 468);
  check_boundary_layout(l);
  l.spatial.push_back({0.5, 0.5, 0.0});
  CHECK(error_code_of([&] { check_boundary_layout(l); }) == ErrorCode::invalid_argument);
  const auto t = time_grid(0.01, 0.04, 13);
  CHECK(t.front() == doctest::Approx(0.01));
  CHECK(t.back() == doctest::Approx(0.49));
}

TEST_CASE("evaluation matches the definition") {
  Gen g(8);
  const ParametricSurrogate s = random_surrogate(g, 2, 3);
  const auto indices = oracle::multi_indices(4, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto theta = g.reals(4, 0.5, 2.0);
    Eigen::VectorXd phi(s.N());
    for (std::int64_t j = 0; j < s.N(); ++j) phi[j] = oracle::basis_function(indices[j], s.interval(), theta);
    const Eigen::VectorXd ref = Eigen::MatrixXd(s.V()) * phi;
    CHECK((s.eval_U(theta) - ref).norm() < 1e-12 * ref.norm());
    const Eigen::MatrixXd fd = oracle::finite_difference_jacobian(s, theta, 1e-6);
    CHECK((s.eval_JU(theta) - fd).cwiseAbs().maxCoeff() < 1e-6 * fd.cwiseAbs().maxCoeff());
  }
  bool ext = false;
  s.eval_U(std::vector<double>{0.5, 2.0, 1.0, 1.0}, &ext);
  CHECK_FALSE(ext);
  s.eval_U(std::vector<double>{0.4, 2.0, 1.0, 1.0}, &ext);
  CHECK(ext);
  CHECK(error_code_of([&] { s.eval_U(std::vector<double>{1.0, 1.0}); }) == ErrorCode::mismatch);
}

TEST_CASE("constructor validates shapes") {
  Gen g(9);
  const ParametricSurrogate s = random_surrogate(g, 2, 2);
  CHECK(error_code_of([&] {
          ParametricSurrogate(s.V().leftCols(3), s.lambda(), s.interval(), s.layout(), s.spline(), s.provenance());
        }) == ErrorCode::mismatch);
  CHECK(error_code_of([&] {
          ParametricSurrogate(s.V().topRows(5), s.lambda(), s.interval(), s.layout(), s.spline(), s.provenance());
        }) == ErrorCode::mismatch);
}

TEST_CASE("truncation") {
  Gen g(10);
  const ParametricSurrogate s = random_surrogate(g, 2, 3, true);
  CHECK(error_code_of([&] { s.truncate(0); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([&] { s.truncate(s.N() + 1); }) == ErrorCode::invalid_argument);
  const auto theta = g.reals(4, 0.5, 2.0);
  const Eigen::VectorXd full = s.eval_U(theta);
  CHECK((s.truncate(s.N()).eval_U(theta) - full).norm() < 1e-12 * full.norm());
  // Columns are orthogonal, so dropping more of them never reduces the error.
  double prev = 0.0;
  for (std::int64_t keep = s.N(); keep >= 1; --keep) {
    const ParametricSurrogate t = s.truncate(keep);
    CHECK(t.N() == keep);
    CHECK(t.lambda().row_sum(0) == 0);
    const double err = (t.eval_U(theta) - full).norm();
    CHECK(err >= prev - 1e-12);
    prev = err;
  }
}

TEST_CASE("builder and batch extraction agree") {
  const ForwardSetup f = toy_setup();
  auto mesh = std::make_shared<const Mesh>(build_mesh(2, f.nodes_per_side));
  const SplineBasis basis = build_partition(2, 3, 1);
  const DegreeMatrix lam = total_degree_indices(basis.size(), 2);
  const ParametricOperator op = build_operator(*mesh, basis, lam, f.interval);
  const auto snaps = semi_implicit_solve(op, balanced_flux_problem(mesh, f.flux, f.final_time), f.dt, f.layout.times);
  const ParametricSurrogate a = extract_surrogate(snaps, *mesh, f.layout, lam, f.interval, {2, 3, 1},
                                                  {f.nodes_per_side, f.dt, f.final_time, f.flux});
  const ParametricSurrogate b = build_surrogate(f);
  CHECK((Eigen::MatrixXd(a.V()) - Eigen::MatrixXd(b.V())).norm() == 0.0);
  CHECK(a.lambda() == b.lambda());

  SurrogateBuilder partial(*mesh, f.layout, lam.rows());
  CHECK_FALSE(partial.complete());
  CHECK(error_code_of([&] { partial.finish(lam, f.interval, {2, 3, 1}, {}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("container round trip is bit exact") {
  Gen g(11);
  const ParametricSurrogate s = random_surrogate(g, 3, 2);
  const auto bytes = serialize_surrogate(s);
  const ParametricSurrogate r = deserialize_surrogate(bytes);
  CHECK(std::memcmp(r.V().data(), s.V().data(), sizeof(double) * s.V().size()) == 0);
  CHECK(r.lambda() == s.lambda());
  CHECK(r.interval().lo == s.interval().lo);
  CHECK(r.interval().hi == s.interval().hi);
  CHECK(r.layout() == s.layout());
  CHECK(r.spline() == s.spline());
  CHECK(r.provenance() == s.provenance());
  CHECK(serialize_surrogate(r) == bytes);

  const std::string path = ptomo::test::temp_path("roundtrip.bin");
  write_surrogate(path, s);
  CHECK(serialize_surrogate(read_surrogate(path)) == bytes);
}

TEST_CASE("container rejects damaged files") {
  Gen g(12);
  const auto bytes = serialize_surrogate(random_surrogate(g, 2, 1));
  auto truncated = bytes;
  truncated.resize(bytes.size() - 9);
  CHECK(error_code_of([&] { deserialize_surrogate(truncated); }) == ErrorCode::format);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK(error_code_of([&] { deserialize_surrogate(trailing); }) == ErrorCode::format);
  auto magic = bytes;
  magic[0] = 'X';
  CHECK(error_code_of([&] { deserialize_surrogate(magic); }) == ErrorCode::format);
  auto version = bytes;
  version[8] = 2;
  CHECK(error_code_of([&] { deserialize_surrogate(version); }) == ErrorCode::mismatch);
  CHECK(error_code_of([] { read_surrogate("/nonexistent/ptomo.bin"); }) == ErrorCode::io);
}

TEST_CASE("forward build is deterministic") {
  const ForwardSetup f = toy_setup();
  CHECK(serialize_surrogate(build_surrogate(f)) == serialize_surrogate(build_surrogate(f)));
  ForwardStats st;
  const ParametricSurrogate s = build_surrogate(f, &st);
  CHECK(st.M == 49);
  CHECK(st.P == 9);
  CHECK(st.N == 55);
  CHECK(st.steps == 49);
  CHECK(s.Q() == 468);
}
