// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "assembly.hpp"
#include "spd_factor.hpp"
#include "support.hpp"

using namespace ptomo;
using ptomo::test::Gen;

TEST_CASE("mass and stiffness identities") {
  for (int dim : {2, 3}) {
    const Mesh m = build_mesh(dim, dim == 2 ? 9 : 5);
    const SparseSymMatrix b = assemble_mass(m);
    const SparseSymMatrix a = assemble_stiffness(m);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.node_count());
    CHECK(one.dot(b * one) == doctest::Approx(1.0));
    CHECK((a * one).cwiseAbs().maxCoeff() < 1e-12);
    // Energy of u = x is |grad u|^2 |Omega| = 1.
    Eigen::VectorXd x(m.node_count());
    for (int i = 0; i < m.node_count(); ++i) x[i] = m.nodes[i][0];
    CHECK(x.dot(a * x) == doctest::Approx(1.0));
    CHECK(Eigen::MatrixXd(b).isApprox(Eigen::MatrixXd(b).transpose()));
    CHECK(Eigen::MatrixXd(a).isApprox(Eigen::MatrixXd(a).transpose()));
  }
}

TEST_CASE("weighted stiffness") {
  const Mesh m = build_mesh(2, 7);
  const SparseSymMatrix a = assemble_stiffness(m);
  const SparseSymMatrix a2 = assemble_stiffness(m, [](const Point&) { return 2.5; });
  CHECK(Eigen::MatrixXd(a2).isApprox(2.5 * Eigen::MatrixXd(a)));
  // Linear weight: integral of (1 + x) |grad x|^2 = 1.5.
  const SparseSymMatrix aw = assemble_stiffness(m, [](const Point& x) { return 1.0 + x[0]; });
  Eigen::VectorXd x(m.node_count());
  for (int i = 0; i < m.node_count(); ++i) x[i] = m.nodes[i][0];
  CHECK(x.dot(aw * x) == doctest::Approx(1.5));
}

TEST_CASE("spline stiffness matrices sum to the unit stiffness") {
  for (int dim : {2, 3}) {
    const Mesh m = build_mesh(dim, dim == 2 ? 13 : 6);
    const SplineBasis basis = build_partition(dim, 3, 1);
    const auto parts = assemble_spline_stiffness(m, basis);
    REQUIRE(static_cast<int>(parts.size()) == basis.size());
    SparseSymMatrix sum = parts[0];
    for (std::size_t p = 1; p < parts.size(); ++p) sum += parts[p];
    const SparseSymMatrix a = assemble_stiffness(m);
    CHECK(SparseSymMatrix(sum - a).norm() / a.norm() < 1e-12);
    const double eta = compute_eta(parts, a);
    CHECK(eta >= 1.0);
    CHECK(eta <= basis.size());
  }
}

TEST_CASE("boundary loads") {
  for (int dim : {2, 3}) {
    const Mesh m = build_mesh(dim, 5);
    // g = 1 on face 1 (x = 1) only: total load equals the face area.
    const Eigen::VectorXd r =
        assemble_boundary_load(m, [](const Point&, double, int face) { return face == 1 ? 1.0 : 0.0; }, 0.0);
    CHECK(r.sum() == doctest::Approx(1.0));
    // Linear g along the face is integrated exactly.
    const Eigen::VectorXd r2 =
        assemble_boundary_load(m, [](const Point& x, double t, int face) { return face == 0 ? t * x[1] : 0.0; }, 2.0);
    CHECK(r2.sum() == doctest::Approx(1.0));
    const Eigen::VectorXd f = assemble_source_load(m, [](const Point&, double t) { return t; }, 3.0);
    CHECK(f.sum() == doctest::Approx(3.0));
  }
}

TEST_CASE("sparse Cholesky against Eigen") {
  Gen g(6);
  for (int dim : {2, 3}) {
    const Mesh m = build_mesh(dim, dim == 2 ? 15 : 6);
    const SparseSymMatrix k = assemble_mass(m) + 0.37 * assemble_stiffness(m);
    const SpdFactor f(k);
    CHECK(f.size() == m.node_count());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ref(Eigen::SparseMatrix<double>(k).eval());
    for (int cols : {1, 3, 8, 11}) {
      Eigen::MatrixXd b(m.node_count(), cols);
      for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = g.real(-1, 1);
      Eigen::MatrixXd x = b;
      f.solve_in_place(x);
      const Eigen::MatrixXd xr = ref.solve(b);
      CHECK((x - xr).norm() / xr.norm() < 1e-12);
      CHECK((k * x - b).norm() / b.norm() < 1e-12);
    }
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(m.node_count());
    CHECK((k * f.solve(b) - b).norm() < 1e-12);
  }
}

TEST_CASE("sparse Cholesky rejects indefinite matrices") {
  SparseSymMatrix k(2, 2);
  k.insert(0, 0) = 1.0;
  k.insert(0, 1) = 2.0;
  k.insert(1, 0) = 2.0;
  k.insert(1, 1) = 1.0;
  CHECK(ptomo::test::error_code_of([&] { SpdFactor f(k); }) == ErrorCode::numerical);
}
