// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <memory>
#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"

#include "stepper.hpp"
#include "support.hpp"

using namespace ptomo;
using ptomo::test::Gen;
using ptomo::test::error_code_of;

namespace {

struct Small {
  std::shared_ptr<const Mesh> mesh;
  ParametricOperator op;
};

Small small(int dim, int nodes, int m, int s, int n) {
  auto mesh = std::make_shared<const Mesh>(build_mesh(dim, nodes));
  const SplineBasis basis = build_partition(dim, m, s);
  return {mesh, build_operator(*mesh, basis, total_degree_indices(basis.size(), n), {0.5, 2.0})};
}

}  // namespace

TEST_CASE("snapshot steps") {
  const std::vector<double> ok{0.0, 0.01, 0.49, 0.5};
  const auto k = snapshot_steps(ok, 1e-3, 0.5);
  CHECK(k == std::vector<long>{0, 10, 490, 500});
  CHECK(error_code_of([] { std::vector<double> t{0.0105}; snapshot_steps(t, 1e-3, 0.5); }) ==
        ErrorCode::invalid_argument);
  CHECK(error_code_of([] { std::vector<double> t{0.6}; snapshot_steps(t, 1e-3, 0.5); }) ==
        ErrorCode::invalid_argument);
  CHECK(error_code_of([] { std::vector<double> t{0.1}; snapshot_steps(t, 0.0, 0.5); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("load evaluator") {
  auto mesh = std::make_shared<const Mesh>(build_mesh(2, 6));
  const ProblemSpec p = balanced_flux_problem(mesh, 20.0, 0.5);
  const LoadEvaluator load(p);
  CHECK_FALSE(load.is_zero());
  // Linear in t: the step mean is the average of the end points, and the
  // balanced fluxes carry no net heat.
  const Eigen::VectorXd mean = load.step_mean(3, 0.01);
  CHECK((mean - 0.5 * (load.at(0.03) + load.at(0.04))).norm() < 1e-12);
  CHECK(std::abs(load.at(0.3).sum()) < 1e-12);
  CHECK(load.at(0.3).cwiseAbs().sum() == doctest::Approx(2 * 20 * 0.3));

  ProblemSpec q = p;
  q.face_rates.reset();
  q.source = [](const Point& x, double t) { return t * t * x[0]; };
  const LoadEvaluator l2(q);
  // Three-point Gauss is exact for quadratics in t.
  const double exact = (std::pow(0.04, 3) - std::pow(0.03, 3)) / 3.0 / 0.01 * 0.5;
  CHECK(l2.step_mean(3, 0.01).sum() == doctest::Approx(exact));
  ProblemSpec z;
  z.mesh = mesh;
  CHECK(LoadEvaluator(z).is_zero());
}

TEST_CASE("nnz(S) and the assembled S") {
  const Small s = small(2, 9, 3, 1, 2);
  const auto S = assemble_S(s.op);
  CHECK(S.nonZeros() == s.op.nnz_S());
  std::int64_t expected = 0;
  const std::int64_t per_p = s.op.lambda().nnz() / s.op.parameters();
  for (const auto& a : s.op.spline_stiffness()) expected += 2 * a.nonZeros() * per_p;
  CHECK(s.op.nnz_S() == expected);
  CHECK(Eigen::MatrixXd(S).isApprox(Eigen::MatrixXd(S).transpose()));
}

TEST_CASE("matrix-free S matches the assembled S") {
  Gen g(7);
  for (auto [dim, nodes, m, n] : {std::tuple{2, 7, 3, 2}, std::tuple{3, 4, 2, 3}, std::tuple{2, 5, 2, 1}}) {
    const Small s = small(dim, nodes, m, 1, n);
    const auto S = assemble_S(s.op);
    const Eigen::Index M = s.op.spatial_size(), N = s.op.basis_size();
    Eigen::MatrixXd u(M, N);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = g.real(-1, 1);
    Eigen::MatrixXd w = Eigen::MatrixXd::Constant(M, N, 0.5);
    s.op.apply_S(u, w, -0.3);
    const Eigen::VectorXd ref =
        Eigen::VectorXd::Constant(M * N, 0.5) - 0.3 * (S * Eigen::Map<const Eigen::VectorXd>(u.data(), M * N));
    CHECK((Eigen::Map<const Eigen::VectorXd>(w.data(), M * N) - ref).norm() < 1e-12 * ref.norm());
  }
}

TEST_CASE("degree zero reduces to implicit Euler with the midpoint coefficient") {
  const Small s = small(2, 9, 3, 1, 0);
  ProblemSpec p = balanced_flux_problem(s.mesh, 20.0, 0.2);
  p.initial = [](const Point& x) { return x[0] * x[1]; };
  const std::vector<double> times{0.05, 0.2};
  const SolutionSnapshots a = semi_implicit_solve(s.op, p, 0.01, times);
  const SparseSymMatrix k = s.op.mu() * s.op.unit_stiffness();
  const NodalSnapshots b = implicit_euler_solve(*s.mesh, k, p, 0.01, times);
  for (std::size_t q = 0; q < times.size(); ++q)
    CHECK((a.tables[q].col(0) - b.values[q]).norm() < 1e-12 * b.values[q].norm());
}

TEST_CASE("observer sees every requested snapshot once") {
  const Small s = small(2, 6, 2, 1, 1);
  const ProblemSpec p = balanced_flux_problem(s.mesh, 20.0, 0.5);
  const std::vector<double> times{0.05, 0.0, 0.3, 0.05};
  std::vector<int> seen(times.size(), 0);
  semi_implicit_solve(s.op, p, 0.01, times, [&](std::size_t q, double t, const Eigen::MatrixXd& u) {
    ++seen[q];
    CHECK(t == times[q]);
    CHECK(u.rows() == s.op.spatial_size());
  });
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("Crank-Nicolson keeps constants and conserves heat") {
  auto mesh = std::make_shared<const Mesh>(build_mesh(2, 9));
  ProblemSpec p;
  p.mesh = mesh;
  p.initial = [](const Point&) { return 2.0; };
  const std::vector<double> t{0.1};
  const auto r = crank_nicolson_solve(*mesh, [](const Point& x) { return 1.0 + x[0]; }, p, 0.01, t);
  CHECK((r.values[0].array() - 2.0).abs().maxCoeff() < 1e-12);

  const ProblemSpec f = balanced_flux_problem(mesh, 20.0, 0.5);
  const auto r2 = crank_nicolson_solve(*mesh, [](const Point&) { return 1.3; }, f, 0.01, std::vector<double>{0.5});
  const SparseSymMatrix b = assemble_mass(*mesh);
  CHECK(std::abs((b * r2.values[0]).sum()) < 1e-10);
}

TEST_CASE("stability probe") {
  const Small s = small(2, 9, 3, 2, 2);
  const auto r = stability_probe(s.op, balanced_flux_problem(s.mesh, 20.0, 0.5), 0.1);
  CHECK(r.finite);
  CHECK_FALSE(r.blew_up);
  CHECK(r.max_norms.size() == 5);
}

TEST_CASE("mass energy") {
  const Small s = small(2, 5, 2, 1, 1);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(s.op.spatial_size(), s.op.basis_size());
  u.col(0).setOnes();
  u.col(1).setConstant(2.0);
  CHECK(mass_energy(s.op.mass(), u) == doctest::Approx(5.0));
}

TEST_CASE("constant-only basis has no coupling") {
  const Small s = small(2, 6, 2, 1, 0);
  CHECK(s.op.nnz_S() == 0);
  CHECK(assemble_S(s.op).nonZeros() == 0);
}

TEST_CASE("two-parameter toy: S equals the dense Kronecker sum") {
  const Mesh mesh = build_mesh(2, 2);
  const SparseSymMatrix a = assemble_stiffness(mesh);
  const SparseSymMatrix a1 = 0.3 * a, a2 = 0.7 * a;
  const ParameterInterval e(0.5, 2.0);
  const DegreeMatrix lam = total_degree_indices(2, 1);
  const ParametricOperator op(assemble_mass(mesh), a, {a1, a2}, lam, e);
  const auto indices = oracle::multi_indices(2, 1);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(12, 12);
  const SparseSymMatrix parts[] = {a1, a2};
  for (int p = 0; p < 2; ++p) {
    Eigen::MatrixXd y = oracle::triple_product_matrix(p, indices, e);
    y.diagonal().setZero();
    dense += Eigen::kroneckerProduct(y, Eigen::MatrixXd(parts[p])).eval();
  }
  CHECK((Eigen::MatrixXd(assemble_S(op)) - dense).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("step means of the boundary load") {
  auto mesh = std::make_shared<const Mesh>(build_mesh(2, 5));
  ProblemSpec lin;
  lin.mesh = mesh;
  lin.flux = [](const Point&, double t, int face) { return face == 0 ? 20.0 * t : 0.0; };
  const double dt = 1e-3;
  const Eigen::VectorXd ref =
      assemble_boundary_load(*mesh, [&](const Point&, double, int face) { return face == 0 ? 20.0 * dt / 2 : 0.0; }, 0.0);
  CHECK((rhs_mean(lin, 0, dt) - ref).norm() < 1e-14);

  ProblemSpec quad = lin;
  quad.flux = [](const Point&, double t, int face) { return face == 0 ? t * t : 0.0; };
  const Eigen::VectorXd ref2 =
      assemble_boundary_load(*mesh, [&](const Point&, double, int face) { return face == 0 ? dt * dt / 3 : 0.0; }, 0.0);
  CHECK((rhs_mean(quad, 0, dt) - ref2).norm() < 1e-12 * ref2.norm());

  ProblemSpec none;
  none.mesh = mesh;
  CHECK(rhs_mean(none, 4, dt).norm() == 0.0);
}

TEST_CASE("no data, no solution") {
  const Small s = small(2, 6, 2, 1, 2);
  ProblemSpec p;
  p.mesh = s.mesh;
  const auto snaps = semi_implicit_solve(s.op, p, 0.01, std::vector<double>{0.0, 0.1, 0.5});
  for (const auto& t : snaps.tables) CHECK(t.norm() == 0.0);
  const auto cn = crank_nicolson_solve(*s.mesh, [](const Point&) { return 1.0; }, p, 0.01, std::vector<double>{0.2});
  CHECK(cn.values[0].norm() == 0.0);
}

TEST_CASE("energy decays without forcing") {
  const Small s = small(2, 9, 3, 1, 2);
  ProblemSpec p;
  p.mesh = s.mesh;
  p.initial = [](const Point& x) { return std::cos(3.0 * x[0]) + x[1]; };
  for (double dt : {0.001, 0.01, 0.1}) {
    const long steps = 20;
    std::vector<double> times(steps + 1);
    for (long k = 0; k <= steps; ++k) times[k] = k * dt;
    p.final_time = steps * dt;
    double prev = INFINITY;
    semi_implicit_solve(s.op, p, dt, times, [&](std::size_t, double, const Eigen::MatrixXd& u) {
      const double e = mass_energy(s.op.mass(), u);
      CHECK(e <= prev * (1.0 + 1e-12));
      prev = e;
    });
  }
}

TEST_CASE("first order in time") {
  const Small s = small(2, 9, 3, 1, 2);
  const ProblemSpec p = balanced_flux_problem(s.mesh, 20.0, 0.5);
  const std::vector<double> t{0.5};
  const Eigen::MatrixXd ref = semi_implicit_solve(s.op, p, 1e-4, t).tables[0];
  const double e2 = (semi_implicit_solve(s.op, p, 1e-2, t).tables[0] - ref).norm();
  const double e3 = (semi_implicit_solve(s.op, p, 1e-3, t).tables[0] - ref).norm();
  CHECK(e2 / e3 >= 6.0);
  CHECK(e2 / e3 <= 14.0);
}

TEST_CASE("Crank-Nicolson agrees with the parametric solver at a constant coefficient") {
  const Small s = small(2, 11, 3, 1, 2);
  const double c = s.op.mu();
  const ProblemSpec p = balanced_flux_problem(s.mesh, 20.0, 0.5);
  const std::vector<double> t{0.49};
  const Eigen::MatrixXd tab = semi_implicit_solve(s.op, p, 1e-3, t).tables[0];
  const std::vector<double> theta(s.op.parameters(), c);
  const Eigen::VectorXd u = tab * eval_phi(s.op.lambda(), s.op.interval(), theta);
  const Eigen::VectorXd v =
      crank_nicolson_solve(*s.mesh, [c](const Point&) { return c; }, p, 1e-3, t).values[0];
  double num = 0.0, den = 0.0;
  for (int i = 0; i < s.mesh->node_count(); ++i) {
    const Point& x = s.mesh->nodes[i];
    const bool boundary = x[0] == 0.0 || x[0] == 1.0 || x[1] == 0.0 || x[1] == 1.0;
    if (!boundary) continue;
    num += (u[i] - v[i]) * (u[i] - v[i]);
    den += v[i] * v[i];
  }
  CHECK(std::sqrt(num / den) <= 0.02);
}
