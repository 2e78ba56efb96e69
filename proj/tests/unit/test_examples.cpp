// SPDX-License-Identifier: Apache-2.0
// Small closed-form cases across the modules.
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "assembly.hpp"
#include "forward.hpp"
#include "inverse.hpp"
#include "measurements.hpp"
#include "stepper.hpp"
#include "support.hpp"

using namespace ptomo;
using ptomo::test::Gen;

namespace {

ParametricSurrogate random_surrogate(Gen& g, int m, int n) {
  const MeasurementLayout layout = default_layout(2);
  DegreeMatrix lam = total_degree_indices(m * m, n);
  RowMatrix v(layout.size(), lam.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = g.real(-1, 1);
  return ParametricSurrogate(std::move(v), std::move(lam), {0.5, 2.0}, layout, {2, m, 1},
                             {9, 0.01, 0.5, 20.0});
}

}  // namespace

TEST_CASE("mesh counts") {
  const Mesh a = build_mesh(2, 37);
  CHECK(a.node_count() == 1369);
  CHECK(a.element_count() == 2592);
  const Mesh b = build_mesh(3, 26);
  CHECK(b.node_count() == 17576);
  CHECK(b.element_count() == 93750);
  const Mesh c = build_mesh(2, 2);
  CHECK(c.node_count() == 4);
  CHECK(c.element_count() == 2);
  CHECK(c.boundary_facets.size() == 4);
}

TEST_CASE("element mass entries") {
  const Mesh m = build_mesh(2, 2);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
  for (int e = 0; e < m.element_count(); ++e) {
    const double area = element_volume(m, e);
    CHECK(area == doctest::Approx(0.5));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        expect(m.elements[e][i], m.elements[e][k]) += i == k ? area / 6 : area / 12;
  }
  CHECK((Eigen::MatrixXd(assemble_mass(m)) - expect).norm() < 1e-15);

  const Eigen::MatrixXd b(assemble_mass(build_mesh(2, 5)));
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b).eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("boundary load of constant and balanced fluxes") {
  const auto mesh = std::make_shared<const Mesh>(build_mesh(2, 9));
  const Eigen::VectorXd r = assemble_boundary_load(*mesh, [](const Point&, double, int) { return 1.0; }, 0.0);
  CHECK(r.sum() == doctest::Approx(4.0));

  const Eigen::VectorXd g = LoadEvaluator(balanced_flux_problem(mesh, 20.0, 0.5)).at(0.1);
  double left = 0.0;
  for (int i = 0; i < mesh->node_count(); ++i)
    if (mesh->nodes[i][0] == 0.0) left += g[i];
  CHECK(left == doctest::Approx(-2.0));
  CHECK(std::abs(g.sum()) < 1e-13);
}

TEST_CASE("FEM evaluation at nodes and edge midpoints") {
  Gen g(51);
  const Mesh m = build_mesh(2, 5);
  const auto c = g.reals(m.node_count(), -1, 1);
  const int i = m.node_index(1, 2), k = m.node_index(2, 2);
  const std::vector<Point> pts{m.nodes[i], {0.5 * (m.nodes[i][0] + m.nodes[k][0]), m.nodes[i][1], 0.0}};
  const auto v = evaluate_fem(m, c, pts);
  CHECK(v[0] == doctest::Approx(c[i]).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(0.5 * (c[i] + c[k])).epsilon(1e-14));
}

TEST_CASE("fill-in ratio") {
  const SparseSymMatrix a = assemble_stiffness(build_mesh(2, 6));
  CHECK(compute_eta({a}, a) == 1.0);
  CHECK(compute_eta(std::vector<SparseSymMatrix>(5, a), a) == 5.0);
}

TEST_CASE("cardinal B-spline values") {
  CHECK(bspline_value(0, 0.5) == 1.0);
  CHECK(bspline_value(0, 1.0) == 0.0);
  CHECK(bspline_value(1, 1.0) == doctest::Approx(1.0));
  CHECK(bspline_value(1, 0.5) == doctest::Approx(0.5));
  CHECK(bspline_value(2, 1.5) == doctest::Approx(0.75));
}

TEST_CASE("partition sizes and the two-hat basis") {
  CHECK(build_partition(2, 14, 2).size() == 196);
  CHECK(build_partition(3, 6, 1).size() == 216);
  const SplineBasis hat = build_partition(1, 2, 1);
  REQUIRE(hat.size() == 2);
  for (double x : {0.0, 0.3, 0.5, 1.0}) {
    CHECK(hat.value(0, {x, 0, 0}) == doctest::Approx(1.0 - x));
    CHECK(hat.value(1, {x, 0, 0}) == doctest::Approx(x));
  }
  const std::vector<double> theta{0.5, 2.0};
  CHECK(evaluate_diffusivity(hat, theta, {0.5, 0, 0}) == doctest::Approx(1.25));
  const std::vector<double> ones{1.0, 1.0};
  const auto grid = uniform_grid(1, 11);
  CHECK(sample_field_error(hat, ones, [](const Point&) { return 2.0; }, grid) == doctest::Approx(0.5));

  // One coefficient raised to 2: a stays within [1, 2].
  const SplineBasis b = build_partition(2, 4, 2);
  std::vector<double> t(b.size(), 1.0);
  t[5] = 2.0;
  for (const Point& x : uniform_grid(2, 21)) {
    const double a = evaluate_diffusivity(b, t, x);
    CHECK(a >= 1.0 - 1e-14);
    CHECK(a <= 2.0 + 1e-14);
  }
}

TEST_CASE("Legendre values on (-1, 1)") {
  const ParameterInterval e(-1.0, 1.0);
  for (double x : {-0.7, 0.0, 0.4}) {
    CHECK(legendre_eval(e, 0, x).value == 1.0);
    CHECK(legendre_eval(e, 0, x).derivative == 0.0);
    CHECK(legendre_eval(e, 1, x).value == doctest::Approx(std::sqrt(3.0) * x));
  }
}

TEST_CASE("single-parameter triple product matrix") {
  const ParameterInterval e(-1.0, 1.0);
  const DegreeMatrix lam = total_degree_indices(1, 2);
  const Eigen::MatrixXd y(assemble_Y(0, lam, e));
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect(0, 1) = expect(1, 0) = 1.0 / std::sqrt(3.0);
  expect(1, 2) = expect(2, 1) = 2.0 / std::sqrt(15.0);
  CHECK((y - expect).norm() < 1e-15);
}

TEST_CASE("off-diagonal count of Y at P = 196") {
  const ParameterInterval e(0.5, 2.0);
  const DegreeMatrix lam = total_degree_indices(196, 2);
  for (int p : {0, 77, 195}) {
    const auto y = assemble_Y(p, lam, e);
    std::int64_t off = 0;
    for (int r = 0; r < y.outerSize(); ++r)
      for (decltype(y)::InnerIterator it(y, r); it; ++it)
        if (it.col() != r && it.value() != 0.0) ++off;
    CHECK(off == 394);
  }
}

TEST_CASE("basis vector closed forms") {
  const ParameterInterval e(-1.0, 1.0);
  const DegreeMatrix lam = total_degree_indices(2, 2);
  const std::vector<double> theta{0.5, -0.5};
  const Eigen::VectorXd phi = eval_phi(lam, e, theta);
  CHECK(phi[0] == 1.0);
  for (std::int64_t j = 0; j < lam.rows(); ++j) {
    const double expect = legendre_eval(e, lam.entry(j, 0), 0.5).value *
                          legendre_eval(e, lam.entry(j, 1), -0.5).value;
    CHECK(std::abs(phi[j] - expect) < 1e-14);
  }
  // The constant row has no Jacobian entries.
  const BasisJacobian jac = eval_basis_jacobian(lam, e, theta);
  CHECK(jac.nnz() == lam.nnz());
  CHECK(lam.row_ptr()[1] == 0);

  const ParameterInterval f(0.5, 2.0);
  const DegreeMatrix l4 = total_degree_indices(4, 3);
  const Eigen::VectorXd mid = eval_phi(l4, f, std::vector<double>(4, f.center()));
  for (std::int64_t j = 0; j < l4.rows(); ++j)
    if (l4.row_sum(j) == 1) CHECK(std::abs(mid[j]) < 1e-15);
}

TEST_CASE("measurement count of the 3D layout") {
  CHECK(default_layout(3).size() == 1976);
  CHECK(default_layout(2).size() == 468);
}

TEST_CASE("surrogate trivial cases") {
  Gen g(52);
  const ParametricSurrogate s = random_surrogate(g, 3, 1);
  // Degree one: U is affine, so its Jacobian is constant.
  const Eigen::MatrixXd j1 = s.eval_JU(g.reals(9, 0.5, 2.0));
  const Eigen::MatrixXd j2 = s.eval_JU(g.reals(9, 0.5, 2.0));
  CHECK((j1 - j2).norm() < 1e-13 * j1.norm());

  const ParametricSurrogate z(RowMatrix::Zero(s.Q(), s.N()), s.lambda(), s.interval(), s.layout(),
                              s.spline(), s.provenance());
  CHECK(z.eval_U(g.reals(9, 0.5, 2.0)).norm() == 0.0);

  // A single nonzero column of degree one in coordinate p touches column p of J only.
  const DegreeMatrix lam = total_degree_indices(9, 2);
  const int p = 4;
  std::int64_t col = -1;
  for (std::int64_t r = 0; r < lam.rows() && col < 0; ++r)
    if (lam.row_sum(r) == 1 && lam.entry(r, p) == 1) col = r;
  REQUIRE(col > 0);
  RowMatrix v = RowMatrix::Zero(s.Q(), lam.rows());
  v.col(col).setConstant(1.0);
  const ParametricSurrogate one(v, lam, s.interval(), s.layout(), s.spline(), s.provenance());
  const Eigen::MatrixXd j = one.eval_JU(g.reals(9, 0.5, 2.0));
  for (int q = 0; q < 9; ++q)
    CHECK((j.col(q).norm() > 0.0) == (q == p));

  // keep = 1 leaves the constant mode.
  const Eigen::VectorXd c = s.truncate(1).eval_U(g.reals(9, 0.5, 2.0));
  CHECK((c - s.V().col(0)).norm() < 1e-14 * c.norm());

  // Dropping a zero trailing column changes nothing.
  RowMatrix w = s.V();
  w.col(w.cols() - 1).setZero();
  const ParametricSurrogate sw(w, s.lambda(), s.interval(), s.layout(), s.spline(), s.provenance());
  const auto theta = g.reals(9, 0.5, 2.0);
  CHECK((sw.truncate(sw.N() - 1).eval_U(theta) - sw.eval_U(theta)).norm() < 1e-14);
}

TEST_CASE("noise level at two percent") {
  const Eigen::VectorXd clean = Eigen::VectorXd::Constant(468, 3.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const NoisyValues n = add_noise(clean, 0.02, seed);
    CHECK(n.sigma == doctest::Approx(0.06));
    const Eigen::VectorXd d = n.values - clean;
    const double mean = d.mean();
    const double sd = std::sqrt((d.array() - mean).square().sum() / (d.size() - 1));
    CHECK(std::abs(sd / n.sigma - 1.0) < 0.15);
  }
}

TEST_CASE("laplacian closed forms") {
  Eigen::MatrixXd g1(4, 4);
  g1 << 2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2;
  CHECK((Eigen::MatrixXd(build_laplacian(1, 4)) - g1).norm() == 0.0);

  Eigen::MatrixXd t(3, 3);
  t << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd sum =
      Eigen::kroneckerProduct(id, t).eval() + Eigen::kroneckerProduct(t, id).eval();
  CHECK((Eigen::MatrixXd(build_laplacian(2, 3)) - sum).norm() == 0.0);
}

TEST_CASE("Gauss-Newton trivial cases") {
  Gen g(53);
  const ParametricSurrogate s = random_surrogate(g, 3, 1);
  const Regularizer lap = build_laplacian(2, 3);

  // Affine model, exact data: one step lands on the truth.
  const auto truth = g.reals(9, 0.8, 1.8);
  const Eigen::VectorXd data = s.eval_U(truth);
  const auto r = gauss_newton(s, data, lap, 0.0, midpoint_vector(s));
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK((r.theta - Eigen::Map<const Eigen::VectorXd>(truth.data(), 9)).norm() < 1e-10);

  // Data generated at the start point: the first step is zero.
  const Eigen::VectorXd t0 = midpoint_vector(s);
  const auto z = gauss_newton(s, s.eval_U(std::vector<double>(t0.data(), t0.data() + 9)), lap, 0.0, t0);
  CHECK(z.converged);
  CHECK(z.iterations == 0);
  CHECK((z.theta - t0).norm() == 0.0);
}

TEST_CASE("discrepancy principle with an enormous noise level") {
  Gen g(54);
  const ParametricSurrogate s = random_surrogate(g, 3, 1);
  const Regularizer lap = build_laplacian(2, 3);
  const Eigen::VectorXd data = s.eval_U(g.reals(9, 0.8, 1.8));
  const MorozovOptions opts;
  const MorozovResult big = morozov_select(s, data, 1e6, lap, midpoint_vector(s), {}, opts);
  CHECK(big.lambda == doctest::Approx(std::pow(10.0, opts.log10_hi)));
  const auto small = gauss_newton(s, data, lap, 1e-3, midpoint_vector(s));
  const auto spread = [](const Eigen::VectorXd& t) { return t.maxCoeff() - t.minCoeff(); };
  CHECK(spread(big.result.theta) < 0.01 * spread(small.theta));
}
