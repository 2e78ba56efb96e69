// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "mesh.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"
#include "splines.hpp"
#include "support.hpp"

using namespace ptomo;
using ptomo::test::Gen;
using ptomo::test::error_code_of;

TEST_CASE("gauss rules") {
  for (int n = 1; n <= 10; ++n) {
    const GaussRule r = gauss_legendre(n);
    std::vector<double> xs, ws;
    oracle::golub_welsch(n, xs, ws);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += r.weights[k];
      CHECK(r.nodes[k] == doctest::Approx(xs[k]).scale(1.0).epsilon(1e-13));
      CHECK(r.weights[k] == doctest::Approx(ws[k]).epsilon(1e-12));
    }
    CHECK(sum == doctest::Approx(2.0));
  }
}

TEST_CASE("simplex rules integrate monomials") {
  // Reference simplex: integral of x^a is a!/(a+d)!.
  for (int dim : {2, 3})
    for (int deg = 0; deg <= 4; ++deg) {
      const SimplexRule r = simplex_rule(dim, deg);
      double acc = 0.0;
      for (std::size_t k = 0; k < r.weights.size(); ++k) acc += r.weights[k] * std::pow(r.points[k][0], deg);
      CHECK(acc == doctest::Approx(std::tgamma(deg + 1) / std::tgamma(deg + dim + 1)).epsilon(1e-13));
    }
}

TEST_CASE("mesh sizes and volumes") {
  for (int dim : {2, 3})
    for (int n : {2, 3, 6}) {
      const Mesh m = build_mesh(dim, n);
      const int cells = static_cast<int>(std::pow(n - 1, dim));
      CHECK(m.node_count() == static_cast<int>(std::pow(n, dim)));
      CHECK(m.element_count() == cells * (dim == 2 ? 2 : 6));
      double vol = 0.0;
      for (int e = 0; e < m.element_count(); ++e) {
        CHECK(element_volume(m, e) > 0.0);
        vol += element_volume(m, e);
      }
      CHECK(vol == doctest::Approx(1.0));
      std::vector<double> area(2 * dim, 0.0);
      for (const auto& f : m.boundary_facets) area[f.face] += facet_measure(m, f);
      for (double a : area) CHECK(a == doctest::Approx(1.0));
    }
  CHECK(error_code_of([] { build_mesh(4, 3); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] { build_mesh(2, 1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("P1 interpolation reproduces affine functions") {
  Gen g(4);
  for (int dim : {2, 3}) {
    const Mesh m = build_mesh(dim, 5);
    auto f = [](const Point& x) { return 0.3 + 1.7 * x[0] - 0.4 * x[1] + 2.1 * x[2]; };
    std::vector<double> u(m.node_count());
    for (int i = 0; i < m.node_count(); ++i) u[i] = f(m.nodes[i]);
    std::vector<Point> pts;
    for (int k = 0; k < 30; ++k) pts.push_back({g.real(0, 1), g.real(0, 1), dim == 3 ? g.real(0, 1) : 0.0});
    pts.push_back({1.0, 1.0, dim == 3 ? 1.0 : 0.0});
    const auto vals = evaluate_fem(m, u, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) CHECK(vals[k] == doctest::Approx(f(pts[k])));
  }
  const Mesh m = build_mesh(2, 4);
  CHECK(error_code_of([&] { locate(m, {1.5, 0.2, 0.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("element gradients sum to zero") {
  const Mesh m = build_mesh(3, 3);
  for (int e = 0; e < m.element_count(); ++e) {
    double vol = 0.0;
    const auto grads = element_gradients(m, e, &vol);
    for (int a = 0; a < 3; ++a)
      CHECK(grads[0][a] + grads[1][a] + grads[2][a] + grads[3][a] == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("spline partition of unity and support") {
  Gen g(5);
  for (int dim : {1, 2, 3})
    for (auto [m, s] : {std::pair{4, 1}, std::pair{6, 2}, std::pair{5, 3}}) {
      const SplineBasis b = build_partition(dim, m, s);
      CHECK(b.size() == static_cast<int>(std::pow(m, dim)));
      for (int trial = 0; trial < 20; ++trial) {
        const Point x{g.real(0, 1), dim > 1 ? g.real(0, 1) : 0.0, dim > 2 ? g.real(0, 1) : 0.0};
        double sum = 0.0;
        for (int p = 0; p < b.size(); ++p) {
          const double v = b.value(p, x);
          CHECK(v >= -1e-15);
          sum += v;
          if (v > 0.0) {
            const auto box = b.support(p);
            for (int a = 0; a < dim; ++a) CHECK((x[a] >= box[a][0] && x[a] <= box[a][1]));
          }
        }
        CHECK(sum == doctest::Approx(1.0));
        SplineStencil st;
        b.nonzero(x, st);
        double s2 = 0.0;
        for (double v : st.values) s2 += v;
        CHECK(s2 == doctest::Approx(1.0));
      }
    }
  CHECK(error_code_of([] { build_partition(2, 2, 2); }) == ErrorCode::invalid_argument);
}

TEST_CASE("constant coefficients give a constant diffusivity") {
  const SplineBasis b = build_partition(2, 5, 2);
  const std::vector<double> theta(b.size(), 1.3);
  for (const Point& x : uniform_grid(2, 7)) CHECK(evaluate_diffusivity(b, theta, x) == doctest::Approx(1.3));
  CHECK(sample_field_error(b, theta, [](const Point&) { return 1.3; }, uniform_grid(2, 7)) ==
        doctest::Approx(0.0).scale(1.0));
}
