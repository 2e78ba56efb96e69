// SPDX-License-Identifier: Apache-2.0
#include "quadrature.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace ptomo {

GaussRule gauss_legendre(int points) {
  require(points >= 1, "gauss_legendre: need at least one point");
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  // Newton iteration on P_n from the Chebyshev-like initial guess; the rule
  // is symmetric so only half the roots are computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

SimplexRule simplex_rule(int dim, int degree) {
  require(dim >= 1 && dim <= 3, "simplex_rule: dim must be 1, 2 or 3");
  require(degree >= 0, "simplex_rule: negative degree");
  // The collapsed map adds up to dim-1 to the degree in the first coordinate.
  const int q = (degree + dim) / 2 + 1;
  const GaussRule g = gauss_legendre(q);
  std::vector<double> u(q), wu(q);
  for (int i = 0; i < q; ++i) {
    u[i] = 0.5 * (g.nodes[i] + 1.0);
    wu[i] = 0.5 * g.weights[i];
  }

  SimplexRule rule;
  rule.dim = dim;
  if (dim == 1) {
    for (int i = 0; i < q; ++i) {
      rule.points.push_back({u[i], 0.0, 0.0});
      rule.weights.push_back(wu[i]);
    }
  } else if (dim == 2) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        const double x1 = u[i];
        const double x2 = (1.0 - u[i]) * u[j];
        rule.points.push_back({x1, x2, 0.0});
        rule.weights.push_back(wu[i] * wu[j] * (1.0 - u[i]));
      }
  } else {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
          const double x1 = u[i];
          const double x2 = (1.0 - u[i]) * u[j];
          const double x3 = (1.0 - u[i]) * (1.0 - u[j]) * u[k];
          rule.points.push_back({x1, x2, x3});
          rule.weights.push_back(wu[i] * wu[j] * wu[k] * (1.0 - u[i]) *
                                 (1.0 - u[i]) * (1.0 - u[j]));
        }
  }
  return rule;
}

}  // namespace ptomo
