// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

namespace ptomo {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule with `points` nodes; exact to degree 2*points-1.
GaussRule gauss_legendre(int points);

/// Quadrature rule on the reference simplex {x_i >= 0, sum x_i <= 1} of
/// dimension 1..3. Built from collapsed (Duffy) coordinates, so it is exact
/// for polynomials of degree <= `degree`. Weights sum to 1/dim!.
struct SimplexRule {
  int dim = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

SimplexRule simplex_rule(int dim, int degree);

}  // namespace ptomo
