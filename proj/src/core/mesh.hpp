// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

namespace ptomo {

using Point = std::array<double, 3>;

/// Boundary facet of the unit square/cube. `face` identifies the side the
/// facet lies on: 2*axis for x_axis = 0 and 2*axis+1 for x_axis = 1.
struct Facet {
  std::array<int, 3> nodes{};  // first `dim` entries used, outward oriented
  int face = 0;
};

/// Structured simplicial mesh of [0,1]^dim. Each grid square is split into
/// two triangles along the (0,0)-(1,1) diagonal; each grid cube into the six
/// Kuhn tetrahedra sharing the (0,0,0)-(1,1,1) diagonal.
struct Mesh {
  int dim = 0;
  int nodes_per_side = 0;
  std::vector<Point> nodes;
  std::vector<std::array<int, 4>> elements;  // first dim+1 entries used
  std::vector<Facet> boundary_facets;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  double spacing() const { return 1.0 / (nodes_per_side - 1); }
  int node_index(int ix, int iy, int iz = 0) const {
    return ix + nodes_per_side * (iy + nodes_per_side * iz);
  }
};

Mesh build_mesh(int dim, int nodes_per_side);

/// Signed volume of element `e` (positive for every element build_mesh makes).
double element_volume(const Mesh& mesh, int e);

/// Gradients of the dim+1 barycentric hat functions on element `e`.
std::array<Point, 4> element_gradients(const Mesh& mesh, int e, double* volume);

/// Area (length in 2D) of a boundary facet.
double facet_measure(const Mesh& mesh, const Facet& f);

/// P1 interpolation stencil of one point: nodes and barycentric weights.
struct PointStencil {
  std::array<int, 4> nodes{};
  std::array<double, 4> weights{};
  int count = 0;
};

/// Locates `x` in the structured mesh. Points farther than `tolerance`
/// outside [0,1]^dim are rejected with ErrorCode::invalid_argument.
PointStencil locate(const Mesh& mesh, const Point& x, double tolerance = 1e-10);

/// Piecewise-linear interpolation of nodal `coefficients` at `points`.
std::vector<double> evaluate_fem(const Mesh& mesh,
                                 std::span<const double> coefficients,
                                 std::span<const Point> points);

}  // namespace ptomo
