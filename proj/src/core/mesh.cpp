// SPDX-License-Identifier: Apache-2.0
#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace ptomo {

namespace {

// Kuhn simplex of a unit cell: start at the base corner and step along the
// axes in the order given by `perm`. Returns grid offsets of the vertices.
std::vector<std::array<int, 3>> kuhn_offsets(int dim, const std::array<int, 3>& perm) {
  std::vector<std::array<int, 3>> v(dim + 1, {0, 0, 0});
  for (int k = 0; k < dim; ++k) {
    v[k + 1] = v[k];
    v[k + 1][perm[k]] += 1;
  }
  return v;
}

int permutation_sign(std::span<const int> perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

double det(int dim, const Point& a, const Point& b, const Point& c) {
  if (dim == 1) return a[0];
  if (dim == 2) return a[0] * b[1] - a[1] * b[0];
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

}  // namespace

Mesh build_mesh(int dim, int nodes_per_side) {
  if (dim != 2 && dim != 3)
    fail(ErrorCode::invalid_argument, "build_mesh: dim must be 2 or 3, got " + std::to_string(dim));
  require(nodes_per_side >= 2, "build_mesh: nodes_per_side must be at least 2");

  Mesh mesh;
  mesh.dim = dim;
  mesh.nodes_per_side = nodes_per_side;
  const int n = nodes_per_side;
  const double h = 1.0 / (n - 1);
  const int nz = dim == 3 ? n : 1;

  mesh.nodes.reserve(static_cast<std::size_t>(n) * n * nz);
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        mesh.nodes.push_back({ix * h, iy * h, dim == 3 ? iz * h : 0.0});

  std::vector<std::array<int, 3>> perms;
  {
    std::array<int, 3> p{0, 1, 2};
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + dim));
  }

  const int cells_z = dim == 3 ? n - 1 : 1;
  mesh.elements.reserve(static_cast<std::size_t>(perms.size()) * (n - 1) * (n - 1) * cells_z);
  for (int cz = 0; cz < cells_z; ++cz)
    for (int cy = 0; cy < n - 1; ++cy)
      for (int cx = 0; cx < n - 1; ++cx)
        for (const auto& perm : perms) {
          const auto off = kuhn_offsets(dim, perm);
          std::array<int, 4> el{0, 0, 0, 0};
          for (int k = 0; k <= dim; ++k)
            el[k] = mesh.node_index(cx + off[k][0], cy + off[k][1], cz + off[k][2]);
          if (permutation_sign(std::span<const int>(perm.data(), dim)) < 0)
            std::swap(el[dim - 1], el[dim]);
          mesh.elements.push_back(el);
        }

  // Boundary facets: the Kuhn triangulation of each face grid, which is
  // exactly the trace of the volume triangulation on that face.
  std::vector<std::array<int, 3>> face_perms;
  {
    std::array<int, 3> p{0, 1, 2};
    do {
      face_perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + (dim - 1)));
  }
  for (int axis = 0; axis < dim; ++axis) {
    std::array<int, 2> tangential{};
    for (int a = 0, k = 0; a < dim; ++a)
      if (a != axis) tangential[k++] = a;
    for (int side = 0; side < 2; ++side) {
      const int face = 2 * axis + side;
      Point outward{0.0, 0.0, 0.0};
      outward[axis] = side == 0 ? -1.0 : 1.0;
      const int cells_t1 = dim == 3 ? n - 1 : 1;
      for (int c1 = 0; c1 < cells_t1; ++c1)
        for (int c0 = 0; c0 < n - 1; ++c0)
          for (const auto& fp : face_perms) {
            const auto off = kuhn_offsets(dim - 1, fp);
            Facet f;
            f.face = face;
            for (int k = 0; k < dim; ++k) {
              std::array<int, 3> g{0, 0, 0};
              g[axis] = side == 0 ? 0 : n - 1;
              g[tangential[0]] = c0 + off[k][0];
              if (dim == 3) g[tangential[1]] = c1 + off[k][1];
              f.nodes[k] = mesh.node_index(g[0], g[1], g[2]);
            }
            const Point& a = mesh.nodes[f.nodes[0]];
            const Point e1 = sub(mesh.nodes[f.nodes[1]], a);
            double orient;
            if (dim == 2) {
              orient = e1[1] * outward[0] - e1[0] * outward[1];
            } else {
              const Point e2 = sub(mesh.nodes[f.nodes[2]], a);
              const Point cr{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                             e1[0] * e2[1] - e1[1] * e2[0]};
              orient = cr[0] * outward[0] + cr[1] * outward[1] + cr[2] * outward[2];
            }
            if (orient < 0) std::swap(f.nodes[dim - 2], f.nodes[dim - 1]);
            mesh.boundary_facets.push_back(f);
          }
    }
  }
  return mesh;
}

double element_volume(const Mesh& mesh, int e) {
  const auto& el = mesh.elements[e];
  const Point& v0 = mesh.nodes[el[0]];
  Point cols[3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  for (int k = 0; k < mesh.dim; ++k) cols[k] = sub(mesh.nodes[el[k + 1]], v0);
  const double d = det(mesh.dim, cols[0], cols[1], cols[2]);
  return mesh.dim == 2 ? d / 2.0 : d / 6.0;
}

std::array<Point, 4> element_gradients(const Mesh& mesh, int e, double* volume) {
  const int dim = mesh.dim;
  const auto& el = mesh.elements[e];
  const Point& v0 = mesh.nodes[el[0]];
  // Rows of J^{-1} are the gradients of barycentric coordinates 1..dim,
  // where the columns of J are the edge vectors from vertex 0.
  std::array<Point, 4> grads{};
  if (dim == 2) {
    const Point a = sub(mesh.nodes[el[1]], v0);
    const Point b = sub(mesh.nodes[el[2]], v0);
    const double d = a[0] * b[1] - a[1] * b[0];
    grads[1] = {b[1] / d, -b[0] / d, 0.0};
    grads[2] = {-a[1] / d, a[0] / d, 0.0};
    if (volume) *volume = d / 2.0;
  } else {
    const Point a = sub(mesh.nodes[el[1]], v0);
    const Point b = sub(mesh.nodes[el[2]], v0);
    const Point c = sub(mesh.nodes[el[3]], v0);
    const double d = det(3, a, b, c);
    // Inverse rows are cross products of the other two columns.
    grads[1] = {(b[1] * c[2] - b[2] * c[1]) / d, (b[2] * c[0] - b[0] * c[2]) / d,
                (b[0] * c[1] - b[1] * c[0]) / d};
    grads[2] = {(c[1] * a[2] - c[2] * a[1]) / d, (c[2] * a[0] - c[0] * a[2]) / d,
                (c[0] * a[1] - c[1] * a[0]) / d};
    grads[3] = {(a[1] * b[2] - a[2] * b[1]) / d, (a[2] * b[0] - a[0] * b[2]) / d,
                (a[0] * b[1] - a[1] * b[0]) / d};
    if (volume) *volume = d / 6.0;
  }
  grads[0] = {0.0, 0.0, 0.0};
  for (int k = 1; k <= dim; ++k)
    for (int c = 0; c < 3; ++c) grads[0][c] -= grads[k][c];
  return grads;
}

double facet_measure(const Mesh& mesh, const Facet& f) {
  const Point& a = mesh.nodes[f.nodes[0]];
  const Point e1 = sub(mesh.nodes[f.nodes[1]], a);
  if (mesh.dim == 2) return std::hypot(e1[0], e1[1]);
  const Point e2 = sub(mesh.nodes[f.nodes[2]], a);
  const Point cr{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                 e1[0] * e2[1] - e1[1] * e2[0]};
  return 0.5 * std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
}

PointStencil locate(const Mesh& mesh, const Point& x, double tolerance) {
  const int dim = mesh.dim;
  const int n = mesh.nodes_per_side;
  std::array<int, 3> cell{0, 0, 0};
  std::array<double, 3> local{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    if (!(x[a] >= -tolerance && x[a] <= 1.0 + tolerance))
      fail(ErrorCode::invalid_argument,
           "evaluate_fem: point outside the domain (coordinate " + std::to_string(a) +
               " = " + std::to_string(x[a]) + ")");
    const double s = std::clamp(x[a], 0.0, 1.0) * (n - 1);
    int c = static_cast<int>(std::floor(s));
    c = std::clamp(c, 0, n - 2);
    cell[a] = c;
    local[a] = std::clamp(s - c, 0.0, 1.0);
  }
  // The Kuhn simplex containing the point orders local coordinates descending.
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.begin() + dim,
                   [&](int i, int j) { return local[i] > local[j]; });

  PointStencil st;
  st.count = dim + 1;
  std::array<int, 3> g = cell;
  st.nodes[0] = mesh.node_index(g[0], g[1], g[2]);
  st.weights[0] = 1.0 - local[order[0]];
  for (int k = 0; k < dim; ++k) {
    g[order[k]] += 1;
    st.nodes[k + 1] = mesh.node_index(g[0], g[1], g[2]);
    const double next = k + 1 < dim ? local[order[k + 1]] : 0.0;
    st.weights[k + 1] = local[order[k]] - next;
  }
  return st;
}

std::vector<double> evaluate_fem(const Mesh& mesh, std::span<const double> coefficients,
                                 std::span<const Point> points) {
  require(coefficients.size() == mesh.nodes.size(),
          "evaluate_fem: coefficient count does not match node count");
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& x : points) {
    const PointStencil st = locate(mesh, x);
    double v = 0.0;
    for (int k = 0; k < st.count; ++k) v += st.weights[k] * coefficients[st.nodes[k]];
    out.push_back(v);
  }
  return out;
}

}  // namespace ptomo
