// SPDX-License-Identifier: Apache-2.0
#include "assembly.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "quadrature.hpp"

namespace ptomo {

namespace {

using Triplet = Eigen::Triplet<double, int>;

double factorial(int d) { return d == 3 ? 6.0 : (d == 2 ? 2.0 : 1.0); }

Point map_point(const Mesh& mesh, std::span<const int> verts, const std::array<double, 3>& xi,
                int ref_dim) {
  const Point& v0 = mesh.nodes[verts[0]];
  Point x = v0;
  for (int k = 0; k < ref_dim; ++k) {
    const Point& vk = mesh.nodes[verts[k + 1]];
    for (int c = 0; c < 3; ++c) x[c] += xi[k] * (vk[c] - v0[c]);
  }
  return x;
}

void add_local_stiffness(std::vector<Triplet>& out, const std::array<int, 4>& el,
                         const std::array<Point, 4>& grads, int dim, double scale) {
  for (int i = 0; i <= dim; ++i)
    for (int k = 0; k <= dim; ++k) {
      const double g = grads[i][0] * grads[k][0] + grads[i][1] * grads[k][1] +
                       grads[i][2] * grads[k][2];
      out.emplace_back(el[i], el[k], scale * g);
    }
}

SparseSymMatrix finalize(int size, const std::vector<Triplet>& triplets) {
  SparseSymMatrix m(size, size);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SparseSymMatrix assemble_mass(const Mesh& mesh) {
  const int dim = mesh.dim;
  std::vector<Triplet> t;
  t.reserve(mesh.elements.size() * (dim + 1) * (dim + 1));
  // Exact P1 mass: vol/((d+1)(d+2)) * (1 + delta_ik).
  const double denom = (dim + 1.0) * (dim + 2.0);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double vol = element_volume(mesh, e);
    const auto& el = mesh.elements[e];
    for (int i = 0; i <= dim; ++i)
      for (int k = 0; k <= dim; ++k) t.emplace_back(el[i], el[k], vol * (i == k ? 2.0 : 1.0) / denom);
  }
  return finalize(mesh.node_count(), t);
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& weight,
                                   int weight_degree) {
  const int dim = mesh.dim;
  const SimplexRule rule = simplex_rule(dim, weight_degree);
  std::vector<Triplet> t;
  t.reserve(mesh.elements.size() * (dim + 1) * (dim + 1));
  for (int e = 0; e < mesh.element_count(); ++e) {
    double vol = 0.0;
    const auto grads = element_gradients(mesh, e, &vol);
    const auto& el = mesh.elements[e];
    double integral = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      integral += rule.weights[q] * weight(map_point(mesh, el, rule.points[q], dim));
    integral *= vol * factorial(dim);
    if (integral == 0.0) continue;
    add_local_stiffness(t, el, grads, dim, integral);
  }
  return finalize(mesh.node_count(), t);
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh) {
  const int dim = mesh.dim;
  std::vector<Triplet> t;
  t.reserve(mesh.elements.size() * (dim + 1) * (dim + 1));
  for (int e = 0; e < mesh.element_count(); ++e) {
    double vol = 0.0;
    const auto grads = element_gradients(mesh, e, &vol);
    add_local_stiffness(t, mesh.elements[e], grads, dim, vol);
  }
  return finalize(mesh.node_count(), t);
}

std::vector<SparseSymMatrix> assemble_spline_stiffness(const Mesh& mesh,
                                                       const SplineBasis& basis) {
  require(basis.dim() == mesh.dim, "assemble_spline_stiffness: dimension mismatch");
  const int dim = mesh.dim;
  const SimplexRule rule = simplex_rule(dim, basis.degree() + 2);
  std::vector<std::vector<Triplet>> per_p(basis.size());
  SplineStencil st;
  std::vector<std::pair<int, double>> integrals;
  for (int e = 0; e < mesh.element_count(); ++e) {
    double vol = 0.0;
    const auto grads = element_gradients(mesh, e, &vol);
    const auto& el = mesh.elements[e];
    integrals.clear();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.nonzero(map_point(mesh, el, rule.points[q], dim), st);
      for (std::size_t k = 0; k < st.indices.size(); ++k) {
        const int p = st.indices[k];
        auto it = std::find_if(integrals.begin(), integrals.end(),
                               [p](const auto& pr) { return pr.first == p; });
        if (it == integrals.end()) {
          integrals.emplace_back(p, 0.0);
          it = integrals.end() - 1;
        }
        it->second += rule.weights[q] * st.values[k];
      }
    }
    for (const auto& [p, w] : integrals) {
      const double integral = w * vol * factorial(dim);
      if (integral == 0.0) continue;
      add_local_stiffness(per_p[p], el, grads, dim, integral);
    }
  }
  std::vector<SparseSymMatrix> out;
  out.reserve(basis.size());
  for (auto& t : per_p) {
    out.push_back(finalize(mesh.node_count(), t));
    std::vector<Triplet>().swap(t);
  }
  return out;
}

Eigen::VectorXd assemble_boundary_load(const Mesh& mesh, const BoundaryFlux& g, double t) {
  const int dim = mesh.dim;
  const int fdim = dim - 1;
  const SimplexRule rule = simplex_rule(fdim, 2);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.node_count());
  for (const Facet& f : mesh.boundary_facets) {
    const double scale = facet_measure(mesh, f) * factorial(fdim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& xi = rule.points[q];
      const double gv = g(map_point(mesh, std::span<const int>(f.nodes.data(), dim), xi, fdim), t, f.face);
      if (gv == 0.0) continue;
      double lambda0 = 1.0;
      for (int k = 0; k < fdim; ++k) lambda0 -= xi[k];
      const double w = rule.weights[q] * scale * gv;
      load[f.nodes[0]] += w * lambda0;
      for (int k = 0; k < fdim; ++k) load[f.nodes[k + 1]] += w * xi[k];
    }
  }
  return load;
}

Eigen::VectorXd assemble_source_load(const Mesh& mesh, const SourceTerm& f, double t) {
  const int dim = mesh.dim;
  const SimplexRule rule = simplex_rule(dim, 3);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[e];
    const double scale = element_volume(mesh, e) * factorial(dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& xi = rule.points[q];
      const double fv = f(map_point(mesh, el, xi, dim), t);
      if (fv == 0.0) continue;
      double lambda0 = 1.0;
      for (int k = 0; k < dim; ++k) lambda0 -= xi[k];
      const double w = rule.weights[q] * scale * fv;
      load[el[0]] += w * lambda0;
      for (int k = 0; k < dim; ++k) load[el[k + 1]] += w * xi[k];
    }
  }
  return load;
}

double compute_eta(const std::vector<SparseSymMatrix>& stiffness_list,
                   const SparseSymMatrix& unit_stiffness) {
  require(unit_stiffness.nonZeros() > 0, "compute_eta: empty reference stiffness");
  double total = 0.0;
  for (const auto& a : stiffness_list) {
    require(a.rows() == unit_stiffness.rows(), "compute_eta: dimension mismatch");
    total += static_cast<double>(a.nonZeros());
  }
  return total / static_cast<double>(unit_stiffness.nonZeros());
}

}  // namespace ptomo
