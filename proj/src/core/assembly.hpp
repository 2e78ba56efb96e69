// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "mesh.hpp"
#include "splines.hpp"

namespace ptomo {

/// Symmetric sparse matrix in compressed sparse row form with sorted column
/// indices. The stored pattern is the structural pattern produced by
/// assembly: every element that contributes adds its full local block, even
/// where individual products happen to cancel.
using SparseSymMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Boundary flux g(x, t) on the facet lying on side `face` (see Facet).
using BoundaryFlux = std::function<double(const Point& x, double t, int face)>;
using SourceTerm = std::function<double(const Point& x, double t)>;

/// B_ik = (phi_i, phi_k).
SparseSymMatrix assemble_mass(const Mesh& mesh);

/// A_ik = (w grad phi_i, grad phi_k). Element integrals of `weight` use a
/// simplex rule exact to `weight_degree`; elements on which the integrated
/// weight vanishes contribute nothing to the pattern.
SparseSymMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& weight,
                                   int weight_degree = 2);

/// Unit-weight stiffness A.
SparseSymMatrix assemble_stiffness(const Mesh& mesh);

/// A^(p) for every spline psi_p in one sweep over the elements. The rule on
/// each simplex is exact to degree s+2.
std::vector<SparseSymMatrix> assemble_spline_stiffness(const Mesh& mesh,
                                                       const SplineBasis& basis);

/// Entries <g(t), phi_k> integrated facet by facet.
Eigen::VectorXd assemble_boundary_load(const Mesh& mesh, const BoundaryFlux& g, double t);

/// Entries (f(t), phi_k).
Eigen::VectorXd assemble_source_load(const Mesh& mesh, const SourceTerm& f, double t);

/// eta = sum_p nnz(A^(p)) / nnz(A).
double compute_eta(const std::vector<SparseSymMatrix>& stiffness_list,
                   const SparseSymMatrix& unit_stiffness);

}  // namespace ptomo
