// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference computations that share no code path with the core library
// beyond its public data types. Slow by design; small instances only.

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "spectral.hpp"
#include "stepper.hpp"
#include "surrogate.hpp"

namespace ptomo::oracle {

/// Binomial coefficient by exact 128-bit multiplicative formula.
std::uint64_t binomial(int n, int k);

/// Every multi-index of P variables with total degree <= n, enumerated by
/// brute force over a counter and sorted by (degree ascending, reverse
/// lexicographic).
std::vector<std::vector<int>> multi_indices(int P, int n);

/// Gauss-Legendre nodes/weights on [-1,1] from the Jacobi matrix
/// eigenproblem (Golub-Welsch).
void golub_welsch(int points, std::vector<double>& nodes, std::vector<double>& weights);

/// Orthonormal Legendre polynomial of degree r on E under the uniform
/// probability measure, via std::legendre.
double legendre(const ParameterInterval& e, int r, double x);

/// Y^(p)_{jl} = E[theta_p phi_j phi_l] by tensor Gauss quadrature (dense).
Eigen::MatrixXd triple_product_matrix(int p, const std::vector<std::vector<int>>& indices,
                                      const ParameterInterval& e);

/// phi_j(theta) straight from the definition.
double basis_function(const std::vector<int>& index, const ParameterInterval& e,
                      const std::vector<double>& theta);

/// Dense MN x MN semi-implicit Euler: (B + dt D) u+ = (B - dt S) u + dt r.
/// Returns the state after each of `steps` steps in vec ordering i + j*M.
std::vector<Eigen::VectorXd> dense_semi_implicit(const Eigen::MatrixXd& mass,
                                                 const std::vector<Eigen::MatrixXd>& spline_stiffness,
                                                 const std::vector<Eigen::MatrixXd>& y,
                                                 double mu, double dt,
                                                 const Eigen::VectorXd& u0_block,
                                                 const std::vector<Eigen::VectorXd>& loads,
                                                 int steps);

/// Central differences of U(theta) with step h in each coordinate.
Eigen::MatrixXd finite_difference_jacobian(const ParametricSurrogate& s,
                                           const std::vector<double>& theta, double h);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ptomo::oracle
