// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "spd_factor.hpp"
#include "spectral.hpp"

namespace ptomo {

/// Initial/boundary value problem on the unit square or cube.
struct ProblemSpec {
  std::shared_ptr<const Mesh> mesh;
  ScalarField initial;           // empty means u0 = 0
  SourceTerm source;             // empty means f = 0
  BoundaryFlux flux;             // used when face_rates is not set
  /// Separable fluxes g = face_rates[face] * t, one rate per side.
  std::optional<std::array<double, 6>> face_rates;
  double final_time = 0.5;
};

/// g = -magnitude*t on x1 = 0, +magnitude*t on x1 = 1, insulated elsewhere.
ProblemSpec balanced_flux_problem(std::shared_ptr<const Mesh> mesh, double magnitude,
                                  double final_time);

/// Evaluates the spatial load (f(t), phi_k) + <g(t), phi_k> and its step means.
class LoadEvaluator {
 public:
  explicit LoadEvaluator(const ProblemSpec& problem);

  Eigen::VectorXd at(double t) const;
  /// (1/dt) * integral of the load over [k dt, (k+1) dt]. Exact for the
  /// separable linear fluxes; 3-point Gauss in time otherwise.
  Eigen::VectorXd step_mean(long k, double dt) const;
  bool is_zero() const { return zero_; }

 private:
  ProblemSpec problem_;
  std::optional<Eigen::VectorXd> unit_load_;  // load at t = 1 for linear fluxes
  bool zero_ = false;
};

Eigen::VectorXd rhs_mean(const ProblemSpec& problem, long k, double dt);

/// Spatial and parametric operators of the semi-discrete system, split as
/// A = mu I (x) A_unit + S with S = sum_p offdiag(Y^(p)) (x) A^(p).
/// S is never stored; it is applied through its Kronecker factors.
class ParametricOperator {
 public:
  ParametricOperator(SparseSymMatrix mass, SparseSymMatrix unit_stiffness,
                     std::vector<SparseSymMatrix> spline_stiffness, DegreeMatrix lambda,
                     ParameterInterval interval);

  int spatial_size() const { return static_cast<int>(mass_.rows()); }
  std::int64_t basis_size() const { return lambda_.rows(); }
  int parameters() const { return static_cast<int>(spline_stiffness_.size()); }
  double mu() const { return interval_.center(); }

  const SparseSymMatrix& mass() const { return mass_; }
  const SparseSymMatrix& unit_stiffness() const { return unit_stiffness_; }
  const std::vector<SparseSymMatrix>& spline_stiffness() const { return spline_stiffness_; }
  const DegreeMatrix& lambda() const { return lambda_; }
  const ParameterInterval& interval() const { return interval_; }
  const std::vector<TripleEntry>& couplings() const { return couplings_; }

  /// sum_p nnz(offdiag(Y^(p))) * nnz(A^(p)).
  std::int64_t nnz_S() const;

  /// out += scale * mat(S vec(u)) for an M x N coefficient table u.
  void apply_S(const Eigen::MatrixXd& u, Eigen::MatrixXd& out, double scale) const;

 private:
  struct CompactMatrix {
    std::vector<int> rows, row_ptr, cols;
    std::vector<double> values;
  };

  SparseSymMatrix mass_, unit_stiffness_;
  std::vector<SparseSymMatrix> spline_stiffness_;
  std::vector<CompactMatrix> compact_;
  DegreeMatrix lambda_;
  ParameterInterval interval_;
  std::vector<TripleEntry> couplings_;
  // Couplings of each output column j: (p, l, y) with Y^(p)_{jl} = y.
  std::vector<std::int64_t> adj_ptr_;
  std::vector<int> adj_p_;
  std::vector<std::int64_t> adj_col_;
  std::vector<double> adj_val_;
};

ParametricOperator build_operator(const Mesh& mesh, const SplineBasis& basis,
                                  const DegreeMatrix& lambda, const ParameterInterval& e);

/// Explicit S (MN x MN, vec ordering i + j*M). Only for small instances.
Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> assemble_S(
    const ParametricOperator& op);

/// W = K * U column by column for a sparse K and dense U.
void sparse_times_dense(const SparseSymMatrix& k, const Eigen::MatrixXd& u, Eigen::MatrixXd& w);

using SnapshotObserver =
    std::function<void(std::size_t index, double t, const Eigen::MatrixXd& coefficients)>;

struct SolutionSnapshots {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> tables;  // M x N each
};

/// Maps snapshot times to step indices; throws unless every time is a
/// multiple of dt inside [0, T].
std::vector<long> snapshot_steps(std::span<const double> times, double dt, double final_time);

/// Semi-implicit Euler: (B + dt D) u+ = (B - dt S) u + dt r, using the
/// matricized four-step update with one factorization of B + dt mu A.
void semi_implicit_solve(const ParametricOperator& op, const ProblemSpec& problem, double dt,
                         std::span<const double> snapshot_times, const SnapshotObserver& observer);

SolutionSnapshots semi_implicit_solve(const ParametricOperator& op, const ProblemSpec& problem,
                                      double dt, std::span<const double> snapshot_times);

struct NodalSnapshots {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;
};

/// Trapezoidal (Crank-Nicolson) stepping of B u' + A_a u = r(t).
NodalSnapshots crank_nicolson_solve(const Mesh& mesh, const ScalarField& diffusivity,
                                    const ProblemSpec& problem, double dt,
                                    std::span<const double> snapshot_times);

/// Backward Euler with the same step-mean right-hand side as the parametric
/// scheme; the single-parameter reference for surrogate checks.
NodalSnapshots implicit_euler_solve(const Mesh& mesh, const SparseSymMatrix& stiffness,
                                    const ProblemSpec& problem, double dt,
                                    std::span<const double> snapshot_times);

struct StabilityReport {
  std::vector<double> max_norms;  // after each step
  bool finite = true;
  bool blew_up = false;
};

StabilityReport stability_probe(const ParametricOperator& op, const ProblemSpec& problem,
                                double dt);

/// u^T (I (x) B) u for a coefficient table.
double mass_energy(const SparseSymMatrix& mass, const Eigen::MatrixXd& u);

}  // namespace ptomo
