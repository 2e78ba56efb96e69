// SPDX-License-Identifier: Apache-2.0
#include "stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace ptomo {

ProblemSpec balanced_flux_problem(std::shared_ptr<const Mesh> mesh, double magnitude,
                                  double final_time) {
  ProblemSpec p;
  p.mesh = std::move(mesh);
  p.face_rates = std::array<double, 6>{-magnitude, magnitude, 0.0, 0.0, 0.0, 0.0};
  p.final_time = final_time;
  return p;
}

LoadEvaluator::LoadEvaluator(const ProblemSpec& problem) : problem_(problem) {
  require(problem_.mesh != nullptr, "problem has no mesh");
  if (problem_.face_rates) {
    const auto rates = *problem_.face_rates;
    unit_load_ = assemble_boundary_load(
        *problem_.mesh, [rates](const Point&, double t, int face) { return rates[face] * t; }, 1.0);
  }
  zero_ = !problem_.source && (problem_.face_rates ? unit_load_->isZero(0.0) : !problem_.flux);
}

Eigen::VectorXd LoadEvaluator::at(double t) const {
  const Mesh& mesh = *problem_.mesh;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(mesh.node_count());
  if (unit_load_)
    r += t * *unit_load_;
  else if (problem_.flux)
    r += assemble_boundary_load(mesh, problem_.flux, t);
  if (problem_.source) r += assemble_source_load(mesh, problem_.source, t);
  return r;
}

Eigen::VectorXd LoadEvaluator::step_mean(long k, double dt) const {
  const double t0 = k * dt;
  if (zero_) return Eigen::VectorXd::Zero(problem_.mesh->node_count());
  if (unit_load_ && !problem_.source) return (t0 + 0.5 * dt) * *unit_load_;
  // Three-point Gauss-Legendre in time.
  static const double node = std::sqrt(3.0 / 5.0);
  const double mid = t0 + 0.5 * dt;
  Eigen::VectorXd r = (8.0 / 18.0) * at(mid);
  r += (5.0 / 18.0) * at(mid - 0.5 * dt * node);
  r += (5.0 / 18.0) * at(mid + 0.5 * dt * node);
  return r;
}

Eigen::VectorXd rhs_mean(const ProblemSpec& problem, long k, double dt) {
  require(k >= 0, "rhs_mean: negative step index");
  require(dt > 0.0, "rhs_mean: time step must be positive");
  return LoadEvaluator(problem).step_mean(k, dt);
}

ParametricOperator::ParametricOperator(SparseSymMatrix mass, SparseSymMatrix unit_stiffness,
                                       std::vector<SparseSymMatrix> spline_stiffness,
                                       DegreeMatrix lambda, ParameterInterval interval)
    : mass_(std::move(mass)),
      unit_stiffness_(std::move(unit_stiffness)),
      spline_stiffness_(std::move(spline_stiffness)),
      lambda_(std::move(lambda)),
      interval_(interval) {
  const auto m = mass_.rows();
  require(unit_stiffness_.rows() == m, "operator: stiffness and mass sizes differ");
  require(static_cast<int>(spline_stiffness_.size()) == lambda_.parameters(),
          "operator: number of spline stiffness matrices must equal P");
  for (const auto& a : spline_stiffness_)
    require(a.rows() == m, "operator: spline stiffness size mismatch");

  compact_.resize(spline_stiffness_.size());
  for (std::size_t p = 0; p < spline_stiffness_.size(); ++p) {
    const auto& a = spline_stiffness_[p];
    auto& c = compact_[p];
    c.row_ptr.push_back(0);
    for (int i = 0; i < a.outerSize(); ++i) {
      bool any = false;
      for (SparseSymMatrix::InnerIterator it(a, i); it; ++it) {
        c.cols.push_back(static_cast<int>(it.col()));
        c.values.push_back(it.value());
        any = true;
      }
      if (any) {
        c.rows.push_back(i);
        c.row_ptr.push_back(static_cast<int>(c.cols.size()));
      }
    }
  }

  couplings_ = assemble_triple_products(lambda_, interval_);
  const std::int64_t n = lambda_.rows();
  std::vector<std::int64_t> count(n + 1, 0);
  for (const auto& te : couplings_) {
    ++count[te.lower + 1];
    ++count[te.upper + 1];
  }
  for (std::int64_t j = 0; j < n; ++j) count[j + 1] += count[j];
  adj_ptr_ = count;
  adj_p_.resize(adj_ptr_.back());
  adj_col_.resize(adj_ptr_.back());
  adj_val_.resize(adj_ptr_.back());
  std::vector<std::int64_t> fill(adj_ptr_.begin(), adj_ptr_.end() - 1);
  for (const auto& te : couplings_) {
    auto k = fill[te.lower]++;
    adj_p_[k] = te.p;
    adj_col_[k] = te.upper;
    adj_val_[k] = te.value;
    k = fill[te.upper]++;
    adj_p_[k] = te.p;
    adj_col_[k] = te.lower;
    adj_val_[k] = te.value;
  }
}

std::int64_t ParametricOperator::nnz_S() const {
  std::int64_t total = 0;
  for (const auto& te : couplings_) total += 2 * spline_stiffness_[te.p].nonZeros();
  return total;
}

void ParametricOperator::apply_S(const Eigen::MatrixXd& u, Eigen::MatrixXd& out,
                                 double scale) const {
  require(u.rows() == spatial_size() && u.cols() == basis_size(), "apply_S: shape mismatch");
  require(out.rows() == u.rows() && out.cols() == u.cols(), "apply_S: output shape mismatch");
  const std::int64_t n = basis_size();
  for (std::int64_t j = 0; j < n; ++j) {
    double* dst = out.col(j).data();
    for (auto k = adj_ptr_[j]; k < adj_ptr_[j + 1]; ++k) {
      const CompactMatrix& a = compact_[adj_p_[k]];
      const double* src = u.col(adj_col_[k]).data();
      const double y = scale * adj_val_[k];
      for (std::size_t r = 0; r < a.rows.size(); ++r) {
        double acc = 0.0;
        for (int e = a.row_ptr[r]; e < a.row_ptr[r + 1]; ++e) acc += a.values[e] * src[a.cols[e]];
        dst[a.rows[r]] += y * acc;
      }
    }
  }
}

ParametricOperator build_operator(const Mesh& mesh, const SplineBasis& basis,
                                  const DegreeMatrix& lambda, const ParameterInterval& e) {
  require(basis.size() == lambda.parameters(),
          "build_operator: spline count does not match the number of parameters");
  require(e.lo > 0.0, "build_operator: diffusivity interval must be positive");
  return ParametricOperator(assemble_mass(mesh), assemble_stiffness(mesh),
                            assemble_spline_stiffness(mesh, basis), lambda, e);
}

Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> assemble_S(
    const ParametricOperator& op) {
  using T = Eigen::Triplet<double, std::int64_t>;
  const std::int64_t m = op.spatial_size();
  const std::int64_t mn = m * op.basis_size();
  std::vector<T> t;
  for (const auto& te : op.couplings()) {
    const auto& a = op.spline_stiffness()[te.p];
    for (int i = 0; i < a.outerSize(); ++i)
      for (SparseSymMatrix::InnerIterator it(a, i); it; ++it) {
        t.emplace_back(te.lower * m + i, te.upper * m + it.col(), te.value * it.value());
        t.emplace_back(te.upper * m + i, te.lower * m + it.col(), te.value * it.value());
      }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> s(mn, mn);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

void sparse_times_dense(const SparseSymMatrix& k, const Eigen::MatrixXd& u, Eigen::MatrixXd& w) {
  require(k.cols() == u.rows(), "sparse_times_dense: shape mismatch");
  w.resize(k.rows(), u.cols());
  const int* outer = k.outerIndexPtr();
  const int* inner = k.innerIndexPtr();
  const double* vals = k.valuePtr();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double* src = u.col(j).data();
    double* dst = w.col(j).data();
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      double acc = 0.0;
      for (int e = outer[i]; e < outer[i + 1]; ++e) acc += vals[e] * src[inner[e]];
      dst[i] = acc;
    }
  }
}

std::vector<long> snapshot_steps(std::span<const double> times, double dt, double final_time) {
  require(dt > 0.0, "time step must be positive");
  std::vector<long> steps;
  steps.reserve(times.size());
  for (double t : times) {
    if (t < -1e-12 || t > final_time * (1.0 + 1e-12) + 1e-12)
      fail(ErrorCode::invalid_argument,
           "snapshot time " + std::to_string(t) + " is outside [0, T]");
    const long k = std::lround(t / dt);
    if (std::abs(k * dt - t) > 1e-9 * std::max(dt, std::abs(t)))
      fail(ErrorCode::invalid_argument,
           "snapshot time " + std::to_string(t) + " is not on the time-step grid");
    steps.push_back(k);
  }
  return steps;
}

namespace {

Eigen::VectorXd interpolate_initial(const ProblemSpec& problem) {
  const Mesh& mesh = *problem.mesh;
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(mesh.node_count());
  if (problem.initial)
    for (int i = 0; i < mesh.node_count(); ++i) u0[i] = problem.initial(mesh.nodes[i]);
  return u0;
}

// Runs `steps` semi-implicit steps, calling `on_step(k, u)` with k = 0 for
// the initial table and after every step.
void run_semi_implicit(const ParametricOperator& op, const ProblemSpec& problem, double dt,
                       long steps, const std::function<void(long, const Eigen::MatrixXd&)>& on_step) {
  require(problem.mesh && problem.mesh->node_count() == op.spatial_size(),
          "semi_implicit_solve: problem mesh does not match the operator");
  const Eigen::Index m = op.spatial_size();
  const Eigen::Index n = op.basis_size();
  const LoadEvaluator load(problem);

  SparseSymMatrix system = op.mass() + (dt * op.mu()) * op.unit_stiffness();
  const SpdFactor factor(system);

  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, n);
  u.col(0) = interpolate_initial(problem);
  Eigen::MatrixXd w(m, n);
  on_step(0, u);
  for (long k = 0; k < steps; ++k) {
    sparse_times_dense(op.mass(), u, w);                 // Xi = B mat(u)
    op.apply_S(u, w, -dt);                               // xi = vec(Xi) - dt S u
    if (!load.is_zero()) w.col(0) += dt * load.step_mean(k, dt);  // + dt r
    factor.solve_in_place(w);                            // (B + dt mu A) Y = mat(xi)
    u.swap(w);
    on_step(k + 1, u);
  }
}

NodalSnapshots run_single(const Mesh& mesh, const SparseSymMatrix& lhs, const SparseSymMatrix& rhs_op,
                          const ProblemSpec& problem, double dt, std::span<const double> times,
                          bool trapezoidal) {
  const std::vector<long> steps = snapshot_steps(times, dt, problem.final_time);
  const long last = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());
  const LoadEvaluator load(problem);
  const SpdFactor factor(lhs);

  NodalSnapshots out;
  out.times.assign(times.begin(), times.end());
  out.values.resize(times.size());
  Eigen::VectorXd u = interpolate_initial(problem);
  auto record = [&](long k) {
    for (std::size_t q = 0; q < steps.size(); ++q)
      if (steps[q] == k) out.values[q] = u;
  };
  record(0);
  Eigen::VectorXd r_prev = trapezoidal ? load.at(0.0) : Eigen::VectorXd();
  for (long k = 0; k < last; ++k) {
    Eigen::VectorXd b = rhs_op * u;
    if (trapezoidal) {
      Eigen::VectorXd r_next = load.at((k + 1) * dt);
      b += (0.5 * dt) * (r_prev + r_next);
      r_prev = std::move(r_next);
    } else if (!load.is_zero()) {
      b += dt * load.step_mean(k, dt);
    }
    u = factor.solve(b);
    record(k + 1);
  }
  (void)mesh;
  return out;
}

}  // namespace

void semi_implicit_solve(const ParametricOperator& op, const ProblemSpec& problem, double dt,
                         std::span<const double> snapshot_times, const SnapshotObserver& observer) {
  const std::vector<long> steps = snapshot_steps(snapshot_times, dt, problem.final_time);
  const long last = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());
  run_semi_implicit(op, problem, dt, last, [&](long k, const Eigen::MatrixXd& u) {
    for (std::size_t q = 0; q < steps.size(); ++q)
      if (steps[q] == k) observer(q, snapshot_times[q], u);
  });
}

SolutionSnapshots semi_implicit_solve(const ParametricOperator& op, const ProblemSpec& problem,
                                      double dt, std::span<const double> snapshot_times) {
  SolutionSnapshots out;
  out.times.assign(snapshot_times.begin(), snapshot_times.end());
  out.tables.resize(snapshot_times.size());
  semi_implicit_solve(op, problem, dt, snapshot_times,
                      [&](std::size_t q, double, const Eigen::MatrixXd& u) { out.tables[q] = u; });
  return out;
}

NodalSnapshots crank_nicolson_solve(const Mesh& mesh, const ScalarField& diffusivity,
                                    const ProblemSpec& problem, double dt,
                                    std::span<const double> snapshot_times) {
  require(problem.mesh && problem.mesh->node_count() == mesh.node_count(),
          "crank_nicolson_solve: problem mesh does not match");
  const SparseSymMatrix mass = assemble_mass(mesh);
  const SparseSymMatrix stiff = assemble_stiffness(mesh, diffusivity, 4);
  const SparseSymMatrix lhs = mass + (0.5 * dt) * stiff;
  const SparseSymMatrix rhs = mass - (0.5 * dt) * stiff;
  return run_single(mesh, lhs, rhs, problem, dt, snapshot_times, true);
}

NodalSnapshots implicit_euler_solve(const Mesh& mesh, const SparseSymMatrix& stiffness,
                                    const ProblemSpec& problem, double dt,
                                    std::span<const double> snapshot_times) {
  require(problem.mesh && problem.mesh->node_count() == mesh.node_count(),
          "implicit_euler_solve: problem mesh does not match");
  const SparseSymMatrix mass = assemble_mass(mesh);
  const SparseSymMatrix lhs = mass + dt * stiffness;
  return run_single(mesh, lhs, mass, problem, dt, snapshot_times, false);
}

StabilityReport stability_probe(const ParametricOperator& op, const ProblemSpec& problem,
                                double dt) {
  require(dt > 0.0, "stability_probe: time step must be positive");
  const long steps = std::lround(problem.final_time / dt);
  StabilityReport report;
  // Growth beyond this bound cannot come from the bounded, linearly growing
  // forcing of the problems this probe is used on.
  constexpr double kBlowUp = 1e8;
  run_semi_implicit(op, problem, dt, steps, [&](long k, const Eigen::MatrixXd& u) {
    if (k == 0) return;
    const bool finite = u.allFinite();
    const double norm = finite ? u.cwiseAbs().maxCoeff() : INFINITY;
    report.max_norms.push_back(norm);
    if (!finite) report.finite = false;
    if (!finite || norm > kBlowUp) report.blew_up = true;
  });
  return report;
}

double mass_energy(const SparseSymMatrix& mass, const Eigen::MatrixXd& u) {
  Eigen::MatrixXd w;
  sparse_times_dense(mass, u, w);
  return (u.array() * w.array()).sum();
}

}  // namespace ptomo
