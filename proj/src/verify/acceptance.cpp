// SPDX-License-Identifier: Apache-2.0
#include "acceptance.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "assembly.hpp"
#include "container.hpp"
#include "error.hpp"
#include "forward.hpp"
#include "inverse.hpp"
#include "oracles.hpp"
#include "pipeline.hpp"

namespace ptomo::verify {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Tolerances, one block per criterion.
constexpr double kPartitionTol = 1e-10;       // 2
constexpr double kKroneckerTol = 1e-12;       // 3
constexpr double kTripleTol = 1e-12;          // 4
constexpr double kJacobianTol = 1e-6;         // 5
constexpr double kJacobianStep = 1e-5;        // 5, times the half width of E
constexpr double kMeanTol = 1e-8;             // 6
constexpr double kSemiOrderLo = 0.6;          // 7
constexpr double kSemiOrderHi = 1.4;          // 7
constexpr double kCnOrderMin = 1.8;           // 7
constexpr double kSurrogateTol = 0.02;        // 8
constexpr double kMisfitLo = 0.8;             // 9
constexpr double kMisfitHi = 1.2;             // 9
constexpr double kFieldErrorTol = 0.10;       // 9
constexpr double kInverseCrimeTol = 1e-8;     // 9
constexpr double kDiagnosticRatioLo = 0.5;    // 10
constexpr double kDiagnosticRatioHi = 2.0;    // 10
constexpr double kApproxLo = 0.05;            // 10
constexpr double kApproxHi = 0.3;             // 10
constexpr double kSlopeLo = 1.6;              // 11
constexpr double kSlopeHi = 2.4;              // 11
constexpr double kReconstructSeconds = 10.0;  // 11

ForwardSetup desk_setup() {
  ForwardSetup f;
  f.spline_per_axis = 4;
  f.spline_degree = 1;
  f.nodes_per_side = 21;
  f.layout = default_layout(2);
  return f;
}

ForwardSetup reduced_3d(int nodes, int per_axis) {
  ForwardSetup f;
  f.dim = 3;
  f.spline_per_axis = per_axis;
  f.spline_degree = 1;
  f.nodes_per_side = nodes;
  f.flux = 40.0;
  f.layout = default_layout(3);
  return f;
}

struct Assembled {
  std::shared_ptr<const Mesh> mesh;
  std::unique_ptr<ParametricOperator> op;
};

Assembled assemble(const ForwardSetup& f) {
  Assembled a;
  a.mesh = std::make_shared<const Mesh>(build_mesh(f.dim, f.nodes_per_side));
  const SplineBasis basis = build_partition(f.dim, f.spline_per_axis, f.spline_degree);
  a.op = std::make_unique<ParametricOperator>(
      build_operator(*a.mesh, basis, total_degree_indices(basis.size(), f.total_degree), f.interval));
  return a;
}

struct ObservedForward {
  ParametricSurrogate surrogate;
  double max_mean = 0.0;  // max over steps of |mass-weighted mean of column 0|
};

// Steps to T observing every step: tracks the mean of the deterministic
// mode and feeds measurement times to the surrogate builder.
ObservedForward observed_forward(const ForwardSetup& f, const Assembled& a) {
  const long last = std::lround(f.final_time / f.dt);
  std::vector<double> times(last);
  for (long k = 0; k < last; ++k) times[k] = (k + 1) * f.dt;
  std::map<long, std::size_t> layout_index;
  for (std::size_t i = 0; i < f.layout.times.size(); ++i)
    layout_index[std::lround(f.layout.times[i] / f.dt)] = i;

  SurrogateBuilder builder(*a.mesh, f.layout, a.op->basis_size());
  ObservedForward out;
  const ProblemSpec problem = balanced_flux_problem(a.mesh, f.flux, f.final_time);
  semi_implicit_solve(*a.op, problem, f.dt, times,
                      [&](std::size_t q, double, const Eigen::MatrixXd& u) {
                        const double mean = std::abs((a.op->mass() * u.col(0)).sum());
                        out.max_mean = std::max(out.max_mean, mean);
                        const auto it = layout_index.find(static_cast<long>(q) + 1);
                        if (it != layout_index.end()) builder.add_snapshot(it->second, u);
                      });
  out.surrogate = builder.finish(a.op->lambda(), f.interval,
                                 {f.dim, f.spline_per_axis, f.spline_degree},
                                 {f.nodes_per_side, f.dt, f.final_time, f.flux});
  return out;
}

struct Context {
  explicit Context(Tier t) : tier(t) {}

  Tier tier;
  std::mt19937_64 rng{20240607};

  std::optional<ParametricSurrogate> desk;
  const ParametricSurrogate& desk_surrogate() {
    if (!desk) desk = build_surrogate(desk_setup());
    return *desk;
  }

  std::optional<Assembled> full_ops;
  const Assembled& full_operator() {
    if (!full_ops) full_ops = assemble(ForwardSetup{.layout = default_layout(2)});
    return *full_ops;
  }
  std::optional<ObservedForward> full;
  const ObservedForward& full_forward() {
    if (!full) full = observed_forward(ForwardSetup{.layout = default_layout(2)}, full_operator());
    return *full;
  }

  std::optional<ObservedForward> cube;
  const ObservedForward& cube_forward() {
    if (!cube) {
      const ForwardSetup f = reduced_3d(14, 4);
      cube = observed_forward(f, assemble(f));
    }
    return *cube;
  }

  std::optional<MeasurementSet> full_data;
  std::optional<Reconstruction> full_rec;
  const Reconstruction& full_reconstruction() {
    if (!full_rec) {
      RunConfig c = default_config(2);
      c.morozov = false;
      full_data = run_simulate(c);
      full_rec = run_reconstruct(c, full_forward().surrogate, *full_data);
    }
    return *full_rec;
  }

  std::vector<double> uniform(int count, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(count);
    for (double& x : v) x = d(rng);
    return v;
  }
};

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [FAIL]");
  }
};

// ---- 1 ---------------------------------------------------------------------

void combinatorics(Context&, Outcome& o) {
  struct Case {
    int P, n;
    bool brute;
  };
  const Case cases[] = {{196, 2, false}, {216, 2, false}, {5, 3, true}, {7, 4, true},
                        {3, 1, true},    {4, 0, true},    {8, 2, true}, {6, 5, true}};
  const ParameterInterval e(0.5, 2.0);
  for (const Case& c : cases) {
    const std::string tag = "(" + std::to_string(c.P) + "," + std::to_string(c.n) + ")";
    const DegreeMatrix lam = total_degree_indices(c.P, c.n);
    const auto n_expected = static_cast<std::int64_t>(oracle::binomial(c.P + c.n, c.n));
    const auto nnz_expected =
        c.n == 0 ? 0 : static_cast<std::int64_t>(c.P * oracle::binomial(c.P + c.n - 1, c.n - 1));
    bool ok = lam.rows() == n_expected && total_degree_count(c.P, c.n) == n_expected &&
              lam.nnz() == nnz_expected && nnz_lambda(c.P, c.n) == nnz_expected;

    const auto couplings = assemble_triple_products(lam, e);
    std::vector<std::int64_t> per_p(c.P, 0);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& t : couplings) {
      ++per_p[t.p];
      if (t.lower >= t.upper || !seen.insert({t.lower, t.upper}).second) ok = false;
    }
    const std::int64_t off_expected = c.P ? 2 * nnz_expected / c.P : 0;
    for (int p = 0; p < c.P; ++p)
      if (2 * per_p[p] != off_expected) ok = false;
    // Cross-check the coupling count against the assembled Y_p.
    for (int p : {0, c.P - 1}) {
      const auto y = assemble_Y(p, lam, e);
      std::int64_t off = 0;
      for (Eigen::Index i = 0; i < y.outerSize(); ++i)
        for (decltype(y)::InnerIterator it(y, i); it; ++it)
          if (it.col() != i && it.value() != 0.0) ++off;
      if (off != off_expected) ok = false;
    }
    if (c.brute) {
      const auto ref = oracle::multi_indices(c.P, c.n);
      ok = ok && static_cast<std::int64_t>(ref.size()) == lam.rows();
      for (std::int64_t j = 0; ok && j < lam.rows(); ++j)
        for (int p = 0; p < c.P; ++p)
          if (lam.entry(j, p) != ref[j][p]) ok = false;
    }
    o.check(ok, tag + " N=" + std::to_string(lam.rows()) + " nnz=" + std::to_string(lam.nnz()));
  }
}

// ---- 2 ---------------------------------------------------------------------

void partition_of_unity(Context&, Outcome& o) {
  struct Case {
    int dim, nodes, m, s;
  };
  for (const Case& c : {Case{2, 37, 14, 2}, Case{3, 26, 6, 1}}) {
    const Mesh mesh = build_mesh(c.dim, c.nodes);
    const SplineBasis basis = build_partition(c.dim, c.m, c.s);
    const auto parts = assemble_spline_stiffness(mesh, basis);
    const SparseSymMatrix a = assemble_stiffness(mesh);
    SparseSymMatrix sum = parts.front();
    for (std::size_t p = 1; p < parts.size(); ++p) sum += parts[p];
    const double rel = SparseSymMatrix(sum - a).norm() / a.norm();
    o.check(rel <= kPartitionTol, std::to_string(c.dim) + "D P=" + std::to_string(basis.size()) +
                                       " rel " + num(rel));
  }
}

// ---- 3 ---------------------------------------------------------------------

void kronecker_stepping(Context&, Outcome& o) {
  struct Case {
    int dim, nodes, m, s, n;
  };
  const Case cases[] = {{2, 4, 2, 1, 2}, {2, 5, 3, 2, 2}, {2, 6, 2, 1, 3}, {2, 7, 3, 1, 1},
                        {2, 5, 2, 1, 0}, {3, 3, 2, 1, 2}, {3, 4, 2, 1, 1}};
  const ParameterInterval e(0.5, 2.0);
  constexpr double dt = 0.01;
  constexpr int steps = 10;
  std::vector<double> times(steps);
  for (int k = 0; k < steps; ++k) times[k] = (k + 1) * dt;

  for (const Case& c : cases) {
    auto mesh = std::make_shared<const Mesh>(build_mesh(c.dim, c.nodes));
    const SplineBasis basis = build_partition(c.dim, c.m, c.s);
    const int P = basis.size();
    const DegreeMatrix lam = total_degree_indices(P, c.n);
    const ParametricOperator op = build_operator(*mesh, basis, lam, e);
    const int M = mesh->node_count();
    const auto N = lam.rows();

    ProblemSpec problem = balanced_flux_problem(mesh, 20.0, 0.5);
    problem.initial = [](const Point& x) { return 1.0 + x[0] * x[1] - 0.5 * x[2]; };
    const SolutionSnapshots fast = semi_implicit_solve(op, problem, dt, times);

    const auto indices = oracle::multi_indices(P, c.n);
    std::vector<Eigen::MatrixXd> a, y;
    for (int p = 0; p < P; ++p) {
      a.emplace_back(Eigen::MatrixXd(op.spline_stiffness()[p]));
      y.push_back(oracle::triple_product_matrix(p, indices, e));
    }
    Eigen::VectorXd u0(M);
    for (int i = 0; i < M; ++i) u0[i] = problem.initial(mesh->nodes[i]);
    const LoadEvaluator load(problem);
    std::vector<Eigen::VectorXd> loads;
    for (int k = 0; k < steps; ++k) loads.push_back(load.step_mean(k, dt));
    const auto slow = oracle::dense_semi_implicit(Eigen::MatrixXd(op.mass()), a, y, e.center(), dt,
                                                  u0, loads, steps);
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      const Eigen::Map<const Eigen::VectorXd> v(fast.tables[k].data(), M * N);
      worst = std::max(worst, (v - slow[k]).norm() / slow[k].norm());
    }
    o.check(worst <= kKroneckerTol, std::to_string(c.dim) + "D MN=" + std::to_string(M * N) +
                                        " n=" + std::to_string(c.n) + " " + num(worst));
  }
}

// ---- 4 ---------------------------------------------------------------------

void triple_products(Context&, Outcome& o) {
  double worst = 0.0;
  int cases = 0;
  for (const ParameterInterval e : {ParameterInterval(0.5, 2.0), ParameterInterval(1.0, 3.0),
                                    ParameterInterval(0.1, 0.3)})
    for (int P = 1; P <= 3; ++P)
      for (int n = 0; n <= 3; ++n) {
        const DegreeMatrix lam = total_degree_indices(P, n);
        const auto indices = oracle::multi_indices(P, n);
        for (int p = 0; p < P; ++p) {
          const Eigen::MatrixXd fast = Eigen::MatrixXd(assemble_Y(p, lam, e));
          const Eigen::MatrixXd ref = oracle::triple_product_matrix(p, indices, e);
          const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
          worst = std::max(worst, (fast - ref).cwiseAbs().maxCoeff() / scale);
          ++cases;
        }
      }
  o.check(worst <= kTripleTol, std::to_string(cases) + " matrices, max dev " + num(worst));
}

// ---- 5 ---------------------------------------------------------------------

void jacobian(Context& ctx, Outcome& o) {
  const ParametricSurrogate& s = ctx.desk_surrogate();
  const auto& e = s.interval();
  const double h = kJacobianStep * e.half_width();
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto theta = ctx.uniform(s.P(), e.lo + 0.1 * (e.hi - e.lo), e.hi - 0.1 * (e.hi - e.lo));
    const Eigen::MatrixXd j = s.eval_JU(theta);
    const Eigen::MatrixXd fd = oracle::finite_difference_jacobian(s, theta, h);
    worst = std::max(worst, (j - fd).cwiseAbs().maxCoeff() / fd.cwiseAbs().maxCoeff());
  }
  o.check(worst <= kJacobianTol, "P=" + std::to_string(s.P()) + ", 10 points, max rel " + num(worst));
}

// ---- 6 ---------------------------------------------------------------------

void mean_preservation(Context& ctx, Outcome& o) {
  auto report = [&](const std::string& tag, double mean) {
    o.check(mean <= kMeanTol, tag + " max |mean| " + num(mean));
  };
  {
    const ForwardSetup f = desk_setup();
    report("2D desk", observed_forward(f, assemble(f)).max_mean);
  }
  if (ctx.tier == Tier::quick) {
    const ForwardSetup f = reduced_3d(8, 3);
    report("3D 8^3", observed_forward(f, assemble(f)).max_mean);
  } else {
    report("2D full", ctx.full_forward().max_mean);
    report("3D 14^3", ctx.cube_forward().max_mean);
  }
}

// ---- 7 ---------------------------------------------------------------------

double self_convergence_order(const std::vector<Eigen::VectorXd>& finals, double* coarse) {
  const double d1 = (finals[0] - finals[1]).norm();
  const double d2 = (finals[1] - finals[2]).norm();
  const double d3 = (finals[2] - finals[3]).norm();
  if (coarse) *coarse = std::log2(d1 / d2);
  return std::log2(d2 / d3);
}

void stability(Context& ctx, Outcome& o) {
  {
    const Assembled& a = ctx.full_operator();
    const StabilityReport r = stability_probe(*a.op, balanced_flux_problem(a.mesh, 20.0, 0.5), 0.1);
    o.check(r.finite && !r.blew_up && r.max_norms.size() == 5,
            "full 2D dt=0.1: " + std::to_string(r.max_norms.size()) + " steps, max " +
                num(r.max_norms.empty() ? 0.0 : r.max_norms.back()));
  }
  const double dts[] = {0.02, 0.01, 0.005, 0.0025};
  {
    ForwardSetup f = desk_setup();
    f.nodes_per_side = 11;
    f.spline_per_axis = 3;
    const Assembled a = assemble(f);
    const ProblemSpec problem = balanced_flux_problem(a.mesh, 20.0, 0.5);
    const double t_end[] = {0.5};
    std::vector<Eigen::VectorXd> finals;
    for (double dt : dts) {
      const Eigen::MatrixXd u = semi_implicit_solve(*a.op, problem, dt, t_end).tables[0];
      finals.emplace_back(Eigen::Map<const Eigen::VectorXd>(u.data(), u.size()));
    }
    double coarse = 0.0;
    const double order = self_convergence_order(finals, &coarse);
    o.check(order >= kSemiOrderLo && order <= kSemiOrderHi,
            "semi-implicit order " + num(coarse) + ", " + num(order));
  }
  {
    auto mesh = std::make_shared<const Mesh>(build_mesh(2, 33));
    ProblemSpec problem;
    problem.mesh = mesh;
    problem.final_time = 0.2;
    problem.initial = [](const Point& x) { return std::cos(M_PI * x[0]); };
    const double t_end[] = {0.2};
    std::vector<Eigen::VectorXd> finals;
    for (double dt : dts)
      finals.push_back(
          crank_nicolson_solve(*mesh, [](const Point&) { return 1.0; }, problem, dt, t_end).values[0]);
    double coarse = 0.0;
    const double order = self_convergence_order(finals, &coarse);
    o.check(order >= kCnOrderMin, "Crank-Nicolson order " + num(coarse) + ", " + num(order));
  }
}

// ---- 8 ---------------------------------------------------------------------

double surrogate_vs_implicit_euler(Context& ctx, const ForwardSetup& f, const ParametricSurrogate& s) {
  auto mesh = std::make_shared<const Mesh>(build_mesh(f.dim, f.nodes_per_side));
  const SplineBasis basis = build_partition(f.dim, f.spline_per_axis, f.spline_degree);
  const auto parts = assemble_spline_stiffness(*mesh, basis);
  const ProblemSpec problem = balanced_flux_problem(mesh, f.flux, f.final_time);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto theta = ctx.uniform(s.P(), f.interval.lo, f.interval.hi);
    SparseSymMatrix k = theta[0] * parts[0];
    for (int p = 1; p < s.P(); ++p) k += theta[p] * parts[p];
    const Eigen::VectorXd ref =
        sample_layout(*mesh, implicit_euler_solve(*mesh, k, problem, f.dt, f.layout.times), f.layout);
    worst = std::max(worst, (s.eval_U(theta) - ref).norm() / ref.norm());
  }
  return worst;
}

void surrogate_accuracy(Context& ctx, Outcome& o) {
  const double e2 = surrogate_vs_implicit_euler(ctx, desk_setup(), ctx.desk_surrogate());
  o.check(e2 <= kSurrogateTol, "2D desk max rel " + num(e2));
  if (ctx.tier == Tier::full) {
    const double e3 = surrogate_vs_implicit_euler(ctx, reduced_3d(14, 4), ctx.cube_forward().surrogate);
    o.check(e3 <= kSurrogateTol, "3D 14^3 max rel " + num(e3));
  }
}

// ---- 9 ---------------------------------------------------------------------

void reconstruction(Context& ctx, Outcome& o) {
  RunConfig c = default_config(2);
  c.spline_per_axis = 8;
  c.nodes_per_side = 33;
  c.data_nodes_per_side = ctx.tier == Tier::quick ? 65 : 129;
  const ParametricSurrogate s = run_forward(c);
  const MeasurementSet data = run_simulate(c);
  const Reconstruction r = run_reconstruct(c, s, data);
  const double ratio = r.result.misfit / r.target_misfit;
  o.check(ratio >= kMisfitLo && ratio <= kMisfitHi,
          "P=64 lambda " + num(r.result.lambda) + " misfit/target " + num(ratio));
  o.check(r.target_error && *r.target_error <= kFieldErrorTol,
          "field error " + num(r.target_error.value_or(NAN)));

  const auto truth = ctx.uniform(s.P(), 1.0, 1.5);
  const Eigen::VectorXd clean = s.eval_U(truth);
  const ReconstructionResult crime =
      gauss_newton(s, clean, build_laplacian(2, 8), 0.0, midpoint_vector(s));
  o.check(crime.misfit <= kInverseCrimeTol, "self-generated data misfit " + num(crime.misfit));
}

// ---- 10 --------------------------------------------------------------------

void approximation_diagnostic(Context& ctx, Outcome& o) {
  {
    const ForwardSetup f = desk_setup();
    const ParametricSurrogate& s = ctx.desk_surrogate();
    const double c = f.interval.center();
    const double diag = approximation_error(s, midpoint_vector(s), f.nodes_per_side, f.dt);
    auto mesh = std::make_shared<const Mesh>(build_mesh(2, f.nodes_per_side));
    const ProblemSpec problem = balanced_flux_problem(mesh, f.flux, f.final_time);
    const SparseSymMatrix k = c * assemble_stiffness(*mesh);
    const Eigen::VectorXd ie =
        sample_layout(*mesh, implicit_euler_solve(*mesh, k, problem, f.dt, f.layout.times), f.layout);
    const Eigen::VectorXd cn = sample_layout(
        *mesh,
        crank_nicolson_solve(*mesh, [c](const Point&) { return c; }, problem, f.dt, f.layout.times),
        f.layout);
    const double direct = (ie - cn).norm();
    const double ratio = diag / direct;
    o.check(ratio >= kDiagnosticRatioLo && ratio <= kDiagnosticRatioHi,
            "desk diagnostic " + num(diag) + " vs direct " + num(direct));
  }
  if (ctx.tier == Tier::full) {
    const Reconstruction& r = ctx.full_reconstruction();
    const double err = approximation_error(ctx.full_forward().surrogate, r.result.theta, 129, 1e-3);
    o.check(err >= kApproxLo && err <= kApproxHi, "full 2D lambda 0.025 error " + num(err));
  }
}

// ---- 11 --------------------------------------------------------------------

double evaluation_seconds(const ParametricSurrogate& s, const std::vector<double>& theta) {
  double best = INFINITY, total = 0.0;
  for (int rep = 0; rep < 50 && (rep < 5 || total < 0.5); ++rep) {
    const auto t0 = Clock::now();
    const Eigen::VectorXd u = s.eval_U(theta);
    const Eigen::MatrixXd j = s.eval_JU(theta);
    const double t = since(t0);
    if (!std::isfinite(u.sum() + j.sum())) return NAN;
    best = std::min(best, t);
    total += t;
  }
  return best;
}

void performance(Context& ctx, Outcome& o) {
  const MeasurementLayout layout = default_layout(2);
  std::vector<double> ps, ts;
  for (int m : {5, 7, 10, 14}) {
    const int P = m * m;
    DegreeMatrix lam = total_degree_indices(P, 2);
    std::normal_distribution<double> nd;
    RowMatrix v(layout.size(), lam.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = nd(ctx.rng);
    const ParametricSurrogate s(std::move(v), std::move(lam), {0.5, 2.0}, layout, {2, m, 2},
                                {37, 1e-3, 0.5, 20.0});
    ps.push_back(P);
    ts.push_back(evaluation_seconds(s, ctx.uniform(P, 0.5, 2.0)));
  }
  const double slope = oracle::loglog_slope(ps, ts);
  o.check(slope >= kSlopeLo && slope <= kSlopeHi, "evaluation slope " + num(slope));

  double seconds = 0.0;
  std::string tag;
  if (ctx.tier == Tier::quick) {
    RunConfig c = default_config(2);
    c.nodes_per_side = 13;
    c.dt = 0.01;
    c.data_nodes_per_side = 33;
    c.morozov = false;
    const auto path = std::filesystem::temp_directory_path() /
                      ("ptomo-accept-" + std::to_string(::getpid()) + ".bin");
    write_surrogate(path.string(), run_forward(c));
    const ParametricSurrogate s = read_surrogate(path.string());
    std::filesystem::remove(path);
    const MeasurementSet data = run_simulate(c);
    const auto t0 = Clock::now();
    run_reconstruct(c, s, data);
    seconds = since(t0);
    tag = "coarse-mesh P=196 container";
  } else {
    seconds = ctx.full_reconstruction().seconds;
    tag = "full P=196 container";
  }
  o.check(seconds <= kReconstructSeconds, tag + " reconstruction " + num(seconds) + " s");
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(Context&, Outcome&);
};

const Criterion kCriteria[] = {
    {1, "index set and coupling counts", combinatorics},
    {2, "spline stiffness partition", partition_of_unity},
    {3, "matricized step vs dense", kronecker_stepping},
    {4, "triple products vs quadrature", triple_products},
    {5, "Jacobian vs finite differences", jacobian},
    {6, "mean of deterministic mode", mean_preservation},
    {7, "stability and convergence order", stability},
    {8, "surrogate vs implicit Euler", surrogate_accuracy},
    {9, "regularized reconstruction", reconstruction},
    {10, "approximation error diagnostic", approximation_diagnostic},
    {11, "evaluation cost and run time", performance},
};

}  // namespace

int run_acceptance(Tier tier, const Reporter& report, int only) {
  Context ctx(tier);
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && only != c.id) continue;
    CriterionResult res;
    res.id = c.id;
    res.name = c.name;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      c.run(ctx, o);
      res.passed = o.passed;
      res.detail = o.detail.str();
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = since(t0);
    if (!res.passed) ++failures;
    if (report) report(res);
  }
  return failures;
}

}  // namespace ptomo::verify
