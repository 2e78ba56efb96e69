// SPDX-License-Identifier: Apache-2.0
#include "inverse.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "forward.hpp"
#include "splines.hpp"

namespace ptomo {

Regularizer build_laplacian(int dim, int per_axis) {
  require(dim >= 1 && dim <= 3, "laplacian: dimension must be 1, 2 or 3");
  require(per_axis >= 1, "laplacian: need at least one coefficient per axis");
  int size = 1;
  for (int a = 0; a < dim; ++a) size *= per_axis;
  std::vector<Eigen::Triplet<double>> t;
  for (int p = 0; p < size; ++p) {
    int stride = 1;
    for (int a = 0; a < dim; ++a, stride *= per_axis) {
      const int i = (p / stride) % per_axis;
      t.emplace_back(p, p, 2.0);
      if (i > 0) t.emplace_back(p, p - stride, -1.0);
      if (i + 1 < per_axis) t.emplace_back(p, p + stride, -1.0);
    }
  }
  Regularizer g(size, size);
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

Eigen::VectorXd midpoint_vector(const ParametricSurrogate& surrogate) {
  return Eigen::VectorXd::Constant(surrogate.P(), surrogate.interval().center());
}

namespace {

struct Evaluation {
  Eigen::VectorXd residual;
  double misfit2 = 0.0;
  double objective = 0.0;
};

}  // namespace

ReconstructionResult gauss_newton(const ParametricSurrogate& s, const Eigen::VectorXd& data,
                                  const Regularizer& g, double lambda,
                                  const Eigen::VectorXd& theta0,
                                  const GaussNewtonOptions& options) {
  const int P = s.P();
  const int Q = s.Q();
  if (data.size() != Q)
    fail(ErrorCode::mismatch, "data has " + std::to_string(data.size()) + " values, surrogate has Q = " +
                                  std::to_string(Q));
  if (theta0.size() != P) fail(ErrorCode::mismatch, "initial parameter vector has the wrong length");
  if (g.rows() != P || g.cols() != P) fail(ErrorCode::mismatch, "regularizer is not P x P");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be a finite non-negative number");
  require(options.max_iterations >= 0 && options.max_halvings >= 0, "bad Gauss-Newton options");
  const auto& box = s.interval();
  for (int p = 0; p < P; ++p)
    require(box.contains(theta0[p]), "initial parameter vector lies outside the parameter box");

  const double step_tol =
      options.step_tolerance < 0.0 ? 1e-8 * std::sqrt(static_cast<double>(P)) : options.step_tolerance;
  const Eigen::MatrixXd gd = Eigen::MatrixXd(g);

  ReconstructionResult res;
  res.lambda = lambda;
  auto project = [&](Eigen::VectorXd v) {
    for (int p = 0; p < P; ++p) v[p] = std::clamp(v[p], box.lo, box.hi);
    return v;
  };
  auto evaluate = [&](const Eigen::VectorXd& th) {
    Evaluation e;
    bool ext = false;
    e.residual = s.eval_U({th.data(), static_cast<std::size_t>(P)}, &ext) - data;
    res.extrapolated = res.extrapolated || ext;
    e.misfit2 = e.residual.squaredNorm();
    e.objective = e.misfit2 + lambda * lambda * (gd * th).squaredNorm();
    return e;
  };

  Eigen::VectorXd theta = theta0;
  Evaluation cur = evaluate(theta);
  res.misfit_history.push_back(std::sqrt(cur.misfit2));
  res.objective_history.push_back(cur.objective);
  res.stop_reason = "maximum iterations reached";

  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd j = s.eval_JU({theta.data(), static_cast<std::size_t>(P)});
    Eigen::VectorXd b(Q + P);
    b.head(Q) = -cur.residual;
    b.tail(P) = -lambda * (gd * theta);

    // Coordinates sitting on a bound with the step pointing outward are
    // frozen and the reduced problem is solved again.
    std::vector<int> free(P);
    std::iota(free.begin(), free.end(), 0);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(P);
    double model = 0.0;
    while (!free.empty()) {
      const int f = static_cast<int>(free.size());
      Eigen::MatrixXd a(Q + P, f);
      for (int c = 0; c < f; ++c) {
        a.col(c).head(Q) = j.col(free[c]);
        a.col(c).tail(P) = lambda * gd.col(free[c]);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
      if (qr.rank() < f)
        fail(ErrorCode::ill_posed, "Gauss-Newton step is ill-posed: stacked Jacobian has rank " +
                                       std::to_string(qr.rank()) + " < " + std::to_string(f) +
                                       (lambda == 0.0 ? " (lambda = 0)" : ""));
      const Eigen::VectorXd d = qr.solve(b);
      std::vector<int> keep;
      for (int c = 0; c < f; ++c) {
        const int p = free[c];
        const bool out_lo = theta[p] <= box.lo && d[c] < 0.0;
        const bool out_hi = theta[p] >= box.hi && d[c] > 0.0;
        if (!out_lo && !out_hi) keep.push_back(p);
      }
      if (static_cast<int>(keep.size()) == f) {
        delta.setZero();
        for (int c = 0; c < f; ++c) delta[free[c]] = d[c];
        model = (a * d - b).squaredNorm();
        break;
      }
      free = std::move(keep);
      delta.setZero();
      model = b.squaredNorm();
    }

    if (delta.norm() < step_tol) {
      res.converged = true;
      res.stop_reason = "step below tolerance";
      break;
    }
    if (cur.objective - model <= options.objective_tolerance * cur.objective) {
      res.converged = true;
      res.stop_reason = "predicted decrease below tolerance";
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd next;
    Evaluation trial;
    for (int h = 0; h <= options.max_halvings; ++h, alpha *= 0.5) {
      next = project(theta + alpha * delta);
      trial = evaluate(next);
      if (trial.objective < cur.objective) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.line_search_failed = true;
      res.stop_reason = "line search failed";
      break;
    }
    const double step = (next - theta).norm();
    const double decrease = (cur.objective - trial.objective) / cur.objective;
    theta = std::move(next);
    cur = std::move(trial);
    ++res.iterations;
    res.misfit_history.push_back(std::sqrt(cur.misfit2));
    res.objective_history.push_back(cur.objective);
    if (step < step_tol) {
      res.converged = true;
      res.stop_reason = "step below tolerance";
      break;
    }
    if (decrease < options.objective_tolerance || cur.objective == 0.0) {
      res.converged = true;
      res.stop_reason = "objective decrease below tolerance";
      break;
    }
  }
  res.theta = theta;
  res.misfit = std::sqrt(cur.misfit2);
  return res;
}

MorozovResult morozov_select(const ParametricSurrogate& s, const Eigen::VectorXd& data,
                             double sigma, const Regularizer& g, const Eigen::VectorXd& theta0,
                             const GaussNewtonOptions& gn, const MorozovOptions& options) {
  if (!(sigma > 0.0))
    fail(ErrorCode::invalid_argument, "discrepancy principle needs a positive noise level");
  require(options.log10_lo < options.log10_hi, "Morozov: empty search interval");
  MorozovResult out;
  out.target = std::sqrt(static_cast<double>(s.Q())) * sigma;
  const double lo_band = options.band_lo * out.target;
  const double hi_band = options.band_hi * out.target;

  auto probe = [&](double l10) {
    const double lambda = std::pow(10.0, l10);
    ReconstructionResult r = gauss_newton(s, data, g, lambda, theta0, gn);
    out.probes.push_back({lambda, r.misfit});
    return r;
  };
  auto in_band = [&](const ReconstructionResult& r) {
    return r.misfit >= lo_band && r.misfit <= hi_band;
  };
  auto finish = [&](ReconstructionResult r, bool satisfied) {
    out.lambda = r.lambda;
    out.result = std::move(r);
    out.satisfied = satisfied;
  };

  // The lower end is only probed when bisection fails: from a fixed start,
  // Gauss-Newton with almost no regularization can stall in a poor local
  // minimum whose misfit says nothing about the interior of the interval.
  auto closer = [&](const ReconstructionResult& x, const ReconstructionResult& y) {
    return std::abs(std::log(x.misfit / out.target)) < std::abs(std::log(y.misfit / out.target));
  };
  double a = options.log10_lo, b = options.log10_hi;
  ReconstructionResult rb = probe(b);
  if (in_band(rb)) {
    finish(std::move(rb), true);
  } else if (rb.misfit < lo_band) {
    out.bracketed = false;
    out.warning = "misfit stays below the target even at the largest lambda";
    finish(std::move(rb), false);
  } else {
    ReconstructionResult best = std::move(rb);
    bool done = false;
    for (int k = 0; k < options.max_bisections; ++k) {
      const double mid = 0.5 * (a + b);
      ReconstructionResult rm = probe(mid);
      if (in_band(rm)) {
        finish(std::move(rm), true);
        done = true;
        break;
      }
      if (closer(rm, best)) best = rm;
      if (rm.misfit < lo_band)
        a = mid;
      else
        b = mid;
    }
    if (!done) {
      ReconstructionResult ra = probe(options.log10_lo);
      if (in_band(ra)) {
        finish(std::move(ra), true);
      } else {
        if (ra.misfit > hi_band) out.bracketed = false;
        if (closer(ra, best)) best = std::move(ra);
        out.warning = out.bracketed
                          ? "bisection did not reach the target band; returning the closest probe"
                          : "misfit exceeds the target even at the smallest lambda";
        finish(std::move(best), false);
      }
    }
  }

  std::vector<MorozovProbe> sorted = out.probes;
  std::sort(sorted.begin(), sorted.end(),
            [](const MorozovProbe& x, const MorozovProbe& y) { return x.lambda < y.lambda; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k].misfit < sorted[k - 1].misfit - 1e-6 * out.target) out.monotone = false;
  if (!out.monotone) {
    if (!out.warning.empty()) out.warning += "; ";
    out.warning += "misfit is not monotone in lambda across the probes";
  }
  return out;
}

double approximation_error(const ParametricSurrogate& s, const Eigen::VectorXd& theta,
                           int nodes_per_side, double dt) {
  if (theta.size() != s.P()) fail(ErrorCode::mismatch, "parameter vector has the wrong length");
  const auto& meta = s.spline();
  const SplineBasis basis = build_partition(meta.dim, meta.per_axis, meta.degree);
  if (basis.size() != s.P())
    fail(ErrorCode::mismatch, "surrogate spline metadata does not match P");
  const std::vector<double> th(theta.data(), theta.data() + theta.size());
  auto a = [&basis, th](const Point& x) { return evaluate_diffusivity(basis, th, x); };
  const auto& prov = s.provenance();
  const Eigen::VectorXd reference = simulate_boundary_data(
      meta.dim, nodes_per_side, dt, prov.final_time, prov.flux, a, s.layout());
  return (s.eval_U(th) - reference).norm();
}

}  // namespace ptomo
