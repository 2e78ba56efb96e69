// SPDX-License-Identifier: Apache-2.0
// Command-line driver. Talks to the library only through ptomo.h.
#include <ptomo/ptomo.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace {

// Exit status: library status codes map to themselves; failed acceptance
// criteria give kVerifyFailed.
constexpr int kVerifyFailed = 8;

struct Failure {
  int code;
};

void check(ptomo_status s, const char* what) {
  if (s == PTOMO_OK) return;
  std::fprintf(stderr, "ptomo: %s: %s\n", what, ptomo_last_error());
  throw Failure{static_cast<int>(s)};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { if (p) Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Config = Handle<ptomo_config, ptomo_config_free>;
using Surrogate = Handle<ptomo_surrogate, ptomo_surrogate_free>;
using Measurements = Handle<ptomo_measurements, ptomo_measurements_free>;
using Result = Handle<ptomo_result, ptomo_result_free>;

struct Common {
  std::string config;
  std::vector<std::string> overrides;  // section.key=value
  std::string output;
};

void apply_override(ptomo_config* c, const std::string& item) {
  const auto eq = item.find('=');
  const auto dot = item.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    std::fprintf(stderr, "ptomo: --set expects section.key=value, got '%s'\n", item.c_str());
    throw Failure{PTOMO_ERR_INVALID_ARGUMENT};
  }
  check(ptomo_config_set(c, item.substr(0, dot).c_str(), item.substr(dot + 1, eq - dot - 1).c_str(),
                         item.substr(eq + 1).c_str()),
        ("--set " + item).c_str());
}

void load_config(const Common& opts, Config& cfg) {
  if (opts.config.empty())
    check(ptomo_config_default(2, cfg.out()), "default configuration");
  else
    check(ptomo_config_load(opts.config.c_str(), cfg.out()), opts.config.c_str());
  for (const auto& o : opts.overrides) apply_override(cfg.get(), o);
}

std::string output_path(const ptomo_config* c, const char* which) {
  char buf[4096];
  check(ptomo_config_output_path(c, which, buf, sizeof buf), "output path");
  return buf;
}

void add_common(CLI::App* sub, Common& opts, const char* output_help) {
  sub->add_option("--config", opts.config, "configuration file (default: built-in 2D setup)");
  sub->add_option("--set", opts.overrides, "override a key, e.g. --set problem.dt=0.002")
      ->type_name("SECTION.KEY=VALUE");
  sub->add_option("--output", opts.output, output_help);
}

void print_surrogate(const ptomo_surrogate* s) {
  ptomo_surrogate_info i{};
  check(ptomo_surrogate_info_get(s, &i), "surrogate info");
  std::printf("surrogate: dim %d, P = %d, n = %d, N = %lld, nnz(Lambda) = %lld\n", i.dim, i.P,
              i.total_degree, static_cast<long long>(i.N), static_cast<long long>(i.nnz_lambda));
  std::printf("  E = (%g, %g), splines m = %d s = %d\n", i.lo, i.hi, i.spline_per_axis,
              i.spline_degree);
  std::printf("  Q = %d (%d points x %d times)\n", i.Q, i.spatial_points, i.times);
  std::printf("  built on %d nodes per side, dt = %g, T = %g, flux %g\n", i.nodes_per_side, i.dt,
              i.final_time, i.flux);
}

void print_measurements(const ptomo_measurements* m) {
  ptomo_measurements_info i{};
  check(ptomo_measurements_info_get(m, &i), "measurement info");
  std::printf("measurements: dim %d, Q = %d (%d points x %d times)\n", i.dim, i.Q,
              i.spatial_points, i.times);
  std::printf("  sigma = %.6g (sigma0 = %g), seed %llu\n", i.sigma, i.sigma0,
              static_cast<unsigned long long>(i.seed));
}

int cmd_forward(const Common& opts) {
  Config cfg;
  load_config(opts, cfg);
  const std::string path = opts.output.empty() ? output_path(cfg.get(), "surrogate") : opts.output;
  Surrogate s;
  ptomo_forward_stats st{};
  check(ptomo_forward(cfg.get(), s.out(), &st), "forward");
  check(ptomo_surrogate_save(s.get(), path.c_str()), path.c_str());
  std::printf("M = %d  P = %d  N = %lld  nnz(Lambda) = %lld  nnz(S) = %lld  nnz(A) = %lld\n", st.M,
              st.P, static_cast<long long>(st.N), static_cast<long long>(st.nnz_lambda),
              static_cast<long long>(st.nnz_S), static_cast<long long>(st.nnz_A));
  std::printf("eta = %.4f  steps = %ld  assembly %.2f s  stepping %.2f s\n", st.eta, st.steps,
              st.assembly_seconds, st.stepping_seconds);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_simulate(const Common& opts, const std::string& target, const std::string& seed) {
  Config cfg;
  load_config(opts, cfg);
  if (!seed.empty()) check(ptomo_config_set(cfg.get(), "data", "seed", seed.c_str()), "--seed");
  const std::string path =
      opts.output.empty() ? output_path(cfg.get(), "measurements") : opts.output;
  Measurements m;
  check(ptomo_simulate(cfg.get(), target.empty() ? nullptr : target.c_str(), m.out()), "simulate");
  check(ptomo_measurements_save(m.get(), path.c_str()), path.c_str());
  print_measurements(m.get());
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_reconstruct(const Common& opts, std::string surrogate, std::string measurements,
                    const std::string& lambda, std::string grid) {
  Config cfg;
  load_config(opts, cfg);
  if (!lambda.empty()) check(ptomo_config_set(cfg.get(), "inverse", "lambda", lambda.c_str()), "--lambda");
  if (surrogate.empty()) surrogate = output_path(cfg.get(), "surrogate");
  if (measurements.empty()) measurements = output_path(cfg.get(), "measurements");
  if (grid.empty()) grid = output_path(cfg.get(), "grid");
  const std::string report = opts.output.empty() ? output_path(cfg.get(), "report") : opts.output;

  Surrogate s;
  check(ptomo_surrogate_load(surrogate.c_str(), s.out()), surrogate.c_str());
  Measurements m;
  check(ptomo_measurements_load(measurements.c_str(), m.out()), measurements.c_str());
  Result r;
  check(ptomo_reconstruct(cfg.get(), s.get(), m.get(), r.out()), "reconstruct");
  check(ptomo_result_write_report(r.get(), report.c_str()), report.c_str());
  check(ptomo_result_write_grid(r.get(), grid.c_str()), grid.c_str());

  ptomo_result_info i{};
  check(ptomo_result_info_get(r.get(), &i), "result info");
  std::printf("lambda = %.6g%s  misfit = %.6g  sqrt(Q) sigma = %.6g  ratio = %.4f\n", i.lambda,
              i.morozov_used ? (i.morozov_satisfied ? " (discrepancy)" : " (discrepancy, not met)") : "",
              i.misfit, i.sqrtq_sigma, i.sqrtq_sigma > 0 ? i.misfit / i.sqrtq_sigma : 0.0);
  std::printf("iterations = %d  converged = %s  time %.2f s\n", i.iterations,
              i.converged ? "yes" : "no", i.seconds);
  if (i.has_target_error) std::printf("relative L2 error vs target = %.4f\n", i.target_error);
  if (i.has_approximation_error) std::printf("approximation error = %.4f\n", i.approximation_error);
  std::printf("wrote %s and %s\n", report.c_str(), grid.c_str());
  return 0;
}

void verify_line(void*, int id, const char* name, int passed, const char* detail, double seconds) {
  std::printf("%s %2d %-34s %7.1fs  %s\n", passed ? "PASS" : "FAIL", id, name, seconds, detail);
  std::fflush(stdout);
}

int cmd_verify(const std::string& tier) {
  std::printf("acceptance tier: %s\n", tier.c_str());
  int failures = 0;
  check(ptomo_verify(tier.c_str(), verify_line, nullptr, &failures), "verify");
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : kVerifyFailed;
}

bool has_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  return in && std::string(magic, 8) == "PTOMOSUR";
}

int cmd_info(const Common& opts, const std::vector<std::string>& files) {
  std::printf("ptomo %s\n", ptomo_version());
  if (files.empty() || !opts.config.empty() || !opts.overrides.empty()) {
    Config cfg;
    load_config(opts, cfg);
    std::vector<char> buf(1 << 16);
    check(ptomo_config_describe(cfg.get(), buf.data(), buf.size()), "describe");
    std::fputs(buf.data(), stdout);
  }
  for (const auto& f : files) {
    std::printf("%s:\n", f.c_str());
    if (has_magic(f)) {
      Surrogate s;
      check(ptomo_surrogate_load(f.c_str(), s.out()), f.c_str());
      print_surrogate(s.get());
    } else {
      Measurements m;
      check(ptomo_measurements_load(f.c_str(), m.out()), f.c_str());
      print_measurements(m.get());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric surrogate tomography for the heat equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ptomo_version()));

  Common fwd, sim, rec, inf;
  auto* forward = app.add_subcommand("forward", "build the parametric surrogate container");
  add_common(forward, fwd, "surrogate container path");

  std::string target, seed;
  auto* simulate = app.add_subcommand("simulate", "simulate noisy boundary measurements");
  add_common(simulate, sim, "measurement CSV path");
  simulate->add_option("--target", target, "smooth-2d, smooth-3d, piecewise-2d or an expression");
  simulate->add_option("--seed", seed, "noise seed (u64)")->check(CLI::NonNegativeNumber);

  std::string surrogate, measurements, lambda, grid;
  auto* reconstruct = app.add_subcommand("reconstruct", "recover the diffusivity coefficients");
  add_common(reconstruct, rec, "report path");
  reconstruct->add_option("--surrogate", surrogate, "surrogate container");
  reconstruct->add_option("--measurements", measurements, "measurement CSV");
  reconstruct->add_option("--lambda", lambda, "regularization parameter or 'morozov'");
  reconstruct->add_option("--grid", grid, "diffusivity grid CSV path");

  std::string tier = "quick";
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--tier", tier, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  std::vector<std::string> files;
  auto* info = app.add_subcommand("info", "describe a configuration, container or CSV");
  info->add_option("--config", inf.config, "configuration file");
  info->add_option("--set", inf.overrides, "override a key")->type_name("SECTION.KEY=VALUE");
  info->add_option("files", files, "surrogate containers or measurement files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*forward) return cmd_forward(fwd);
    if (*simulate) return cmd_simulate(sim, target, seed);
    if (*reconstruct) return cmd_reconstruct(rec, surrogate, measurements, lambda, grid);
    if (*verify) return cmd_verify(tier);
    if (*info) return cmd_info(inf, files);
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
