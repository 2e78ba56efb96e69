// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "container.hpp"
#include "pipeline.hpp"
#include "support.hpp"

using namespace ptomo;
using ptomo::test::error_code_of;

namespace {

RunConfig toy() {
  RunConfig c = default_config(2);
  c.nodes_per_side = 9;
  c.dt = 0.01;
  c.spline_per_axis = 3;
  c.spline_degree = 1;
  c.total_degree = 1;
  c.data_nodes_per_side = 17;
  c.data_dt = 0.01;
  c.plot_points = 21;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("toy forward build") {
  ForwardStats st;
  const ParametricSurrogate s = run_forward(toy(), &st);
  CHECK(s.N() == 10);  // P + 1 for total degree one
  CHECK(s.Q() == 468);
  CHECK(st.nnz_lambda == 9);
  RunConfig k = toy();
  k.total_degree = 2;
  k.keep = 20;
  CHECK(run_forward(k).N() == 20);
}

TEST_CASE("simulate") {
  RunConfig c = toy();
  c.sigma0 = 0.0;
  const MeasurementSet a = run_simulate(c), b = run_simulate(c);
  const std::string pa = ptomo::test::temp_path("sa.csv"), pb = ptomo::test::temp_path("sb.csv");
  write_measurements(pa, a);
  write_measurements(pb, b);
  CHECK(slurp(pa) == slurp(pb));
  CHECK(a.sigma == 0.0);
  CHECK(error_code_of([&] { run_simulate(c, "x - 0.5"); }) == ErrorCode::invalid_argument);
  c.sigma0 = 0.01;
  c.seed = 3;
  const MeasurementSet n = run_simulate(c);
  CHECK(n.seed == 3);
  CHECK(n.sigma > 0.0);
}

TEST_CASE("reconstruct and write outputs") {
  RunConfig c = toy();
  const ParametricSurrogate s = run_forward(c);
  const MeasurementSet m = run_simulate(c);
  c.approximation_error = true;
  const Reconstruction r = run_reconstruct(c, s, m);
  CHECK(r.morozov.has_value());
  CHECK(r.target_error.has_value());
  CHECK(r.result.approximation_error.has_value());
  CHECK(r.target_misfit == doctest::Approx(std::sqrt(468.0) * m.sigma));
  const std::string report = ptomo::test::temp_path("report.txt");
  const std::string grid = ptomo::test::temp_path("grid.csv");
  write_report(report, r);
  write_grid(grid, r);
  CHECK(slurp(report).find("lambda = ") != std::string::npos);
  std::ifstream in(grid);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 1 + 21 * 21);

  MeasurementSet wrong = m;
  wrong.layout.spatial[0][0] = 0.5;
  CHECK(error_code_of([&] { run_reconstruct(c, s, wrong); }) == ErrorCode::mismatch);
}

TEST_CASE("3D reconstruction grid holds three slices") {
  RunConfig c = default_config(3);
  c.nodes_per_side = 5;
  c.dt = 0.01;
  c.spline_per_axis = 2;
  c.spline_degree = 1;
  c.total_degree = 1;
  c.data_nodes_per_side = 5;
  c.data_dt = 0.01;
  c.morozov = false;
  c.plot_points = 5;
  const Reconstruction r = run_reconstruct(c, run_forward(c), run_simulate(c));
  const std::string grid = ptomo::test::temp_path("grid3.csv");
  write_grid(grid, r);
  std::ifstream in(grid);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 1 + 3 * 25);
}
