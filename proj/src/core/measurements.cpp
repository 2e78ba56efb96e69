// SPDX-License-Identifier: Apache-2.0
#include "measurements.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace ptomo {

namespace {
constexpr int kCsvVersion = 1;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::format, where + ": '" + s + "' is not a number");
  }
}
}  // namespace

NoisyValues add_noise(const Eigen::VectorXd& values, double sigma0, std::uint64_t seed) {
  require(sigma0 >= 0.0, "noise level must be non-negative");
  NoisyValues out{values, 0.0};
  if (sigma0 == 0.0 || values.size() == 0) return out;
  out.sigma = sigma0 * values.maxCoeff();
  require(out.sigma >= 0.0, "noise: the largest measurement is negative, sigma would be negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, out.sigma);
  for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values[i] += normal(rng);
  return out;
}

void check_same_layout(const MeasurementLayout& a, const MeasurementLayout& b, double tolerance) {
  if (a.dim != b.dim) fail(ErrorCode::mismatch, "measurement layouts have different dimensions");
  if (a.spatial.size() != b.spatial.size() || a.times.size() != b.times.size())
    fail(ErrorCode::mismatch, "measurement layouts differ in size (" +
                                  std::to_string(a.spatial.size()) + "x" +
                                  std::to_string(a.times.size()) + " vs " +
                                  std::to_string(b.spatial.size()) + "x" +
                                  std::to_string(b.times.size()) + ")");
  for (std::size_t i = 0; i < a.spatial.size(); ++i)
    for (int c = 0; c < 3; ++c)
      if (std::abs(a.spatial[i][c] - b.spatial[i][c]) > tolerance)
        fail(ErrorCode::mismatch, "measurement point " + std::to_string(i) + " differs");
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (std::abs(a.times[k] - b.times[k]) > tolerance)
      fail(ErrorCode::mismatch, "measurement time " + std::to_string(k) + " differs");
}

void write_measurements(const std::string& path, const MeasurementSet& m) {
  const auto& lay = m.layout;
  if (m.values.size() != lay.size())
    fail(ErrorCode::mismatch, "measurement values do not match the layout");
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << "# ptomo-measurements " << kCsvVersion << "\n";
  out << "# dim " << lay.dim << "\n";
  out << "# layout time-major\n";
  out << "# spatial_points " << lay.spatial_count() << "\n";
  out << "# times " << lay.time_count() << "\n";
  out << "# sigma " << fmt(m.sigma) << "\n";
  out << "# sigma0 " << fmt(m.sigma0) << "\n";
  out << "# seed " << m.seed << "\n";
  out << "# target " << m.target << "\n";
  out << (lay.dim == 3 ? "x,y,z,t,value\n" : "x,y,t,value\n");
  for (int q = 0; q < lay.size(); ++q) {
    const Point x = lay.point(q);
    out << fmt(x[0]) << ',' << fmt(x[1]) << ',';
    if (lay.dim == 3) out << fmt(x[2]) << ',';
    out << fmt(lay.time(q)) << ',' << fmt(m.values[q]) << '\n';
  }
  if (!out) fail(ErrorCode::io, "failed writing '" + path + "'");
}

MeasurementSet read_measurements(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  MeasurementSet m;
  int qs = -1, qt = -1, version = -1;
  bool header_seen = false;
  std::vector<std::array<double, 5>> rows;
  std::string line;
  int lineno = 0;
  auto where = [&] { return path + ":" + std::to_string(lineno); };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      std::string rest;
      std::getline(ss >> std::ws, rest);
      if (key == "ptomo-measurements") version = static_cast<int>(parse_double(rest, where()));
      else if (key == "dim") m.layout.dim = static_cast<int>(parse_double(rest, where()));
      else if (key == "layout") {
        if (rest != "time-major") fail(ErrorCode::format, where() + ": unknown layout '" + rest + "'");
      } else if (key == "spatial_points") qs = static_cast<int>(parse_double(rest, where()));
      else if (key == "times") qt = static_cast<int>(parse_double(rest, where()));
      else if (key == "sigma") m.sigma = parse_double(rest, where());
      else if (key == "sigma0") m.sigma0 = parse_double(rest, where());
      else if (key == "seed") {
        try {
          m.seed = std::stoull(rest);
        } catch (const std::exception&) {
          fail(ErrorCode::format, where() + ": bad seed '" + rest + "'");
        }
      } else if (key == "target") m.target = rest;
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      const std::string expect = m.layout.dim == 3 ? "x,y,z,t,value" : "x,y,t,value";
      if (line != expect)
        fail(ErrorCode::format, where() + ": expected column header '" + expect + "'");
      continue;
    }
    std::array<double, 5> row{};
    std::istringstream ss(line);
    std::string cell;
    int c = 0;
    const int cols = m.layout.dim + 2;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols) fail(ErrorCode::format, where() + ": too many columns");
      row[c++] = parse_double(cell, where());
    }
    if (c != cols) fail(ErrorCode::format, where() + ": expected " + std::to_string(cols) + " columns");
    rows.push_back(row);
  }
  if (version != kCsvVersion)
    fail(ErrorCode::mismatch, path + ": measurement file version " + std::to_string(version) +
                                  " is not supported");
  if (m.layout.dim != 2 && m.layout.dim != 3) fail(ErrorCode::format, path + ": bad dimension");
  if (qs <= 0 || qt <= 0 || static_cast<std::size_t>(qs) * qt != rows.size())
    fail(ErrorCode::format, path + ": row count does not match the declared layout");
  if (m.sigma < 0.0) fail(ErrorCode::format, path + ": negative sigma");

  const int d = m.layout.dim;
  m.layout.spatial.resize(qs);
  m.layout.times.resize(qt);
  for (int s = 0; s < qs; ++s)
    for (int a = 0; a < d; ++a) m.layout.spatial[s][a] = rows[s][a];
  for (int k = 0; k < qt; ++k) m.layout.times[k] = rows[static_cast<std::size_t>(k) * qs][d];
  m.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t q = 0; q < rows.size(); ++q) {
    const int s = static_cast<int>(q % qs), k = static_cast<int>(q / qs);
    for (int a = 0; a < d; ++a)
      if (rows[q][a] != m.layout.spatial[s][a])
        fail(ErrorCode::format, path + ": data row " + std::to_string(q + 1) +
                                    " breaks the time-major layout");
    if (rows[q][d] != m.layout.times[k])
      fail(ErrorCode::format, path + ": data row " + std::to_string(q + 1) +
                                  " breaks the time-major layout");
    m.values[static_cast<Eigen::Index>(q)] = rows[q][d + 1];
  }
  return m;
}

}  // namespace ptomo
