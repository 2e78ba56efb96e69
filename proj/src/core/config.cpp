// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "error.hpp"
#include "expression.hpp"

namespace ptomo {

ScalarField make_target(const std::string& name) {
  if (name == "smooth-2d")
    return [](const Point& x) { return 1.25 + 0.5 * std::sin(6.0 * x[0]) * std::cos(4.0 * x[1]); };
  if (name == "smooth-3d")
    return [](const Point& x) {
      return 1.25 + (0.5 - x[2]) * std::sin(6.0 * x[0]) * std::cos(4.0 * x[1]);
    };
  if (name == "piecewise-2d")
    // Disc of radius 0.2 centred at (0.6, 0.4) with value 1/2 in a 3/2 background.
    return [](const Point& x) {
      const double dx = x[0] - 0.6, dy = x[1] - 0.4;
      return dx * dx + dy * dy < 0.04 ? 0.5 : 1.5;
    };
  const Expression e = Expression::parse(name);
  return [e](const Point& x) { return e(x); };
}

std::vector<double> RunConfig::measurement_times() const {
  if (!times.empty()) return times;
  return time_grid(first_time, time_step, time_count);
}

MeasurementLayout RunConfig::layout() const {
  MeasurementLayout l;
  l.dim = dim;
  l.spatial = boundary_grid_points(dim, points_per_side);
  l.times = measurement_times();
  return l;
}

ForwardSetup RunConfig::forward_setup() const {
  ForwardSetup s;
  s.dim = dim;
  s.spline_per_axis = spline_per_axis;
  s.spline_degree = spline_degree;
  s.interval = ParameterInterval(lo, hi);
  s.total_degree = total_degree;
  s.nodes_per_side = nodes_per_side;
  s.dt = dt;
  s.final_time = final_time;
  s.flux = flux;
  s.layout = layout();
  return s;
}

RunConfig default_config(int dim) {
  require(dim == 2 || dim == 3, "dimension must be 2 or 3");
  RunConfig c;
  c.dim = dim;
  if (dim == 3) {
    c.nodes_per_side = 26;
    c.flux = 40.0;
    c.spline_per_axis = 6;
    c.spline_degree = 1;
    c.points_per_side = 6;
    c.target = "smooth-3d";
    c.data_nodes_per_side = 65;
    c.sigma0 = 0.01;
    c.lambda = 0.09;
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ValueParser {
  const std::string& where;
  const std::string& key;
  const std::string& value;

  [[noreturn]] void bad(const std::string& what) const {
    fail(ErrorCode::invalid_argument, where + key + ": " + what + " (got '" + value + "')");
  }
  double real() const {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size() || !std::isfinite(v)) bad("expected a number");
      return v;
    } catch (const std::logic_error&) {
      bad("expected a number");
    }
  }
  double positive() const {
    const double v = real();
    if (!(v > 0.0)) bad("must be positive");
    return v;
  }
  double non_negative() const {
    const double v = real();
    if (v < 0.0) bad("must be non-negative");
    return v;
  }
  long long integer(long long min) const {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(value, &used);
      if (used != value.size()) bad("expected an integer");
      if (v < min) bad("must be at least " + std::to_string(min));
      return v;
    } catch (const std::logic_error&) {
      bad("expected an integer");
    }
  }
  std::uint64_t unsigned64() const {
    if (value.empty() || value[0] == '-') bad("expected an unsigned integer");
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(value, &used);
      if (used != value.size()) bad("expected an unsigned integer");
      return v;
    } catch (const std::logic_error&) {
      bad("expected an unsigned integer");
    }
  }
  bool boolean() const {
    if (value == "true" || value == "yes" || value == "1" || value == "on") return true;
    if (value == "false" || value == "no" || value == "0" || value == "off") return false;
    bad("expected true or false");
  }
  std::vector<double> list() const {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      const ValueParser sub{where, key, t};
      out.push_back(sub.positive());
    }
    if (out.empty()) bad("expected a comma separated list");
    return out;
  }
};

}  // namespace

void set_config_value(RunConfig& c, const std::string& section, const std::string& key,
                      const std::string& raw, const std::string& where) {
  const std::string value = trim(raw);
  const std::string full = "[" + section + "] " + key;
  const ValueParser v{where, full, value};
  auto unknown = [&] { fail(ErrorCode::invalid_argument, where + "unknown key " + full); };

  if (section == "problem") {
    if (key == "dim") {
      const auto d = v.integer(2);
      if (d > 3) v.bad("must be 2 or 3");
      c.dim = static_cast<int>(d);
    } else if (key == "nodes_per_side") c.nodes_per_side = static_cast<int>(v.integer(2));
    else if (key == "dt") c.dt = v.positive();
    else if (key == "final_time") c.final_time = v.positive();
    else if (key == "flux") c.flux = v.real();
    else unknown();
  } else if (section == "splines") {
    if (key == "per_axis") c.spline_per_axis = static_cast<int>(v.integer(1));
    else if (key == "degree") {
      const auto d = v.integer(0);
      if (d > 6) v.bad("must be at most 6");
      c.spline_degree = static_cast<int>(d);
    } else unknown();
  } else if (section == "spectral") {
    if (key == "lo") c.lo = v.positive();
    else if (key == "hi") c.hi = v.positive();
    else if (key == "total_degree") c.total_degree = static_cast<int>(v.integer(0));
    else if (key == "keep") c.keep = v.integer(0);
    else unknown();
  } else if (section == "measurement") {
    if (key == "points_per_side") c.points_per_side = static_cast<int>(v.integer(2));
    else if (key == "first_time") c.first_time = v.positive();
    else if (key == "time_step") c.time_step = v.positive();
    else if (key == "time_count") c.time_count = static_cast<int>(v.integer(1));
    else if (key == "times") c.times = v.list();
    else unknown();
  } else if (section == "data") {
    if (key == "target") {
      if (value.empty()) v.bad("must not be empty");
      try {
        make_target(value);
      } catch (const Error& e) {
        v.bad(e.what());
      }
      c.target = value;
    } else if (key == "nodes_per_side") c.data_nodes_per_side = static_cast<int>(v.integer(2));
    else if (key == "dt") c.data_dt = v.positive();
    else if (key == "sigma0") c.sigma0 = v.non_negative();
    else if (key == "seed") c.seed = v.unsigned64();
    else unknown();
  } else if (section == "inverse") {
    if (key == "lambda") {
      if (value == "morozov") {
        c.morozov = true;
      } else {
        c.morozov = false;
        c.lambda = v.non_negative();
      }
    } else if (key == "theta0") {
      c.theta0 = value == "midpoint" ? 0.0 : v.positive();
    } else if (key == "max_iterations") c.gauss_newton.max_iterations = static_cast<int>(v.integer(0));
    else if (key == "step_tolerance") c.gauss_newton.step_tolerance = v.positive();
    else if (key == "objective_tolerance") c.gauss_newton.objective_tolerance = v.non_negative();
    else if (key == "morozov_log10_lo") c.morozov_options.log10_lo = v.real();
    else if (key == "morozov_log10_hi") c.morozov_options.log10_hi = v.real();
    else if (key == "approximation_error") c.approximation_error = v.boolean();
    else if (key == "approximation_nodes_per_side")
      c.approximation_nodes_per_side = static_cast<int>(v.integer(2));
    else if (key == "plot_points") c.plot_points = static_cast<int>(v.integer(2));
    else unknown();
  } else if (section == "output") {
    if (value.empty()) v.bad("must not be empty");
    if (key == "surrogate") c.surrogate_path = value;
    else if (key == "measurements") c.measurements_path = value;
    else if (key == "report") c.report_path = value;
    else if (key == "grid") c.grid_path = value;
    else unknown();
  } else {
    fail(ErrorCode::invalid_argument, where + "unknown section [" + section + "]");
  }
}

namespace {

struct Entry {
  std::string section, key, value;
  int line;
};

void validate_impl(const RunConfig& c,
                   const std::function<std::string(const std::string&, const std::string&)>& at) {
  auto check = [&](bool ok, const std::string& section, const std::string& key,
                   const std::string& msg) {
    if (!ok) fail(ErrorCode::invalid_argument, at(section, key) + "[" + section + "] " + key + ": " + msg);
  };
  check(c.hi > c.lo, "spectral", "hi", "upper end of the parameter interval must exceed the lower end");
  int parameters = 1;
  for (int a = 0; a < c.dim; ++a) parameters *= c.spline_per_axis;
  check(c.keep == 0 || c.keep <= total_degree_count(parameters, c.total_degree), "spectral",
        "keep", "cannot exceed the number of polynomial basis functions");
  check(c.spline_per_axis > c.spline_degree, "splines", "per_axis",
        "must exceed the spline degree");
  check(c.theta0 == 0.0 || (c.theta0 >= c.lo && c.theta0 <= c.hi), "inverse", "theta0",
        "must lie inside the parameter interval");
  check(c.morozov_options.log10_lo < c.morozov_options.log10_hi, "inverse", "morozov_log10_hi",
        "must exceed morozov_log10_lo");
  const auto times = c.measurement_times();
  const char* tkey = c.times.empty() ? "time_count" : "times";
  for (double t : times) {
    check(t > 0.0 && t < c.final_time, "measurement", tkey,
          "time " + std::to_string(t) + " is outside (0, final_time)");
    const double k = t / c.dt;
    check(std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k), "measurement", tkey,
          "time " + std::to_string(t) + " is not a multiple of [problem] dt");
    const double kd = t / c.data_dt;
    check(std::abs(kd - std::round(kd)) <= 1e-9 * std::max(1.0, kd), "measurement", tkey,
          "time " + std::to_string(t) + " is not a multiple of [data] dt");
  }
  for (std::size_t k = 1; k < times.size(); ++k)
    check(times[k] > times[k - 1], "measurement", tkey, "times must be increasing");
}

}  // namespace

void validate_config(const RunConfig& c) {
  validate_impl(c, [](const std::string&, const std::string&) { return std::string(); });
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    const std::string body = trim(cut == std::string::npos ? line : line.substr(0, cut));
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (body.front() == '[') {
      if (body.back() != ']') fail(ErrorCode::invalid_argument, where + "malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorCode::invalid_argument, where + "expected 'key = value'");
    if (section.empty()) fail(ErrorCode::invalid_argument, where + "key outside of any section");
    const std::string key = trim(body.substr(0, eq));
    for (const auto& e : entries)
      if (e.section == section && e.key == key)
        fail(ErrorCode::invalid_argument, where + "[" + section + "] " + key +
                                              " is already set on line " + std::to_string(e.line));
    entries.push_back({section, key, trim(body.substr(eq + 1)), lineno});
  }

  // The dimension picks the defaults, so it is applied first.
  RunConfig probe;
  for (const auto& e : entries)
    if (e.section == "problem" && e.key == "dim")
      set_config_value(probe, e.section, e.key, e.value,
                       source + ":" + std::to_string(e.line) + ": ");
  RunConfig c = default_config(probe.dim);
  for (const auto& e : entries)
    set_config_value(c, e.section, e.key, e.value, source + ":" + std::to_string(e.line) + ": ");

  validate_impl(c, [&](const std::string& s, const std::string& k) {
    for (const auto& e : entries)
      if (e.section == s && e.key == k) return source + ":" + std::to_string(e.line) + ": ";
    return source + ": ";
  });
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string describe_config(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "[problem]\ndim = " << c.dim << "\nnodes_per_side = " << c.nodes_per_side
    << "\ndt = " << c.dt << "\nfinal_time = " << c.final_time << "\nflux = " << c.flux << "\n";
  o << "\n[splines]\nper_axis = " << c.spline_per_axis << "\ndegree = " << c.spline_degree << "\n";
  o << "\n[spectral]\nlo = " << c.lo << "\nhi = " << c.hi << "\ntotal_degree = " << c.total_degree
    << "\nkeep = " << c.keep << "\n";
  o << "\n[measurement]\npoints_per_side = " << c.points_per_side << "\n";
  if (c.times.empty()) {
    o << "first_time = " << c.first_time << "\ntime_step = " << c.time_step
      << "\ntime_count = " << c.time_count << "\n";
  } else {
    o << "times = ";
    for (std::size_t k = 0; k < c.times.size(); ++k) o << (k ? ", " : "") << c.times[k];
    o << "\n";
  }
  o << "\n[data]\ntarget = " << c.target << "\nnodes_per_side = " << c.data_nodes_per_side
    << "\ndt = " << c.data_dt << "\nsigma0 = " << c.sigma0 << "\nseed = " << c.seed << "\n";
  o << "\n[inverse]\nlambda = ";
  if (c.morozov)
    o << "morozov";
  else
    o << c.lambda;
  o << "\ntheta0 = ";
  if (c.theta0 == 0.0)
    o << "midpoint";
  else
    o << c.theta0;
  o << "\nmax_iterations = " << c.gauss_newton.max_iterations << "\n";
  if (c.gauss_newton.step_tolerance > 0.0) o << "step_tolerance = " << c.gauss_newton.step_tolerance << "\n";
  o << "objective_tolerance = " << c.gauss_newton.objective_tolerance
    << "\nmorozov_log10_lo = " << c.morozov_options.log10_lo
    << "\nmorozov_log10_hi = " << c.morozov_options.log10_hi
    << "\napproximation_error = " << (c.approximation_error ? "true" : "false") << "\n";
  if (c.approximation_nodes_per_side > 0)
    o << "approximation_nodes_per_side = " << c.approximation_nodes_per_side << "\n";
  o << "plot_points = " << c.plot_points << "\n";
  o << "\n[output]\nsurrogate = " << c.surrogate_path << "\nmeasurements = " << c.measurements_path
    << "\nreport = " << c.report_path << "\ngrid = " << c.grid_path << "\n";
  return o.str();
}

}  // namespace ptomo
