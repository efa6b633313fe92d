#include "loewner/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loewner/csv.hpp"

namespace loewner {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_sampling_params(double kappa, double dt, std::size_t steps) {
  if (!std::isfinite(kappa) || kappa < 0.0) {
    throw std::invalid_argument("kappa must be finite and non-negative");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument("dt must be finite and positive");
  }
  if (steps < 1) {
    throw std::invalid_argument("steps must be at least 1");
  }
}

}  // namespace

std::string driver_kind_name(DriverKind kind) {
  switch (kind) {
    case DriverKind::brownian: return "brownian";
    case DriverKind::levy: return "levy";
    case DriverKind::uniform_iid: return "uniform_iid";
    case DriverKind::prescribed: return "prescribed";
  }
  throw std::invalid_argument("unknown driver kind");
}

DriverKind driver_kind_from_name(const std::string& name) {
  if (name == "brownian") return DriverKind::brownian;
  if (name == "levy") return DriverKind::levy;
  if (name == "uniform_iid") return DriverKind::uniform_iid;
  if (name == "prescribed") return DriverKind::prescribed;
  throw std::invalid_argument("unknown driver kind: " + name);
}

double DriverPath::value_at(double t) const {
  if (values.empty()) {
    throw std::invalid_argument("driver path is empty");
  }
  if (!std::isfinite(t) || t < breakpoints.front()) {
    throw std::invalid_argument("driver lookup before the first breakpoint");
  }
  // Last breakpoint <= t; upper_bound returns the first one strictly after.
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  const auto index = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  return values[index];
}

double DriverPath::start_time() const {
  if (breakpoints.empty()) {
    throw std::invalid_argument("driver path is empty");
  }
  return breakpoints.front();
}

double DriverPath::end_time() const {
  if (breakpoints.empty()) {
    throw std::invalid_argument("driver path is empty");
  }
  return breakpoints.back();
}

void validate_driver(const DriverPath& path) {
  if (path.breakpoints.size() != path.values.size()) {
    throw std::invalid_argument("driver breakpoints and values must have equal length");
  }
  if (path.breakpoints.empty()) {
    throw std::invalid_argument("driver path is empty");
  }
  for (std::size_t i = 0; i < path.breakpoints.size(); ++i) {
    if (!std::isfinite(path.breakpoints[i]) || !std::isfinite(path.values[i])) {
      throw std::invalid_argument("driver path contains non-finite entries");
    }
    if (i > 0 && !(path.breakpoints[i] > path.breakpoints[i - 1])) {
      throw std::invalid_argument("driver breakpoints must be strictly increasing");
    }
  }
  if (path.kind == DriverKind::brownian || path.kind == DriverKind::levy) {
    if (path.breakpoints.front() != 0.0 || path.values.front() != 0.0) {
      throw std::invalid_argument("brownian and levy drivers must start with L(0) = 0");
    }
  }
}

DriverPath sample_brownian(double kappa, double dt, std::size_t steps, RngSeed seed) {
  check_sampling_params(kappa, dt, steps);
  DriverPath path;
  path.kind = DriverKind::brownian;
  path.kappa = kappa;
  path.breakpoints.reserve(steps + 1);
  path.values.reserve(steps + 1);
  CounterRng rng(seed);
  const double sigma = std::sqrt(kappa * dt);
  double level = 0.0;
  path.breakpoints.push_back(0.0);
  path.values.push_back(0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    level += sigma * rng.next_normal();
    path.breakpoints.push_back(static_cast<double>(i) * dt);
    path.values.push_back(level);
  }
  return path;
}

DriverPath sample_levy(double kappa, double jump_rate, double jump_scale, double dt,
                       std::size_t steps, RngSeed seed) {
  check_sampling_params(kappa, dt, steps);
  if (!std::isfinite(jump_rate) || jump_rate < 0.0) {
    throw std::invalid_argument("jump_rate must be finite and non-negative");
  }
  if (!std::isfinite(jump_scale) || jump_scale <= 0.0) {
    throw std::invalid_argument("jump_scale must be finite and positive");
  }
  DriverPath path;
  path.kind = DriverKind::levy;
  path.kappa = kappa;
  path.jump_rate = jump_rate;
  path.jump_scale = jump_scale;
  path.breakpoints.reserve(steps + 1);
  path.values.reserve(steps + 1);
  CounterRng rng(seed);
  const double sigma = std::sqrt(kappa * dt);
  const double mean_jumps = jump_rate * dt;
  double level = 0.0;
  path.breakpoints.push_back(0.0);
  path.values.push_back(0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    double increment = sigma * rng.next_normal();
    const std::uint64_t jumps = rng.next_poisson(mean_jumps);
    for (std::uint64_t j = 0; j < jumps; ++j) {
      increment += (rng.next_double() < 0.5) ? jump_scale : -jump_scale;
    }
    path.jump_count += jumps;
    level += increment;
    path.breakpoints.push_back(static_cast<double>(i) * dt);
    path.values.push_back(level);
  }
  return path;
}

DriverPath sample_uniform_angles(std::size_t n, RngSeed seed) {
  if (n < 1) {
    throw std::invalid_argument("angle count must be at least 1");
  }
  DriverPath path;
  path.kind = DriverKind::uniform_iid;
  path.breakpoints.reserve(n);
  path.values.reserve(n);
  CounterRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    path.breakpoints.push_back(static_cast<double>(i + 1));
    path.values.push_back(kTwoPi * rng.next_double());
  }
  return path;
}

DriverPath prescribed_driver(std::vector<double> breakpoints, std::vector<double> values) {
  DriverPath path;
  path.kind = DriverKind::prescribed;
  path.breakpoints = std::move(breakpoints);
  path.values = std::move(values);
  validate_driver(path);
  return path;
}

void save_driver_csv(const DriverPath& path, const std::string& file) {
  CsvTable table;
  table.header = {"t", "L"};
  table.rows.reserve(path.values.size());
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    table.rows.push_back({path.breakpoints[i], path.values[i]});
  }
  write_csv(file, table);
}

DriverPath load_driver_csv(const std::string& file) {
  const CsvTable table = read_csv(file);
  if (table.header.size() != 2 || table.header[0] != "t" || table.header[1] != "L") {
    throw std::runtime_error("driver csv must have columns t, L: " + file);
  }
  std::vector<double> breakpoints;
  std::vector<double> values;
  breakpoints.reserve(table.rows.size());
  values.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    breakpoints.push_back(row[0]);
    values.push_back(row[1]);
  }
  return prescribed_driver(std::move(breakpoints), std::move(values));
}

}  // namespace loewner
