#include "loewner/growth.hpp"

#include <cmath>
#include <stdexcept>

#include "loewner/csv.hpp"

namespace loewner {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double reduce_angle(double value) {
  double a = std::fmod(value, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

std::size_t step_count(double span, double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument("dt must be finite and positive");
  }
  if (!(span > 0.0)) {
    throw std::invalid_argument("driver must span a positive time interval");
  }
  const double raw = span / dt;
  const auto steps = static_cast<std::size_t>(std::llround(raw));
  return steps == 0 ? 1 : steps;
}

// One driver increment over a step of length dt, drawn from an independent
// per-interval stream so that increments can be indexed in any order.
double driver_increment(CounterRng rng, DriverKind kind, double sigma, double mean_jumps,
                        double jump_scale, std::size_t& jump_count) {
  double increment = sigma * rng.next_normal();
  if (kind == DriverKind::levy && mean_jumps > 0.0) {
    const std::uint64_t jumps = rng.next_poisson(mean_jumps);
    for (std::uint64_t j = 0; j < jumps; ++j) {
      increment += (rng.next_double() < 0.5) ? jump_scale : -jump_scale;
    }
    jump_count += jumps;
  }
  return increment;
}

}  // namespace

GrowthRun grow_hl(double alpha, double delta_a, std::size_t n, RngSeed seed) {
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite");
  }
  if (!std::isfinite(delta_a) || delta_a <= 0.0) {
    throw std::invalid_argument("delta_a must be finite and positive");
  }
  if (n < 1) {
    throw std::invalid_argument("step count must be at least 1");
  }
  GrowthRun run;
  run.seed = seed;
  run.alpha = alpha;
  run.delta_a = delta_a;
  run.driver.kind = DriverKind::uniform_iid;
  run.map.slits.reserve(n);
  run.driver.breakpoints.reserve(n);
  run.driver.values.reserve(n);

  CounterRng rng(seed);
  double eps_d = std::sqrt(delta_a);
  double elapsed = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    const double phi = kTwoPi * rng.next_double();
    double capacity = delta_a;
    if (alpha != 0.0 && !run.map.slits.empty()) {
      const cplx w = std::polar(1.0 + eps_d, phi);
      double deriv_mag = 0.0;
      try {
        deriv_mag = std::abs(eval_with_derivative(run.map, w).deriv);
      } catch (const std::exception& e) {
        run.aborted = true;
        run.abort_reason = std::string("derivative evaluation failed at step ") +
                           std::to_string(step + 1) + ": " + e.what();
        return run;
      }
      capacity = delta_a * std::pow(deriv_mag, -alpha);
    }
    if (!std::isfinite(capacity) || capacity <= 0.0) {
      run.aborted = true;
      run.abort_reason = "non-finite or non-positive capacity at step " +
                         std::to_string(step + 1);
      return run;
    }
    run.map.append(ElementarySlitMap(phi, capacity));
    run.driver.breakpoints.push_back(elapsed);
    run.driver.values.push_back(phi);
    elapsed += capacity;
    eps_d = std::sqrt(capacity);
  }
  return run;
}

GrowthRun grow_driven(const DriverPath& driver, double dt) {
  validate_driver(driver);
  const double start = driver.start_time();
  const std::size_t steps = step_count(driver.end_time() - start, dt);
  GrowthRun run;
  run.driver = driver;
  run.map.slits.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = start + static_cast<double>(k) * dt;
    const double angle = reduce_angle(driver.value_at(t));
    run.map.append(ElementarySlitMap(angle, dt));
  }
  return run;
}

GrowthRun grow_whole_plane(const WholePlaneParams& params, RngSeed seed) {
  if (params.kind != DriverKind::brownian && params.kind != DriverKind::levy) {
    throw std::invalid_argument("whole-plane growth needs a brownian or levy driver");
  }
  if (!std::isfinite(params.kappa) || params.kappa < 0.0) {
    throw std::invalid_argument("kappa must be finite and non-negative");
  }
  if (params.kind == DriverKind::levy) {
    if (!std::isfinite(params.jump_rate) || params.jump_rate < 0.0) {
      throw std::invalid_argument("jump_rate must be finite and non-negative");
    }
    if (!std::isfinite(params.jump_scale) || params.jump_scale <= 0.0) {
      throw std::invalid_argument("jump_scale must be finite and positive");
    }
  }
  if (!std::isfinite(params.t) || params.t < 0.0) {
    throw std::invalid_argument("physical time t must be finite and non-negative");
  }
  if (!std::isfinite(params.t_burn) || params.t_burn < 10.0) {
    throw std::invalid_argument("burn-in depth must be at least 10");
  }
  if (!std::isfinite(params.dt) || params.dt <= 0.0) {
    throw std::invalid_argument("dt must be finite and positive");
  }

  const auto n_burn = static_cast<std::size_t>(std::llround(params.t_burn / params.dt));
  const auto n_phys = static_cast<std::size_t>(std::llround(params.t / params.dt));
  const double sigma = std::sqrt(params.kappa * params.dt);
  const double mean_jumps = params.jump_rate * params.dt;

  GrowthRun run;
  run.seed = seed;
  run.rescale_T = static_cast<double>(n_burn) * params.dt;
  run.map.slits.reserve(n_burn + n_phys);
  run.driver.kind = DriverKind::prescribed;
  run.driver.kappa = params.kappa;
  run.driver.jump_rate = params.jump_rate;
  run.driver.jump_scale = params.jump_scale;
  run.driver.breakpoints.reserve(n_burn + n_phys);
  run.driver.values.reserve(n_burn + n_phys);

  const CounterRng root(seed);
  const CounterRng burn_parent = root.fork(1);
  const CounterRng phys_parent = root.fork(2);

  // Driver level at time -k*dt, walking backward from L(0) = 0. Increment k
  // is indexed by its distance from time 0, so a deeper burn-in reuses the
  // same values and only adds earlier ones.
  std::vector<double> backward_level(n_burn + 1, 0.0);
  for (std::size_t k = 1; k <= n_burn; ++k) {
    backward_level[k] =
        backward_level[k - 1] - driver_increment(burn_parent.fork(k), params.kind, sigma,
                                                 mean_jumps, params.jump_scale,
                                                 run.driver.jump_count);
  }
  // Chronological order: the oldest increment (largest k) is the outermost
  // slit. Recorded times are shifted so the path starts at 0.
  for (std::size_t k = n_burn; k >= 1; --k) {
    const double level = backward_level[k];
    run.map.append(ElementarySlitMap(reduce_angle(level), params.dt));
    run.driver.breakpoints.push_back(static_cast<double>(n_burn - k) * params.dt);
    run.driver.values.push_back(level);
  }

  double level = 0.0;
  for (std::size_t j = 0; j < n_phys; ++j) {
    run.map.append(ElementarySlitMap(reduce_angle(level), params.dt));
    run.driver.breakpoints.push_back(static_cast<double>(n_burn + j) * params.dt);
    run.driver.values.push_back(level);
    level += driver_increment(phys_parent.fork(j + 1), params.kind, sigma, mean_jumps,
                              params.jump_scale, run.driver.jump_count);
  }

  run.map.log_scale = -run.rescale_T;
  return run;
}

void save_map_csv(const CompositeMap& map, const std::string& file) {
  CsvTable table;
  table.header = {"index", "angle", "capacity"};
  table.rows.reserve(map.slits.size());
  for (std::size_t i = 0; i < map.slits.size(); ++i) {
    table.rows.push_back({static_cast<double>(i + 1), map.slits[i].angle,
                          map.slits[i].capacity});
  }
  write_csv(file, table);
}

CompositeMap load_map_csv(const std::string& file) {
  const CsvTable table = read_csv(file);
  if (table.header.size() != 3 || table.header[0] != "index" ||
      table.header[1] != "angle" || table.header[2] != "capacity") {
    throw std::runtime_error("map csv must have columns index, angle, capacity: " + file);
  }
  CompositeMap map;
  map.slits.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    map.append(ElementarySlitMap(row[1], row[2]));
  }
  return map;
}

std::vector<cplx> trace_points(const CompositeMap& map, std::size_t num_points,
                               double offset) {
  if (num_points < 1) {
    throw std::invalid_argument("trace needs at least one sample point");
  }
  if (!std::isfinite(offset) || offset <= 0.0) {
    throw std::invalid_argument("trace offset must be positive");
  }
  std::vector<cplx> points;
  points.reserve(num_points);
  const double radius = 1.0 + offset;
  for (std::size_t j = 0; j < num_points; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(num_points);
    points.push_back(eval_composite(map, std::polar(radius, theta)));
  }
  return points;
}

}  // namespace loewner
