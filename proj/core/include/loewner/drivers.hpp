#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "loewner/rng.hpp"

namespace loewner {

/// What kind of process produced a driver path.
enum class DriverKind { brownian, levy, uniform_iid, prescribed };

std::string driver_kind_name(DriverKind kind);
DriverKind driver_kind_from_name(const std::string& name);

/// Piecewise-constant sample path of the driving function L(t).
///
/// `breakpoints[i]` is the time at which `values[i]` starts to hold, and the
/// value persists until the next breakpoint (the final value extends to the
/// end of the path). Values are stored unwrapped on the real line; reduce
/// mod 2*pi only where an angle is consumed, so variance and increment
/// statistics see the genuine process. For uniform_iid angle sequences the
/// capacities are unknown at sampling time and the breakpoints are the
/// placeholders 1..n until a growth model fills in realized times.
struct DriverPath {
  DriverKind kind = DriverKind::prescribed;
  std::vector<double> breakpoints;
  std::vector<double> values;
  double kappa = 0.0;
  double jump_rate = 0.0;
  double jump_scale = 0.0;
  std::size_t jump_count = 0;  // realized Poisson jumps (levy kind)

  /// Piecewise-constant lookup; t must be >= the first breakpoint.
  double value_at(double t) const;

  double start_time() const;
  double end_time() const;
  std::size_t size() const { return values.size(); }
};

/// Validates the structural invariants: matching array lengths, strictly
/// increasing breakpoints, finite values, and L(0) = 0 starting at time 0
/// for the brownian and levy kinds. Throws std::invalid_argument.
void validate_driver(const DriverPath& path);

/// Brownian driver with i.i.d. Gaussian increments of variance kappa*dt.
/// Produces steps+1 samples L(0), L(dt), ..., L(steps*dt) with L(0) = 0.
DriverPath sample_brownian(double kappa, double dt, std::size_t steps, RngSeed seed);

/// Brownian part of variance kappa*dt plus compound-Poisson jumps: per step
/// the jump count is Poisson(jump_rate*dt) and each jump is +-jump_scale
/// with equal probability, so the Levy measure is the symmetric two-point
/// atom pair (jump_rate/2)(delta_{+jump_scale} + delta_{-jump_scale}).
DriverPath sample_levy(double kappa, double jump_rate, double jump_scale, double dt,
                       std::size_t steps, RngSeed seed);

/// n i.i.d. angles uniform on [0, 2*pi) with placeholder breakpoints 1..n.
DriverPath sample_uniform_angles(std::size_t n, RngSeed seed);

/// Wraps explicit (time, value) samples as a prescribed driver.
DriverPath prescribed_driver(std::vector<double> breakpoints, std::vector<double> values);

/// Serializes to CSV with columns t, L.
void save_driver_csv(const DriverPath& path, const std::string& file);

/// Loads a CSV written by save_driver_csv (or any t, L table); the result
/// has the prescribed kind.
DriverPath load_driver_csv(const std::string& file);

}  // namespace loewner
