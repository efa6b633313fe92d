#pragma once

#include <cstddef>
#include <string>

#include "loewner/conformal.hpp"
#include "loewner/drivers.hpp"
#include "loewner/rng.hpp"

namespace loewner {

/// Result of a conformal growth run: the composite cluster map plus the
/// realized driver (angles and capacity times) and the parameters that
/// produced it. Immutable once returned.
struct GrowthRun {
  CompositeMap map;
  DriverPath driver;
  RngSeed seed{0, 0};
  double alpha = 0.0;       // capacity-feedback exponent, when applicable
  double delta_a = 0.0;     // base area increment, when applicable
  double rescale_T = 0.0;   // whole-plane burn-in depth actually applied
  bool aborted = false;     // a step produced a non-finite capacity
  std::string abort_reason; // empty unless aborted
};

/// Iterated-map growth with capacity feedback. Each step picks an attachment
/// angle phi uniformly and a capacity
///
///   delta_t_n = delta_a * |F'_{n-1}(w_n)|^{-alpha},
///
/// with the derivative evaluated at w_n = (1 + eps_d) e^{i phi}, where eps_d
/// is the square root of the previous step's capacity (sqrt(delta_a) on the
/// first step) to keep the evaluation off the circle where the derivative
/// can diverge. alpha = 0 reproduces capacity-time growth with constant
/// increments; alpha = 2 is the diffusion-limited regime. If a capacity
/// comes out non-finite the run stops and returns the partial map with the
/// aborted flag set.
GrowthRun grow_hl(double alpha, double delta_a, std::size_t n, RngSeed seed);

/// Builds the composite map of the radial Loewner evolution for a
/// piecewise-constant driver: the evolution on [start, start + k*dt) gets a
/// slit per step with angle equal to the driver value on that step (reduced
/// mod 2*pi at consumption) and capacity dt. With a Brownian driver this
/// samples radial SLE_kappa, with a Levy driver the jump version.
GrowthRun grow_driven(const DriverPath& driver, double dt);

/// Parameters for the scaled infinite-time limit map. Only the brownian and
/// levy kinds can be grown this way.
struct WholePlaneParams {
  DriverKind kind = DriverKind::brownian;
  double kappa = 0.0;
  double jump_rate = 0.0;   // levy only
  double jump_scale = 0.0;  // levy only
  double t = 0.0;           // physical time extension beyond the burn-in
  double t_burn = 10.0;     // burn-in depth T, at least 10
  double dt = 1e-3;
};

/// Grows the whole-plane limit map: evolution over capacity time
/// [-t_burn, t] followed by a rescale with log_scale = -t_burn, representing
/// e^{-T} F(w, T + t). Burn-in increments are indexed backward from time 0,
/// so deepening t_burn at a fixed seed prepends earlier (outermost) slits
/// and leaves the rest of the map unchanged; the physical-time increments
/// come from a separately forked stream, so extending t is also stable.
/// The recorded driver is shifted to start at time 0 and marked prescribed.
GrowthRun grow_whole_plane(const WholePlaneParams& params, RngSeed seed);

/// Writes the slit sequence as CSV with columns index, angle, capacity.
void save_map_csv(const CompositeMap& map, const std::string& file);

/// Loads a slit-sequence CSV written by save_map_csv. log_scale is restored
/// by the caller if it was nonzero (the file stores only the slits).
CompositeMap load_map_csv(const std::string& file);

/// Image of the circle |w| = 1 + offset under the composite map, sampled at
/// num_points equally spaced angles; used for trace plots and geometric
/// inspection. The true boundary is not directly evaluable at slit bases.
std::vector<cplx> trace_points(const CompositeMap& map, std::size_t num_points,
                               double offset = 1e-4);

}  // namespace loewner
