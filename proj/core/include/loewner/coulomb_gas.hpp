#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "loewner/conformal.hpp"
#include "loewner/hele_shaw.hpp"
#include "loewner/rng.hpp"

namespace loewner {

// Which pairwise interaction the gas uses.
//
//   plane:      -2 log|z_i - z_j|, the full-plane log-gas at inverse
//               temperature 2 (normal-matrix eigenvalue ensemble).
//   half_plane: the soliton phase-shift kernel
//               -log[(z-z')(zbar-zbar') / ((z-zbar')(zbar-z'))],
//               i.e. the plane interaction screened by mirror images in an
//               ideal conductor along the real axis.  Particles must stay in
//               the open upper half-plane; proposals crossing the axis are
//               rejected.  Only the energy and the sampler change; the
//               droplet statistics below are meant for the plane kernel.
enum class GasKernel { plane, half_plane };

// Configuration of the 2D Coulomb gas.
//
// The energy is
//
//   E = sum_{i<j} pair(z_i, z_j)
//       + (confinement_scale / hbar) * sum_i (|z_i|^2 + V(z_i)),
//
// with V(z) = sum_k (t_k z^k + conj(t_k) zbar^k) the harmonic deformation
// given by potential_coeffs (index 0 holds t_1).  confinement_scale = 1
// matches the bare ensemble weight; droplet experiments that pin the
// constant-density value to 1 in the units where the droplet area is
// 2*pi*hbar*N use confinement_scale = 1/2.
struct GasState {
  std::vector<cplx> positions;
  double hbar = 1.0;
  std::vector<cplx> potential_coeffs;
  double confinement_scale = 1.0;
  GasKernel kernel = GasKernel::plane;
  // Running value of energy() maintained incrementally by the sampler;
  // resynchronized against a full recomputation periodically.
  double energy_cache = 0.0;
};

// Throws std::invalid_argument if hbar or confinement_scale is not positive,
// any position is non-finite, the half-plane kernel is paired with points
// outside the open upper half-plane, or the harmonic deformation fails the
// admissibility bound |V| < 0.5 |z|^2 on the boundary of the sampling disk
// (twice the expected droplet radius); past that bound the confining term no
// longer dominates and the measure loses normalizability.
void validate_gas_state(const GasState& state);

// Total energy of the configuration.  Coincident particles yield +infinity
// (an always-rejected configuration), not an exception, so the sampler can
// evaluate proposals without branching.
double energy(const GasState& state);

// One-particle potential term (confinement_scale/hbar) * (|z|^2 + V(z)).
double confinement_energy(const GasState& state, cplx z);

struct MetropolisOptions {
  std::size_t sweeps = 2000;       // post-burn-in sweeps (N proposals each)
  std::size_t burn_in = 500;       // discarded equilibration sweeps
  std::size_t thin = 10;           // keep every thin-th snapshot
  double proposal_scale = 0.0;     // Gaussian step; 0 picks sqrt(hbar)
  bool auto_tune = true;           // adapt scale during burn-in, then freeze
  std::size_t recheck_interval = 250;  // sweeps between full-energy resyncs
};

struct MetropolisResult {
  GasState state;                        // final configuration
  std::vector<std::vector<cplx>> chain;  // thinned post-burn-in snapshots
  double acceptance_rate = 0.0;          // post-burn-in average
  double proposal_scale = 0.0;           // frozen value actually used
  double max_cache_error = 0.0;          // worst |cache - recomputed|
  bool low_acceptance = false;           // acceptance below 1%
};

// Metropolis sampling of exp(-E) with sequential single-particle Gaussian
// proposals.  Detailed balance holds for the frozen proposal scale; when
// auto_tune is set the scale is adapted toward 30-50% acceptance during
// burn-in only.  Throws std::invalid_argument on an invalid state or
// sweeps == 0.
MetropolisResult metropolis_run(GasState state, const MetropolisOptions& options,
                                RngSeed seed);

struct DropletStats {
  std::vector<double> radii;     // annulus midpoints
  std::vector<double> density;   // 2*pi*hbar * mean number density
  // Radius enclosing 99% of the sampled mass.  The edge of the cloud
  // fluctuates over a width ~sqrt(hbar)/2, so this quantile carries a
  // positive finite-N bias of about +0.5 * radius / sqrt(N); it measures
  // the sampled cloud, not the limiting droplet.
  double mass_radius = 0.0;
  // Droplet edge estimate: the radius where the angular-average density
  // falls to half its interior plateau.  For the smeared edge profile this
  // locates the limiting support boundary to second order in the edge
  // width, so it is the field to compare against sqrt(2*hbar*T).
  double support_radius = 0.0;
  std::vector<cplx> boundary;    // per-sector edge estimate (half-plateau
                                 // crossing of each sector's radial profile)
};

// Radial droplet statistics over the second half of the chain (the first
// half is discarded as residual equilibration).  density is the angular
// average of 2*pi*hbar times the empirical number density, the normalization
// in which the saturated droplet has density 1.  Throws std::invalid_argument
// if the chain is empty, bins == 0, or sectors < 8.
DropletStats droplet_stats(const std::vector<std::vector<cplx>>& chain,
                           std::size_t bins, double hbar,
                           std::size_t sectors = 64);

// Symmetric curve (Hausdorff) distance between a Monte Carlo boundary
// estimate and the boundary curve of a Laurent map, normalized by the map's
// effective radius sqrt(area/pi).  Both inputs are treated as closed
// polylines: each vertex of one is measured against the segments of the
// other, so the result is insensitive to how densely either curve is
// sampled.  Throws std::invalid_argument if boundary has fewer than 3
// points or the map is invalid.
double compare_to_hele_shaw(const std::vector<cplx>& boundary,
                            const LaurentMap& f, std::size_t map_samples = 512);

// CSV dump of a thinned chain with columns snapshot,particle,x,y.
void save_chain_csv(const std::string& path,
                    const std::vector<std::vector<cplx>>& chain);

// CSV dump of a radial density profile with columns r,density.
void save_density_csv(const std::string& path, const DropletStats& stats);

// SVG scatter plot of the final configuration with the estimated boundary
// polygon (and optionally a reference curve) overlaid.
void save_gas_svg(const std::string& path, const std::vector<cplx>& positions,
                  const std::vector<cplx>& boundary,
                  const std::vector<cplx>& reference = {});

}  // namespace loewner
