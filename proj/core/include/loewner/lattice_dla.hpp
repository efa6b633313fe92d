#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "loewner/rng.hpp"

namespace loewner {

struct LatticeSite {
  int m = 0;
  int n = 0;
  friend bool operator==(const LatticeSite& a, const LatticeSite& b) {
    return a.m == b.m && a.n == b.n;
  }
};

struct LatticeSiteHash {
  std::size_t operator()(const LatticeSite& s) const noexcept;
};

using SiteSet = std::unordered_set<LatticeSite, LatticeSiteHash>;
using ChargeMap = std::unordered_map<LatticeSite, double, LatticeSiteHash>;

// A lattice aggregation cluster.  boundary is always the exact set of
// unoccupied 4-neighbors of occupied sites; its mapped values are the
// harmonic-measure charges, which are zero until dla_charges has run (and go
// stale after the next growth step until it runs again).
struct LatticeCluster {
  SiteSet occupied;
  ChargeMap boundary;
  std::vector<LatticeSite> history;  // sites in order of occupation
  double max_radius = 0.0;           // max Euclidean norm over occupied
  std::size_t step() const { return history.size(); }
};

// Single occupied seed at the origin with its four boundary neighbors.
LatticeCluster make_seed_cluster();

// Occupies a current boundary site and updates the boundary set.  Throws
// std::invalid_argument if the site is not a boundary site.
void add_site(LatticeCluster& cluster, LatticeSite site);

// Checks the structural invariants (boundary = exact unoccupied 4-neighbor
// set, charges nonnegative) and, when require_charges is set, that the
// charges sum to 1 within 1e-9.  Throws std::logic_error on violation.
void validate_cluster(const LatticeCluster& cluster, bool require_charges = false);

// Discrete harmonic field on the square box [-L, L]^2.  Occupied and
// boundary sites hold the Dirichlet value 0; the outer edge ring holds the
// continuum far field -(1/4 pi) log(m^2 + n^2); every free site satisfies
// the 5-point Laplace equation to within `residual`.
struct HarmonicField {
  int box_radius = 0;
  std::vector<double> values;       // (2L+1)^2, row-major in (m, n)
  std::vector<std::uint8_t> mask;   // 0 free, 1 zero-Dirichlet, 2 far-field edge
  double residual = 0.0;            // final max |5-point residual| on free sites
  std::size_t iterations = 0;       // outer solver iterations used

  std::size_t side() const { return 2 * static_cast<std::size_t>(box_radius) + 1; }
  std::size_t index(int m, int n) const;
  double at(int m, int n) const;    // bounds-checked value lookup
};

// Solves the exterior lattice Dirichlet problem for the cluster: 5-point
// Laplace on free sites, 0 on cluster and boundary sites, logarithmic far
// field on the box edge.  The solver is preconditioned conjugate gradients
// (multigrid V-cycle preconditioner), iterated until the max 5-point
// residual over free sites drops below `tolerance`; pass the previous
// field as `warm_start` to resume from it after a single growth step.
//
// The box half-width must be at least 8 and at least four times the cluster
// radius so the imposed far field is accurate (std::invalid_argument
// otherwise); std::runtime_error with the best residual if the solver fails
// to converge.
HarmonicField dla_harmonic_field(const LatticeCluster& cluster, int box_radius,
                                 const HarmonicField* warm_start = nullptr,
                                 double tolerance = 1e-8);

// Fills cluster.boundary with the growth probabilities: the charge of a
// boundary site is its discrete inward flux (sum of field differences to
// its free neighbors), normalized so the charges sum to 1.  Free-site
// values are clipped at the boundary value 0 when fluxes are formed (the
// discrete maximum principle bounds the exact field by 0, so positive
// excursions are solver round-off), which keeps every charge nonnegative.
// Throws std::runtime_error if the total flux is not positive and
// std::invalid_argument if the field does not cover the cluster.
void dla_charges(LatticeCluster& cluster, const HarmonicField& field);

enum class DlaMode { exact_charges, random_walker };

struct DlaRun {
  LatticeCluster cluster;
  RngSeed seed{0, 0};
  DlaMode mode = DlaMode::exact_charges;
  // Exact mode diagnostics: worst per-step field residual, worst per-step
  // |sum of charges - 1|, and total preconditioned CG iterations.
  double worst_residual = 0.0;
  double worst_charge_sum_error = 0.0;
  std::size_t total_field_iterations = 0;
};

// Grows a cluster from a single seed to n_particles sites.
//
// exact_charges mode re-solves the harmonic field after every step (box
// half-width four times the cluster radius, warm-started) and samples the
// next site from the exact charge distribution; the returned cluster carries
// the charges of its final state.  random_walker mode releases walkers from
// a circle at cluster radius + 5 that step uniformly over 4-neighbors and
// attach on first contact with a boundary site; walkers straying beyond 100
// times the launch radius are re-injected uniformly on the launch circle.
//
// Throws std::invalid_argument if n_particles is 0 and std::runtime_error if
// the exact-mode box would exceed a half-width of 4096 (box exhaustion).
DlaRun dla_grow(std::size_t n_particles, RngSeed seed, DlaMode mode);

// CSV dump with columns step,m,n in order of occupation.
void save_cluster_csv(const std::string& path, const LatticeCluster& cluster);

// Loads a cluster written by save_cluster_csv, rebuilding the boundary set
// (charges are left at zero).
LatticeCluster load_cluster_csv(const std::string& path);

// SVG rendering: one unit square per site, colored by arrival time.
void save_cluster_svg(const std::string& path, const LatticeCluster& cluster);

}  // namespace loewner
