#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "loewner/conformal.hpp"

namespace loewner {

enum class MapOrientation { exterior, interior };

/// Truncated conformal map of the unit circle describing a fluid interface.
///
/// Exterior orientation: f(w) = r w + sum_{k=0..K} u_k w^{-k} maps {|w| > 1}
/// onto the complement of a bounded domain; this is the form every growth
/// operation works with. Interior orientation: f(w) = r w + sum_k u_k w^{+k}
/// maps the unit disk onto the domain itself, with u_1 required to be zero
/// (the linear part belongs to r). r is real and positive, which fixes the
/// rotational gauge.
struct LaurentMap {
  double r = 1.0;
  std::vector<cplx> coeffs;  // u_0 .. u_K
  MapOrientation orientation = MapOrientation::exterior;

  int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Time derivative slot paired with a LaurentMap of the same truncation.
struct MapVelocity {
  double r_dot = 0.0;
  std::vector<cplx> coeff_dots;
};

/// Harmonic moments of the exterior domain together with the area. The
/// moment of order k is the contour-renormalized integral of z^{-k} over the
/// exterior; for k >= 3 it coincides with the absolutely convergent area
/// integral, and for k = 1, 2 the renormalization constant is fixed so that
/// every centered circle gives zero. t_area stores area / (2*pi).
struct MomentVector {
  double t_area = 0.0;
  double area = 0.0;
  std::vector<cplx> moments;  // I_1 .. I_M
};

/// Throws std::invalid_argument if the map violates its invariants
/// (non-finite or non-positive r, non-finite coefficients, interior map
/// with nonzero u_1) and std::runtime_error if the sampled boundary curve
/// self-intersects.
void validate_laurent_map(const LaurentMap& f, std::size_t boundary_samples = 2048);

cplx eval_laurent(const LaurentMap& f, cplx w);
cplx eval_laurent_derivative(const LaurentMap& f, cplx w);

/// Boundary curve samples f(e^{i theta}) at n equally spaced angles.
std::vector<cplx> boundary_points(const LaurentMap& f, std::size_t n);

/// Area enclosed by the image of the unit circle: pi (r^2 - sum k |u_k|^2)
/// for exterior maps, pi (r^2 + sum k |u_k|^2) for interior ones.
double laurent_area(const LaurentMap& f);

/// Generic finite Laurent series c_{min} w^{min} + ... used by the bracket
/// machinery; coeffs[i] multiplies w^{min_power + i}.
struct LaurentSeries {
  int min_power = 0;
  std::vector<cplx> coeffs;

  cplx eval(cplx w) const;
  /// The series w * d/dw applied termwise.
  LaurentSeries scaled_derivative() const;
};

/// Series of the map itself (exterior: powers -K..1; interior: 0..K plus w).
LaurentSeries map_series(const LaurentMap& f);
/// Series of a velocity laid out like the paired map.
LaurentSeries velocity_series(const LaurentMap& f, const MapVelocity& v);
/// The reflected series s~(w) = conj-coefficients of s at 1/w, so that on
/// the unit circle s~(w) equals conj(s(w)).
LaurentSeries reflected_series(const LaurentSeries& s);

/// Samples the bracket {f, g} = w f_w g_t - w g_w f_t at theta_grid equally
/// spaced points of the unit circle. Bilinear in the velocities and
/// antisymmetric under swapping the pairs.
std::vector<cplx> poisson_bracket(const LaurentSeries& f, const LaurentSeries& f_dot,
                                  const LaurentSeries& g, const LaurentSeries& g_dot,
                                  std::size_t theta_grid);
std::vector<cplx> poisson_bracket(const LaurentMap& f, const MapVelocity& f_dot,
                                  const LaurentMap& g, const MapVelocity& g_dot,
                                  std::size_t theta_grid);

/// Max over the sample grid of |{f(w), conj-f(1/w)} - 1|: how far the pair
/// (map, velocity) is from satisfying the interface equation of the
/// normalized source flow. theta_grid 0 selects 8(K+1) points; fewer than
/// 4(K+1) points is rejected.
double pk_residual(const LaurentMap& f, const MapVelocity& f_dot,
                   std::size_t theta_grid = 0);

/// Solves the interface equation {f, conj-f(1/w)} = target for the velocity
/// by least squares on the Fourier grid. target is +1 for the normalized
/// expanding flow. Throws std::runtime_error when the projection matrix is
/// rank-deficient (map at the edge of the polynomial class).
MapVelocity solve_string_velocity(const LaurentMap& f, double target = 1.0);

struct StringEvolutionOptions {
  double residual_tol = 1e-8;       // accepted-step bracket residual bound
  double cusp_threshold = 0.02;     // halt when min |f'| on the circle < threshold * r
  std::size_t univalence_samples = 2048;
  std::size_t max_halvings = 20;
  // Runs the shrinking direction (target -1). This direction is ill-posed:
  // perturbations grow without bound and no accuracy is guaranteed; it
  // exists for experimentation only.
  bool unsafe_contraction = false;
};

struct StringTrajectory {
  std::vector<double> times;
  std::vector<LaurentMap> maps;
  bool halted = false;          // stopped before completing the requested steps
  std::string halt_reason;
  double max_residual = 0.0;    // largest accepted-step residual
  std::size_t halvings = 0;
};

/// Integrates the normalized source flow with an explicit second-order
/// (Heun) step: per step the velocity is solved at the current map and at
/// the Euler predictor, and their average advances the map. The flow
/// expands the domain with area rate pi (equivalently 2*pi times the source
/// normalization 1/2). Steps whose residual exceeds the tolerance are
/// rejected and retried with halved dt; a near-cusp map (min |f'| under the
/// threshold), a self-intersecting boundary, or a singular projection halts
/// the run with a diagnostic and the partial trajectory is returned.
StringTrajectory evolve_string(const LaurentMap& f0, double dt, std::size_t steps,
                               const StringEvolutionOptions& options = {});

/// Exterior harmonic moments I_1..I_M by spectral contour quadrature,
///
///   I_k = -(1/2) * integral of conj(f) f^{-k} (w f') d theta,
///
/// plus the area. quad_points 0 selects an automatic grid; the grid is
/// doubled once and a change above 1e-8 in any moment raises
/// std::runtime_error (quadrature non-convergence).
MomentVector harmonic_moments(const LaurentMap& f, std::size_t M,
                              std::size_t quad_points = 0);

/// Max relative drift per moment order along a trajectory:
/// max_t |I_k(t) - I_k(0)| / (|I_k(0)| + 1e-12) for k = 1..M.
std::vector<double> richardson_invariance(const StringTrajectory& trajectory,
                                          std::size_t M);

/// Harmonic test function Re z^k or Im z^k.
struct HarmonicTestFunction {
  int k = 0;
  bool imaginary_part = false;
};

/// Exact integral of z^k (k >= 0) over a polygon via the divergence theorem
/// applied edge by edge; polygon vertices in order (closed implicitly).
cplx polygon_moment(const std::vector<cplx>& polygon, int k);

/// Integral of the test function over the domain enclosed by the image of
/// the unit circle, by polygonal approximation of the boundary with
/// Richardson extrapolation in the vertex count.
double integrate_harmonic(const LaurentMap& f, const HarmonicTestFunction& phi,
                          std::size_t base_points = 4096);

/// Residual |integral_Omega phi dA - Q[phi](z1)| of the quadrature identity,
/// where Q[phi](z1) = Re-or-Im of sum_m multipole[m] * d^m/dz^m (z^k) at z1
/// (matching phi's real or imaginary part). A domain grown from a point by
/// a pure monopole has multipole = {area}.
double quadrature_check(const LaurentMap& f, const HarmonicTestFunction& phi,
                        const std::vector<cplx>& multipole, cplx z1);

/// Winding number of a closed sampled curve around z.
int winding_number(const std::vector<cplx>& curve, cplx z);

/// Segment self-intersection test for a closed polyline (spatial-hash
/// accelerated; adjacent segments excluded).
bool polyline_self_intersects(const std::vector<cplx>& points);

/// Trajectory dump: columns t, r, re_u0, im_u0, ..., one row per state.
void save_trajectory_csv(const StringTrajectory& trajectory, const std::string& file);

/// Moments along a trajectory: columns t, k, re_I, im_I (k = 0 row stores
/// the area in re_I).
void save_moments_csv(const StringTrajectory& trajectory, std::size_t M,
                      const std::string& file);

}  // namespace loewner
