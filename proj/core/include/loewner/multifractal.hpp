#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "loewner/conformal.hpp"
#include "loewner/growth.hpp"
#include "loewner/lattice_dla.hpp"
#include "loewner/rng.hpp"

namespace loewner {

/// Which spectrum a curve represents: derivative-moment exponents beta(q),
/// partition-function exponents tau(q), or the singularity spectrum f(alpha).
enum class SpectrumKind { beta, tau, f };

std::string spectrum_kind_name(SpectrumKind kind);
SpectrumKind spectrum_kind_from_name(const std::string& name);

/// One sampled spectrum. `abscissa` holds q for beta and tau curves and
/// alpha for f curves, strictly increasing. `stderrs` is empty or matches
/// `values`; entries are standard errors where an estimator provides them
/// and zero for exact or transformed curves. `scale_min`/`scale_max` record
/// the finite-scale window (epsilon range or box-size range) behind an
/// estimated curve; both are zero for closed-form and transformed curves.
///
/// Sign conventions: partition sums follow sum_j p_j^q ~ l^{tau(q)} on boxes
/// of side l, so tau(1) = 0, -tau(0) is the box-counting dimension of the
/// measure's support, and tau is concave in q. f(alpha) is concave with
/// max f = -tau(0). beta(q) is convex.
struct SpectrumCurve {
  SpectrumKind kind = SpectrumKind::beta;
  std::vector<double> abscissa;
  std::vector<double> values;
  std::vector<double> stderrs;
  double scale_min = 0.0;
  double scale_max = 0.0;
  // Set when a Legendre transform attained its extremum at the edge of the
  // input grid somewhere, meaning the output is truncated; widen the input
  // grid to clear it.
  bool edge_extremum = false;
};

/// Checks lengths, strict monotonicity of the abscissa, finiteness, and
/// non-negative stderrs. Throws std::invalid_argument.
void validate_curve(const SpectrumCurve& curve);

/// Discrete convexity/concavity of a curve: chord slopes must be
/// non-decreasing (convex) or non-increasing (concave) up to `tol` per chord
/// pair. Curves with fewer than three points satisfy both.
bool is_convex(const SpectrumCurve& curve, double tol = 1e-9);
bool is_concave(const SpectrumCurve& curve, double tol = 1e-9);

/// Geometric grid with `count` points from `first` to `last` inclusive,
/// both nonzero and of the same sign; works in either direction. Handy for
/// epsilon grids.
std::vector<double> geometric_grid(double first, double last, std::size_t count);

// ---------------------------------------------------------------------------
// Closed-form spectrum of bounded whole-plane SLE_kappa
// ---------------------------------------------------------------------------

/// gamma(q, kappa) = (kappa + 4 - sqrt((kappa+4)^2 - 8 q kappa)) / (2 kappa),
/// the smaller root of kappa g^2 - (kappa+4) g + 2q = 0. Requires kappa > 0
/// and q <= (kappa+4)^2 / (8 kappa) (the square-root domain); throws
/// std::invalid_argument outside it.
double gamma_exact_sle(double q, double kappa);

/// Breakpoints of the three-branch beta formula: the lower branch applies
/// for q <= -1 - 3 kappa / 8 and the linear branch for
/// q >= 3 (kappa+4)^2 / (32 kappa).
double sle_branch_point_low(double kappa);
double sle_branch_point_high(double kappa);

enum class SleBranch { lower, middle, linear };

/// Evaluates one closed-form branch regardless of whether q lies in its
/// nominal range (the lower and middle branches still need the square-root
/// domain). Exposed so continuity at the breakpoints can be checked by
/// evaluating adjacent branches at exactly the same q.
double beta_exact_sle_branch(double q, double kappa, SleBranch branch);

/// Derivative-moment spectrum of bounded whole-plane SLE_kappa:
///
///   beta(q) = kappa g^2/2 - 2g - 1          for q <= -1 - 3 kappa/8
///   beta(q) = kappa g^2/2                   between the breakpoints
///   beta(q) = q - (kappa+4)^2 / (16 kappa)  for q >= 3 (kappa+4)^2/(32 kappa)
///
/// with g = gamma_exact_sle(q, kappa). Continuous in q, convex, defined for
/// every real q (the linear branch takes over before the square root can
/// turn negative). beta(0) = 0.
double beta_exact_sle(double q, double kappa);

/// Residual |kappa g^2 - (kappa+4) g + 2q| of the defining quadratic at
/// g = gamma_exact_sle(q, kappa). Identically zero in exact arithmetic;
/// rounding keeps it near machine epsilon. Same domain as gamma_exact_sle.
double gamma_identity_check(double q, double kappa);

/// Samples beta_exact_sle on a strictly increasing q grid.
SpectrumCurve exact_beta_curve(double kappa, const std::vector<double>& q_grid);

// ---------------------------------------------------------------------------
// Monte Carlo beta estimation from whole-plane map ensembles
// ---------------------------------------------------------------------------

struct BetaEstimate {
  double beta = 0.0;
  double std_error = 0.0;            // ensemble bootstrap spread of the slope
  std::vector<double> eps_grid;      // decreasing evaluation offsets
  std::vector<double> log_moments;   // log pooled angular moment per epsilon
  std::size_t angles = 0;
  std::size_t ensemble = 0;
  // False when a derivative moment came out non-finite (q too negative for
  // the sample); beta and std_error are NaN in that case.
  bool finite = true;
};

/// Log of the angular average of |F'(e^{eps + i theta})|^q over `angles`
/// equispaced theta (the periodic trapezoid rule), one entry per epsilon.
/// Computed in log space, so very large or small moments do not overflow.
/// Requires angles >= 256 and eps_grid strictly decreasing within
/// [1e-3, 1e-1].
std::vector<double> derivative_moment_row(const CompositeMap& map, double q,
                                          const std::vector<double>& eps_grid,
                                          std::size_t angles);

/// Pools per-map moment rows and regresses log moment on -log eps; the
/// slope is the beta estimate. The standard error is the spread of the
/// slope under `bootstrap` ensemble resamples drawn from `seed`. Rows and
/// resampling are combined with deterministic pairwise reductions, so the
/// result is a pure function of (rows, eps_grid, bootstrap, seed).
BetaEstimate beta_from_moment_rows(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& eps_grid,
                                   std::size_t angles, std::size_t bootstrap,
                                   RngSeed seed);

/// Derivative-moment spectrum estimate over an ensemble of whole-plane maps
/// (ensemble size >= 100). Angular and ensemble averages commute and are
/// pooled into one moment per epsilon.
BetaEstimate beta_estimate(const std::vector<CompositeMap>& ensemble, double q,
                           const std::vector<double>& eps_grid,
                           std::size_t angles, std::size_t bootstrap, RngSeed seed);

/// Streaming variant: grows `count` whole-plane maps with member i seeded by
/// {seed.seed, seed.stream + i}, evaluates each map's moment row, and
/// discards the map, so memory stays at one map per worker. Result is
/// identical to growing the ensemble first and calling beta_estimate.
BetaEstimate beta_estimate_whole_plane(const WholePlaneParams& params,
                                       std::size_t count, double q,
                                       const std::vector<double>& eps_grid,
                                       std::size_t angles, std::size_t bootstrap,
                                       RngSeed seed);

// ---------------------------------------------------------------------------
// Legendre transforms between beta, tau, and f
// ---------------------------------------------------------------------------

/// f(alpha) = inf_q [ q + alpha (beta(q) + 1 - q) ]. The alpha grid is
/// built from the chord slopes s of the input: alpha = 1 / (1 - s), valid
/// while s < 1 (slope-1 chords sit at alpha = infinity and are dropped).
/// A constant beta yields the single point alpha = 1; an affine beta yields
/// one point (the transform of a line is degenerate). Sets edge_extremum
/// when an infimum lands on the q-grid edge.
SpectrumCurve legendre_beta_to_f(const SpectrumCurve& beta_curve);

/// f(alpha) = inf_q [ q alpha - tau(q) ] on the alpha grid of input chord
/// slopes. Concave conjugate: involutive on concave tau.
SpectrumCurve legendre_tau_to_f(const SpectrumCurve& tau_curve);

/// tau(q) = inf_alpha [ q alpha - f(alpha) ] sampled on `q_grid`.
SpectrumCurve legendre_f_to_tau(const SpectrumCurve& f_curve,
                                const std::vector<double>& q_grid);

/// Transforms tau -> f -> tau on the input q grid and returns the largest
/// |difference|. Zero (to rounding) for concave input because the chord
/// slopes carry the full discrete subdifferential; non-concave input comes
/// back as its concave envelope, so a positive round-trip gap measures and
/// reports the non-concavity.
double legendre_tau_f_roundtrip(const SpectrumCurve& tau_curve);

// ---------------------------------------------------------------------------
// Box-counting spectra of lattice charge measures
// ---------------------------------------------------------------------------

/// Dyadic box sides 1, 2, 4, ... not exceeding max(1, max_radius / 4).
std::vector<std::size_t> dyadic_scales(const LatticeCluster& cluster);

/// Partition-function exponents of a charge measure: for each box side l in
/// `scales`, charges are summed over the boxes (floor(m/l), floor(n/l)) and
/// tau(q) is the least-squares slope of log sum_j p_j^q against log l
/// (empty boxes are skipped, so q = 0 counts occupied boxes). The measure
/// must already be normalized: total charge within 1e-6 of 1 is checked and
/// never adjusted, which pins tau(1) = 0 up to regression rounding.
/// stderrs carry the per-q regression slope errors. Requires at least 3
/// scales; throws std::runtime_error if non-finite partition sums leave
/// fewer than 3 usable scales for some q.
SpectrumCurve tau_boxcount(const ChargeMap& charges, const std::vector<double>& q_list,
                           const std::vector<std::size_t>& scales);

/// Convenience overload reading the boundary charges of a cluster (run
/// dla_charges first so the charges are current).
SpectrumCurve tau_boxcount(const LatticeCluster& cluster, const std::vector<double>& q_list,
                           const std::vector<std::size_t>& scales);

// ---------------------------------------------------------------------------
// Moment stationarity of whole-plane ensembles
// ---------------------------------------------------------------------------

struct StationarityResult {
  std::vector<double> times;  // requested times snapped to the step grid
  std::vector<double> rho;    // e^{-qt} <|F'(e^{iL(t)} w, t)|^q> per time
                              // (e^{+qt} and the inverted map when !bounded)
  std::vector<double> se;     // ensemble standard error of each rho
  double max_z = 0.0;         // max pairwise |rho_a - rho_b| / sqrt(se_a^2 + se_b^2)
};

/// Grows `ensemble` whole-plane maps (member i seeded by
/// {seed.seed, seed.stream + i}) out to max(times) and evaluates the
/// compensated derivative moment at each listed time using the prefix of
/// the slit sequence realized by then and the recorded driver value L(t)
/// for the rotation. The compensated moment is a constant of the evolution,
/// so max_z is a consistency statistic: it stays O(1) for an unbiased
/// sampler and does not grow as dt is refined. Times must be non-negative
/// multiples of params.dt up to rounding; params.t is overridden to cover
/// them. Bounded maps need |w| > 1, inverted (unbounded) ones 0 < |w| < 1.
/// Requires ensemble >= 500 and at least two listed times. Duplicate times
/// share the identical samples, so their z vanishes exactly.
StationarityResult moment_stationarity(const WholePlaneParams& params,
                                       std::size_t ensemble, double q, cplx w,
                                       const std::vector<double>& times, RngSeed seed,
                                       bool bounded = true);

// ---------------------------------------------------------------------------
// Evolution generator on derivative moments
// ---------------------------------------------------------------------------

/// One symmetric jump atom of the driving process: jumps of +-size, total
/// rate `rate` split evenly between the signs.
struct LevyAtom {
  double size = 0.0;
  double rate = 0.0;
};

/// Driving-process data entering the generator: diffusion constant kappa,
/// symmetric jump atoms, the moment order q, and whether the bounded
/// (|w| > 1, compensation e^{-qt}) or inverted variant is meant. The sign
/// only labels which eigenvalue convention downstream consumers should pair
/// with L[rho] (+q bounded, -q inverted); apply_generator itself is the
/// same operator either way.
struct GeneratorSpec {
  double kappa = 0.0;
  std::vector<LevyAtom> atoms;
  double q = 0.0;
  bool bounded = true;
};

void validate_generator(const GeneratorSpec& spec);

/// One term c * r^power * cos(mode * phi) or c * r^power * sin(mode * phi)
/// of a test function on the polar plane. mode >= 0; sine terms need
/// mode >= 1. The family is closed under every derivative the generator
/// takes, so all differentiation is analytic.
struct PolarTestTerm {
  double coeff = 0.0;
  double power = 0.0;
  int mode = 0;
  bool sine = false;
};

using PolarTestFunction = std::vector<PolarTestTerm>;

/// Tensor-product evaluation grid (radii x angles), row-major with the
/// angle index fastest.
struct PolarGrid {
  std::vector<double> radii;
  std::vector<double> angles;
};

double eval_test_function(const PolarTestFunction& rho, double r, double phi);

/// Jump-diffusion angular generator
///   eta[rho] = -(kappa/2) d^2 rho / d phi^2
///              + sum_atoms (rate/2) (2 rho(r,phi) - rho(r,phi+size) - rho(r,phi-size)).
std::vector<double> eta_hat(const GeneratorSpec& spec, const PolarTestFunction& rho,
                            const PolarGrid& grid);

/// Applies the moment-evolution generator at every grid point w = r e^{i phi}:
///
///   L[rho] = -eta[rho] + w (w+1)/(w-1) d_w rho + conj. term
///            + q (1 - 1/(w-1)^2 - 1/(wbar-1)^2) rho,
///
/// real-valued for the real test family since the mixed terms pair into
/// conjugates. Grid points within 1e-9 of w = 1 are rejected (boundary
/// singularity of the drift and potential). A solution of L[rho] = +q rho
/// analytic at infinity with rho -> 1 carries the bounded moment; the
/// inverted variant pairs with -q at the origin.
std::vector<double> apply_generator(const GeneratorSpec& spec, const PolarTestFunction& rho,
                                    const PolarGrid& grid);

// ---------------------------------------------------------------------------
// Inverted whole-plane evaluation and spectrum serialization
// ---------------------------------------------------------------------------

/// Value and derivative of the inverted map G(w) = 1 / F(1/w) for
/// 0 < |w| < 1, the variant growing from infinity toward the origin; its
/// derivative moments are taken inside the disk. Throws std::runtime_error
/// if F(1/w) = 0.
ValueAndDeriv eval_inverted(const CompositeMap& F, cplx w);

/// Writes columns q, value, stderr, kind, scale_min, scale_max with the kind
/// encoded numerically (0 = beta, 1 = tau, 2 = f) to keep the file a plain
/// numeric table; the encoding is fixed and read back by load_spectrum_csv.
void save_spectrum_csv(const SpectrumCurve& curve, const std::string& file);
SpectrumCurve load_spectrum_csv(const std::string& file);

}  // namespace loewner
