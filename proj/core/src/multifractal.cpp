#include "loewner/multifractal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <utility>

#include "loewner/csv.hpp"
#include "loewner/numerics.hpp"
#include "loewner/parallel.hpp"

namespace loewner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 6.283185307179586476925286766559;

// log(sum_i exp(x_i)) via max shift and a deterministic pairwise reduction;
// never overflows and depends only on the order of x.
double log_sum_exp(const std::vector<double>& x) {
  double top = -kInf;
  for (double v : x) top = std::max(top, v);
  if (!std::isfinite(top)) return top;  // all -inf, or a NaN/inf poisoned entry
  std::vector<double> shifted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = std::exp(x[i] - top);
  return top + std::log(pairwise_sum(shifted));
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void check_strictly_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw std::invalid_argument(std::string(what) + " must be finite");
    }
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
  }
}

void check_kappa(double kappa) {
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    throw std::invalid_argument("kappa must be finite and positive");
  }
}

void check_eps_grid(const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 2) {
    throw std::invalid_argument("epsilon grid needs at least two offsets");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double e = eps_grid[i];
    if (!std::isfinite(e) || e < 1e-3 * (1.0 - 1e-12) || e > 1e-1 * (1.0 + 1e-12)) {
      throw std::invalid_argument("epsilon offsets must lie in [1e-3, 1e-1]");
    }
    if (i > 0 && !(e < eps_grid[i - 1])) {
      throw std::invalid_argument("epsilon grid must be strictly decreasing");
    }
  }
}

// Slope standard error of an ordinary least-squares line from the residual
// variance; zero when there are no spare degrees of freedom or the fit is
// exact.
double slope_std_error(const std::vector<double>& x, const std::vector<double>& y,
                       const LinearFit& fit) {
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  const double xbar = mean(x);
  double ss_res = 0.0;
  double ss_x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
    ss_x += (x[i] - xbar) * (x[i] - xbar);
  }
  if (!(ss_x > 0.0)) return 0.0;
  return std::sqrt(ss_res / static_cast<double>(n - 2) / ss_x);
}

void check_test_function(const PolarTestFunction& rho) {
  if (rho.empty()) {
    throw std::invalid_argument("test function needs at least one term");
  }
  for (const auto& term : rho) {
    check_finite(term.coeff, "test term coefficient");
    check_finite(term.power, "test term power");
    if (term.mode < 0) {
      throw std::invalid_argument("test term mode must be non-negative");
    }
    if (term.sine && term.mode == 0) {
      throw std::invalid_argument("sine test terms need mode >= 1 (sin(0) vanishes)");
    }
  }
}

void check_polar_grid(const PolarGrid& grid) {
  if (grid.radii.empty() || grid.angles.empty()) {
    throw std::invalid_argument("polar grid must have radii and angles");
  }
  for (double r : grid.radii) {
    if (!std::isfinite(r) || r <= 0.0) {
      throw std::invalid_argument("polar grid radii must be finite and positive");
    }
  }
  for (double a : grid.angles) check_finite(a, "polar grid angle");
}

long long floor_div(long long a, long long b) {
  long long d = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --d;
  return d;
}

struct LegendreEval {
  double value = 0.0;
  bool edge = false;
};

// Minimum of objective(j) over grid indices with a strict-edge report: the
// edge flag is raised only when the minimizer sits at an end of the grid and
// beats its inner neighbor outright. Supporting-line ties at the boundary
// (the generic case for exactly transformable data) do not raise it.
template <typename F>
LegendreEval grid_infimum(std::size_t n, F&& objective) {
  std::size_t arg = 0;
  double best = objective(0);
  for (std::size_t j = 1; j < n; ++j) {
    const double v = objective(j);
    if (v < best) {
      best = v;
      arg = j;
    }
  }
  LegendreEval out;
  out.value = best;
  const double tol = 1e-9 * std::max(1.0, std::abs(best));
  if (n >= 2) {
    if (arg == 0 && best < objective(1) - tol) out.edge = true;
    if (arg == n - 1 && best < objective(n - 2) - tol) out.edge = true;
  }
  return out;
}

// Strictly increasing deduplicated chord slopes of a sampled curve.
std::vector<double> chord_slopes(const SpectrumCurve& curve) {
  std::vector<double> slopes;
  slopes.reserve(curve.abscissa.size());
  for (std::size_t i = 0; i + 1 < curve.abscissa.size(); ++i) {
    slopes.push_back((curve.values[i + 1] - curve.values[i]) /
                     (curve.abscissa[i + 1] - curve.abscissa[i]));
  }
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> unique;
  for (double s : slopes) {
    if (unique.empty() || s - unique.back() > 1e-12 * std::max(1.0, std::abs(s))) {
      unique.push_back(s);
    }
  }
  return unique;
}

}  // namespace

std::string spectrum_kind_name(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::beta: return "beta";
    case SpectrumKind::tau: return "tau";
    case SpectrumKind::f: return "f";
  }
  throw std::invalid_argument("unknown spectrum kind");
}

SpectrumKind spectrum_kind_from_name(const std::string& name) {
  if (name == "beta") return SpectrumKind::beta;
  if (name == "tau") return SpectrumKind::tau;
  if (name == "f") return SpectrumKind::f;
  throw std::invalid_argument("unknown spectrum kind: " + name);
}

void validate_curve(const SpectrumCurve& curve) {
  if (curve.abscissa.empty()) {
    throw std::invalid_argument("spectrum curve must have at least one point");
  }
  if (curve.values.size() != curve.abscissa.size()) {
    throw std::invalid_argument("spectrum curve values must match the abscissa length");
  }
  check_strictly_increasing(curve.abscissa, "spectrum abscissa");
  for (double v : curve.values) check_finite(v, "spectrum value");
  if (!curve.stderrs.empty()) {
    if (curve.stderrs.size() != curve.abscissa.size()) {
      throw std::invalid_argument("spectrum stderr list must be empty or match the abscissa");
    }
    for (double s : curve.stderrs) {
      if (!std::isfinite(s) || s < 0.0) {
        throw std::invalid_argument("spectrum stderrs must be finite and non-negative");
      }
    }
  }
  if (!std::isfinite(curve.scale_min) || !std::isfinite(curve.scale_max) ||
      curve.scale_min < 0.0 || curve.scale_max < curve.scale_min) {
    throw std::invalid_argument("spectrum scale window must satisfy 0 <= scale_min <= scale_max");
  }
}

bool is_convex(const SpectrumCurve& curve, double tol) {
  validate_curve(curve);
  const auto& a = curve.abscissa;
  const auto& v = curve.values;
  double prev = -kInf;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double s = (v[i + 1] - v[i]) / (a[i + 1] - a[i]);
    if (s < prev - tol) return false;
    prev = s;
  }
  return true;
}

bool is_concave(const SpectrumCurve& curve, double tol) {
  validate_curve(curve);
  const auto& a = curve.abscissa;
  const auto& v = curve.values;
  double prev = kInf;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double s = (v[i + 1] - v[i]) / (a[i + 1] - a[i]);
    if (s > prev + tol) return false;
    prev = s;
  }
  return true;
}

std::vector<double> geometric_grid(double first, double last, std::size_t count) {
  if (count < 2) {
    throw std::invalid_argument("geometric grid needs at least two points");
  }
  check_finite(first, "grid endpoint");
  check_finite(last, "grid endpoint");
  if (first == 0.0 || last == 0.0 || (first > 0.0) != (last > 0.0)) {
    throw std::invalid_argument("geometric grid endpoints must be nonzero with equal signs");
  }
  std::vector<double> grid(count);
  const double log_ratio = std::log(last / first) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = first * std::exp(log_ratio * static_cast<double>(i));
  }
  grid.front() = first;
  grid.back() = last;
  return grid;
}

double gamma_exact_sle(double q, double kappa) {
  check_kappa(kappa);
  check_finite(q, "q");
  const double kp4 = kappa + 4.0;
  double disc = kp4 * kp4 - 8.0 * q * kappa;
  if (disc < 0.0) {
    if (disc < -1e-9 * kp4 * kp4) {
      throw std::invalid_argument(
          "q lies beyond the square-root domain q <= (kappa+4)^2 / (8 kappa)");
    }
    disc = 0.0;
  }
  return (kp4 - std::sqrt(disc)) / (2.0 * kappa);
}

double sle_branch_point_low(double kappa) {
  check_kappa(kappa);
  return -1.0 - 3.0 * kappa / 8.0;
}

double sle_branch_point_high(double kappa) {
  check_kappa(kappa);
  return 3.0 * (kappa + 4.0) * (kappa + 4.0) / (32.0 * kappa);
}

double beta_exact_sle_branch(double q, double kappa, SleBranch branch) {
  check_kappa(kappa);
  check_finite(q, "q");
  switch (branch) {
    case SleBranch::lower: {
      const double g = gamma_exact_sle(q, kappa);
      return kappa * g * g / 2.0 - 2.0 * g - 1.0;
    }
    case SleBranch::middle: {
      const double g = gamma_exact_sle(q, kappa);
      return kappa * g * g / 2.0;
    }
    case SleBranch::linear:
      return q - (kappa + 4.0) * (kappa + 4.0) / (16.0 * kappa);
  }
  throw std::invalid_argument("unknown spectrum branch");
}

double beta_exact_sle(double q, double kappa) {
  check_kappa(kappa);
  check_finite(q, "q");
  if (q <= sle_branch_point_low(kappa)) {
    return beta_exact_sle_branch(q, kappa, SleBranch::lower);
  }
  if (q >= sle_branch_point_high(kappa)) {
    return beta_exact_sle_branch(q, kappa, SleBranch::linear);
  }
  return beta_exact_sle_branch(q, kappa, SleBranch::middle);
}

double gamma_identity_check(double q, double kappa) {
  const double g = gamma_exact_sle(q, kappa);
  return std::abs(kappa * g * g - (kappa + 4.0) * g + 2.0 * q);
}

SpectrumCurve exact_beta_curve(double kappa, const std::vector<double>& q_grid) {
  check_kappa(kappa);
  if (q_grid.empty()) {
    throw std::invalid_argument("q grid must be non-empty");
  }
  check_strictly_increasing(q_grid, "q grid");
  SpectrumCurve curve;
  curve.kind = SpectrumKind::beta;
  curve.abscissa = q_grid;
  curve.values.reserve(q_grid.size());
  for (double q : q_grid) curve.values.push_back(beta_exact_sle(q, kappa));
  curve.stderrs.assign(q_grid.size(), 0.0);
  return curve;
}

std::vector<double> derivative_moment_row(const CompositeMap& map, double q,
                                          const std::vector<double>& eps_grid,
                                          std::size_t angles) {
  check_finite(q, "q");
  check_eps_grid(eps_grid);
  if (angles < 256) {
    throw std::invalid_argument("angular quadrature needs at least 256 angles");
  }
  std::vector<double> row;
  row.reserve(eps_grid.size());
  std::vector<double> log_weights(angles);
  for (double eps : eps_grid) {
    const double radius = std::exp(eps);
    for (std::size_t j = 0; j < angles; ++j) {
      const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(angles);
      const cplx w = std::polar(radius, theta);
      const cplx deriv = eval_with_derivative(map, w).deriv;
      const double mag = std::abs(deriv);
      log_weights[j] = (mag > 0.0 && std::isfinite(mag)) ? q * std::log(mag) : kNaN;
    }
    row.push_back(log_sum_exp(log_weights) - std::log(static_cast<double>(angles)));
  }
  return row;
}

BetaEstimate beta_from_moment_rows(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& eps_grid,
                                   std::size_t angles, std::size_t bootstrap,
                                   RngSeed seed) {
  check_eps_grid(eps_grid);
  if (rows.empty()) {
    throw std::invalid_argument("moment pooling needs at least one row");
  }
  const std::size_t n = rows.size();
  const std::size_t k_eps = eps_grid.size();
  BetaEstimate est;
  est.eps_grid = eps_grid;
  est.angles = angles;
  est.ensemble = n;
  for (const auto& row : rows) {
    if (row.size() != k_eps) {
      throw std::invalid_argument("every moment row must match the epsilon grid");
    }
    for (double v : row) {
      if (!std::isfinite(v)) est.finite = false;
    }
  }

  std::vector<double> x(k_eps);
  for (std::size_t k = 0; k < k_eps; ++k) x[k] = -std::log(eps_grid[k]);

  std::vector<double> column(n);
  est.log_moments.resize(k_eps);
  for (std::size_t k = 0; k < k_eps; ++k) {
    for (std::size_t i = 0; i < n; ++i) column[i] = rows[i][k];
    est.log_moments[k] = log_sum_exp(column) - std::log(static_cast<double>(n));
  }

  if (!est.finite) {
    est.beta = kNaN;
    est.std_error = kNaN;
    return est;
  }

  est.beta = linear_fit(x, est.log_moments).slope;

  if (bootstrap >= 2 && n >= 2) {
    CounterRng rng(seed);
    std::vector<double> slopes;
    slopes.reserve(bootstrap);
    std::vector<std::size_t> pick(n);
    std::vector<double> resampled(k_eps);
    for (std::size_t b = 0; b < bootstrap; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        pick[i] = static_cast<std::size_t>(rng.next_u64() % n);
      }
      for (std::size_t k = 0; k < k_eps; ++k) {
        for (std::size_t i = 0; i < n; ++i) column[i] = rows[pick[i]][k];
        resampled[k] = log_sum_exp(column) - std::log(static_cast<double>(n));
      }
      slopes.push_back(linear_fit(x, resampled).slope);
    }
    est.std_error = std::sqrt(sample_variance(slopes));
  }
  return est;
}

BetaEstimate beta_estimate(const std::vector<CompositeMap>& ensemble, double q,
                           const std::vector<double>& eps_grid,
                           std::size_t angles, std::size_t bootstrap, RngSeed seed) {
  if (ensemble.size() < 100) {
    throw std::invalid_argument("beta estimation needs an ensemble of at least 100 maps");
  }
  std::vector<std::vector<double>> rows(ensemble.size());
  run_indexed(ensemble.size(), default_worker_count(), [&](std::size_t i) {
    rows[i] = derivative_moment_row(ensemble[i], q, eps_grid, angles);
  });
  return beta_from_moment_rows(rows, eps_grid, angles, bootstrap, seed);
}

BetaEstimate beta_estimate_whole_plane(const WholePlaneParams& params,
                                       std::size_t count, double q,
                                       const std::vector<double>& eps_grid,
                                       std::size_t angles, std::size_t bootstrap,
                                       RngSeed seed) {
  if (count < 100) {
    throw std::invalid_argument("beta estimation needs an ensemble of at least 100 maps");
  }
  std::vector<std::vector<double>> rows(count);
  run_indexed(count, default_worker_count(), [&](std::size_t i) {
    const GrowthRun run = grow_whole_plane(params, RngSeed{seed.seed, seed.stream + i});
    rows[i] = derivative_moment_row(run.map, q, eps_grid, angles);
  });
  return beta_from_moment_rows(rows, eps_grid, angles, bootstrap, seed);
}

SpectrumCurve legendre_beta_to_f(const SpectrumCurve& beta_curve) {
  validate_curve(beta_curve);
  if (beta_curve.kind != SpectrumKind::beta) {
    throw std::invalid_argument("legendre_beta_to_f expects a beta curve");
  }
  if (beta_curve.abscissa.size() < 2) {
    throw std::invalid_argument("legendre transform needs at least two grid points");
  }
  const auto& qg = beta_curve.abscissa;
  const auto& bv = beta_curve.values;

  std::vector<double> alphas;
  for (double s : chord_slopes(beta_curve)) {
    if (s < 1.0 - 1e-12) alphas.push_back(1.0 / (1.0 - s));
  }
  std::sort(alphas.begin(), alphas.end());
  if (alphas.empty()) {
    throw std::invalid_argument(
        "beta chords all have slope >= 1; no finite alpha values to transform onto");
  }

  SpectrumCurve f;
  f.kind = SpectrumKind::f;
  for (double alpha : alphas) {
    const auto eval = grid_infimum(qg.size(), [&](std::size_t j) {
      return qg[j] + alpha * (bv[j] + 1.0 - qg[j]);
    });
    if (!f.abscissa.empty() && !(alpha > f.abscissa.back() + 1e-12)) continue;
    f.abscissa.push_back(alpha);
    f.values.push_back(eval.value);
    if (eval.edge) f.edge_extremum = true;
  }
  f.stderrs.assign(f.abscissa.size(), 0.0);
  return f;
}

SpectrumCurve legendre_tau_to_f(const SpectrumCurve& tau_curve) {
  validate_curve(tau_curve);
  if (tau_curve.kind != SpectrumKind::tau) {
    throw std::invalid_argument("legendre_tau_to_f expects a tau curve");
  }
  if (tau_curve.abscissa.size() < 2) {
    throw std::invalid_argument("legendre transform needs at least two grid points");
  }
  const auto& qg = tau_curve.abscissa;
  const auto& tv = tau_curve.values;

  SpectrumCurve f;
  f.kind = SpectrumKind::f;
  for (double alpha : chord_slopes(tau_curve)) {
    const auto eval = grid_infimum(qg.size(), [&](std::size_t j) {
      return qg[j] * alpha - tv[j];
    });
    if (!f.abscissa.empty() && !(alpha > f.abscissa.back() + 1e-12)) continue;
    f.abscissa.push_back(alpha);
    f.values.push_back(eval.value);
    if (eval.edge) f.edge_extremum = true;
  }
  f.stderrs.assign(f.abscissa.size(), 0.0);
  return f;
}

SpectrumCurve legendre_f_to_tau(const SpectrumCurve& f_curve,
                                const std::vector<double>& q_grid) {
  validate_curve(f_curve);
  if (f_curve.kind != SpectrumKind::f) {
    throw std::invalid_argument("legendre_f_to_tau expects an f curve");
  }
  if (q_grid.empty()) {
    throw std::invalid_argument("q grid must be non-empty");
  }
  check_strictly_increasing(q_grid, "q grid");
  const auto& ag = f_curve.abscissa;
  const auto& fv = f_curve.values;

  SpectrumCurve tau;
  tau.kind = SpectrumKind::tau;
  tau.abscissa = q_grid;
  for (double q : q_grid) {
    const auto eval = grid_infimum(ag.size(), [&](std::size_t j) {
      return q * ag[j] - fv[j];
    });
    tau.values.push_back(eval.value);
    if (eval.edge) tau.edge_extremum = true;
  }
  tau.stderrs.assign(tau.abscissa.size(), 0.0);
  return tau;
}

double legendre_tau_f_roundtrip(const SpectrumCurve& tau_curve) {
  const SpectrumCurve f = legendre_tau_to_f(tau_curve);
  const SpectrumCurve back = legendre_f_to_tau(f, tau_curve.abscissa);
  double worst = 0.0;
  for (std::size_t i = 0; i < tau_curve.values.size(); ++i) {
    worst = std::max(worst, std::abs(back.values[i] - tau_curve.values[i]));
  }
  return worst;
}

std::vector<std::size_t> dyadic_scales(const LatticeCluster& cluster) {
  const double cap = std::max(1.0, cluster.max_radius / 4.0);
  std::vector<std::size_t> scales;
  for (std::size_t l = 1; static_cast<double>(l) <= cap; l *= 2) {
    scales.push_back(l);
  }
  return scales;
}

SpectrumCurve tau_boxcount(const ChargeMap& charges, const std::vector<double>& q_list,
                           const std::vector<std::size_t>& scales) {
  if (q_list.empty()) {
    throw std::invalid_argument("q list must be non-empty");
  }
  check_strictly_increasing(q_list, "q list");
  if (scales.size() < 3) {
    throw std::invalid_argument(
        "box counting needs at least 3 usable scales (dyadic box sides between the "
        "lattice spacing and a quarter of the cluster radius)");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1 || (i > 0 && scales[i] <= scales[i - 1])) {
      throw std::invalid_argument("box scales must be strictly increasing and at least 1");
    }
  }
  if (charges.empty()) {
    throw std::invalid_argument("charge measure must be non-empty");
  }

  // Canonical site order so partition sums are independent of hash layout.
  std::vector<std::pair<LatticeSite, double>> sites(charges.begin(), charges.end());
  std::sort(sites.begin(), sites.end(), [](const auto& a, const auto& b) {
    return a.first.m != b.first.m ? a.first.m < b.first.m : a.first.n < b.first.n;
  });
  std::vector<double> mass;
  mass.reserve(sites.size());
  for (const auto& [site, p] : sites) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("charges must be finite and non-negative");
    }
    mass.push_back(p);
  }
  if (std::abs(pairwise_sum(mass) - 1.0) > 1e-6) {
    throw std::invalid_argument(
        "charges must form a probability measure (total 1); recompute them before box "
        "counting");
  }

  // Per scale: log of every positive box mass, in canonical box order.
  std::vector<std::vector<double>> log_box_mass(scales.size());
  std::vector<std::pair<std::pair<long long, long long>, double>> boxed;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const long long l = static_cast<long long>(scales[s]);
    boxed.clear();
    boxed.reserve(sites.size());
    for (const auto& [site, p] : sites) {
      boxed.push_back({{floor_div(site.m, l), floor_div(site.n, l)}, p});
    }
    std::sort(boxed.begin(), boxed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t i = 0;
    while (i < boxed.size()) {
      std::size_t j = i;
      double total = 0.0;
      while (j < boxed.size() && boxed[j].first == boxed[i].first) {
        total += boxed[j].second;
        ++j;
      }
      if (total > 0.0) log_box_mass[s].push_back(std::log(total));
      i = j;
    }
  }

  SpectrumCurve tau;
  tau.kind = SpectrumKind::tau;
  tau.abscissa = q_list;
  tau.scale_min = static_cast<double>(scales.front());
  tau.scale_max = static_cast<double>(scales.back());
  std::vector<double> weighted;
  for (double q : q_list) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t s = 0; s < scales.size(); ++s) {
      if (log_box_mass[s].empty()) continue;
      weighted.resize(log_box_mass[s].size());
      for (std::size_t j = 0; j < weighted.size(); ++j) {
        weighted[j] = q * log_box_mass[s][j];
      }
      const double log_sum = log_sum_exp(weighted);
      if (!std::isfinite(log_sum)) continue;
      xs.push_back(std::log(static_cast<double>(scales[s])));
      ys.push_back(log_sum);
    }
    if (xs.size() < 3) {
      throw std::runtime_error("fewer than 3 usable scales for the partition sum at q = " +
                               format_double(q));
    }
    const LinearFit fit = linear_fit(xs, ys);
    tau.values.push_back(fit.slope);
    tau.stderrs.push_back(slope_std_error(xs, ys, fit));
  }
  return tau;
}

SpectrumCurve tau_boxcount(const LatticeCluster& cluster, const std::vector<double>& q_list,
                           const std::vector<std::size_t>& scales) {
  return tau_boxcount(cluster.boundary, q_list, scales);
}

StationarityResult moment_stationarity(const WholePlaneParams& params,
                                       std::size_t ensemble, double q, cplx w,
                                       const std::vector<double>& times, RngSeed seed,
                                       bool bounded) {
  if (ensemble < 500) {
    throw std::invalid_argument("stationarity testing needs an ensemble of at least 500");
  }
  if (times.size() < 2) {
    throw std::invalid_argument("stationarity testing needs at least two times");
  }
  check_finite(q, "q");
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw std::invalid_argument("evaluation point must be finite");
  }
  const double mod = std::abs(w);
  if (bounded ? !(mod > 1.0) : !(mod > 0.0 && mod < 1.0)) {
    throw std::invalid_argument(bounded
                                    ? "bounded moments need |w| > 1"
                                    : "inverted moments need 0 < |w| < 1");
  }
  if (!std::isfinite(params.dt) || params.dt <= 0.0) {
    throw std::invalid_argument("dt must be finite and positive");
  }

  std::vector<long long> steps;
  steps.reserve(times.size());
  long long max_steps = 0;
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) {
      throw std::invalid_argument("times must be finite and non-negative");
    }
    const long long k = std::llround(t / params.dt);
    if (std::abs(static_cast<double>(k) * params.dt - t) > 1e-9 * std::max(1.0, t)) {
      throw std::invalid_argument("times must be multiples of dt");
    }
    steps.push_back(k);
    max_steps = std::max(max_steps, k);
  }

  WholePlaneParams local = params;
  // One extra step so the driver value at the last requested time is on
  // record (each recorded value starts a step).
  local.t = static_cast<double>(max_steps + 1) * params.dt;
  const auto n_burn = static_cast<std::size_t>(std::llround(params.t_burn / params.dt));

  const std::size_t n_times = times.size();
  std::vector<std::vector<double>> samples(n_times, std::vector<double>(ensemble));
  run_indexed(ensemble, default_worker_count(), [&](std::size_t i) {
    const GrowthRun run = grow_whole_plane(local, RngSeed{seed.seed, seed.stream + i});
    CompositeMap prefix;
    prefix.log_scale = run.map.log_scale;
    for (std::size_t k = 0; k < n_times; ++k) {
      const double t = static_cast<double>(steps[k]) * params.dt;
      const std::size_t n_slits = n_burn + static_cast<std::size_t>(steps[k]);
      prefix.slits.assign(run.map.slits.begin(),
                          run.map.slits.begin() + static_cast<std::ptrdiff_t>(n_slits));
      const double level = run.driver.value_at(static_cast<double>(n_burn + steps[k]) *
                                               params.dt);
      const cplx v = std::polar(1.0, level) * w;
      const cplx deriv = bounded ? eval_with_derivative(prefix, v).deriv
                                 : eval_inverted(prefix, v).deriv;
      const double compensation = bounded ? -q * t : q * t;
      samples[k][i] = std::exp(q * std::log(std::abs(deriv)) + compensation);
    }
  });

  StationarityResult result;
  result.times.reserve(n_times);
  for (long long k : steps) result.times.push_back(static_cast<double>(k) * params.dt);
  for (std::size_t k = 0; k < n_times; ++k) {
    result.rho.push_back(pairwise_sum(samples[k]) / static_cast<double>(ensemble));
    result.se.push_back(
        std::sqrt(sample_variance(samples[k]) / static_cast<double>(ensemble)));
  }
  for (std::size_t a = 0; a < n_times; ++a) {
    for (std::size_t b = a + 1; b < n_times; ++b) {
      const double gap = std::abs(result.rho[a] - result.rho[b]);
      if (gap == 0.0) continue;
      const double pooled = std::hypot(result.se[a], result.se[b]);
      result.max_z = std::max(result.max_z, pooled > 0.0 ? gap / pooled : kInf);
    }
  }
  return result;
}

void validate_generator(const GeneratorSpec& spec) {
  if (!std::isfinite(spec.kappa) || spec.kappa < 0.0) {
    throw std::invalid_argument("generator kappa must be finite and non-negative");
  }
  check_finite(spec.q, "generator q");
  for (const auto& atom : spec.atoms) {
    check_finite(atom.size, "jump atom size");
    if (!std::isfinite(atom.rate) || atom.rate < 0.0) {
      throw std::invalid_argument("jump atom rates must be finite and non-negative");
    }
  }
}

double eval_test_function(const PolarTestFunction& rho, double r, double phi) {
  check_test_function(rho);
  if (!std::isfinite(r) || r <= 0.0) {
    throw std::invalid_argument("test function radius must be finite and positive");
  }
  check_finite(phi, "test function angle");
  double value = 0.0;
  for (const auto& term : rho) {
    const double angular = term.sine ? std::sin(term.mode * phi) : std::cos(term.mode * phi);
    value += term.coeff * std::pow(r, term.power) * angular;
  }
  return value;
}

namespace {

// rho, its angular derivatives, and r d_r rho at one point, all analytic.
struct TestDerivs {
  double rho = 0.0;
  double dphi = 0.0;
  double dphi2 = 0.0;
  double r_dr = 0.0;
};

TestDerivs test_derivs(const PolarTestFunction& rho, double r, double phi) {
  TestDerivs d;
  for (const auto& term : rho) {
    const double radial = term.coeff * std::pow(r, term.power);
    const double m = static_cast<double>(term.mode);
    const double c = std::cos(term.mode * phi);
    const double s = std::sin(term.mode * phi);
    const double angular = term.sine ? s : c;
    const double angular_prime = term.sine ? m * c : -m * s;
    d.rho += radial * angular;
    d.dphi += radial * angular_prime;
    d.dphi2 += radial * (-m * m) * angular;
    d.r_dr += term.power * radial * angular;
  }
  return d;
}

double eta_hat_point(const GeneratorSpec& spec, const PolarTestFunction& rho,
                     double r, double phi, const TestDerivs& d) {
  double value = -0.5 * spec.kappa * d.dphi2;
  for (const auto& atom : spec.atoms) {
    const double up = eval_test_function(rho, r, phi + atom.size);
    const double down = eval_test_function(rho, r, phi - atom.size);
    value += 0.5 * atom.rate * (2.0 * d.rho - up - down);
  }
  return value;
}

}  // namespace

std::vector<double> eta_hat(const GeneratorSpec& spec, const PolarTestFunction& rho,
                            const PolarGrid& grid) {
  validate_generator(spec);
  check_test_function(rho);
  check_polar_grid(grid);
  std::vector<double> field;
  field.reserve(grid.radii.size() * grid.angles.size());
  for (double r : grid.radii) {
    for (double phi : grid.angles) {
      field.push_back(eta_hat_point(spec, rho, r, phi, test_derivs(rho, r, phi)));
    }
  }
  return field;
}

std::vector<double> apply_generator(const GeneratorSpec& spec, const PolarTestFunction& rho,
                                    const PolarGrid& grid) {
  validate_generator(spec);
  check_test_function(rho);
  check_polar_grid(grid);
  std::vector<double> field;
  field.reserve(grid.radii.size() * grid.angles.size());
  for (double r : grid.radii) {
    for (double phi : grid.angles) {
      const cplx w = std::polar(r, phi);
      if (std::abs(w - 1.0) <= 1e-9) {
        throw std::invalid_argument(
            "generator cannot be evaluated at w = 1 (boundary singularity)");
      }
      const TestDerivs d = test_derivs(rho, r, phi);
      const cplx ratio = (w + 1.0) / (w - 1.0);
      const double drift = ratio.real() * d.r_dr + ratio.imag() * d.dphi;
      const cplx inv_sq = 1.0 / ((w - 1.0) * (w - 1.0));
      const double potential = spec.q * (1.0 - 2.0 * inv_sq.real()) * d.rho;
      field.push_back(-eta_hat_point(spec, rho, r, phi, d) + drift + potential);
    }
  }
  return field;
}

ValueAndDeriv eval_inverted(const CompositeMap& F, cplx w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw std::invalid_argument("inverted evaluation point must be finite");
  }
  const double mod = std::abs(w);
  if (!(mod > 0.0 && mod < 1.0)) {
    throw std::invalid_argument("inverted evaluation needs 0 < |w| < 1");
  }
  const ValueAndDeriv outer = eval_with_derivative(F, 1.0 / w);
  if (outer.value == cplx(0.0, 0.0)) {
    throw std::runtime_error("inverted map is singular: F(1/w) = 0");
  }
  ValueAndDeriv out;
  out.value = 1.0 / outer.value;
  out.deriv = outer.deriv / (w * w * outer.value * outer.value);
  return out;
}

void save_spectrum_csv(const SpectrumCurve& curve, const std::string& file) {
  validate_curve(curve);
  CsvTable table;
  table.header = {"q", "value", "stderr", "kind", "scale_min", "scale_max"};
  const double kind_code = static_cast<double>(static_cast<int>(curve.kind));
  table.rows.reserve(curve.abscissa.size());
  for (std::size_t i = 0; i < curve.abscissa.size(); ++i) {
    const double se = curve.stderrs.empty() ? 0.0 : curve.stderrs[i];
    table.rows.push_back({curve.abscissa[i], curve.values[i], se, kind_code,
                          curve.scale_min, curve.scale_max});
  }
  write_csv(file, table);
}

SpectrumCurve load_spectrum_csv(const std::string& file) {
  const CsvTable table = read_csv(file);
  const std::vector<std::string> expected = {"q",    "value",     "stderr",
                                             "kind", "scale_min", "scale_max"};
  if (table.header != expected) {
    throw std::runtime_error(
        "spectrum csv must have columns q, value, stderr, kind, scale_min, scale_max: " +
        file);
  }
  if (table.rows.empty()) {
    throw std::runtime_error("spectrum csv has no rows: " + file);
  }
  SpectrumCurve curve;
  const double kind_code = table.rows.front()[3];
  if (kind_code != 0.0 && kind_code != 1.0 && kind_code != 2.0) {
    throw std::runtime_error("spectrum csv kind code must be 0, 1, or 2: " + file);
  }
  curve.kind = static_cast<SpectrumKind>(static_cast<int>(kind_code));
  curve.scale_min = table.rows.front()[4];
  curve.scale_max = table.rows.front()[5];
  for (const auto& row : table.rows) {
    if (row[3] != kind_code) {
      throw std::runtime_error("spectrum csv mixes kinds: " + file);
    }
    curve.abscissa.push_back(row[0]);
    curve.values.push_back(row[1]);
    curve.stderrs.push_back(row[2]);
  }
  validate_curve(curve);
  return curve;
}

}  // namespace loewner
