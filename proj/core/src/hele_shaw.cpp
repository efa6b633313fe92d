#include "loewner/hele_shaw.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "loewner/csv.hpp"

namespace loewner {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_exterior(const LaurentMap& f, const char* what) {
  if (f.orientation != MapOrientation::exterior) {
    throw std::invalid_argument(std::string(what) + " requires an exterior map");
  }
}

std::size_t default_grid(const LaurentMap& f) {
  return 8 * static_cast<std::size_t>(f.coeffs.size());
}

double circle_min_derivative(const LaurentMap& f, std::size_t samples) {
  double min_mag = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples; ++j) {
    const cplx w = std::polar(1.0, kTwoPi * static_cast<double>(j) / samples);
    min_mag = std::min(min_mag, std::abs(eval_laurent_derivative(f, w)));
  }
  return min_mag;
}

}  // namespace

void validate_laurent_map(const LaurentMap& f, std::size_t boundary_samples) {
  if (!std::isfinite(f.r) || f.r <= 0.0) {
    throw std::invalid_argument("conformal radius must be finite and positive");
  }
  if (f.coeffs.empty()) {
    throw std::invalid_argument("coefficient list must contain at least u_0");
  }
  for (const cplx& u : f.coeffs) {
    if (!finite(u)) {
      throw std::invalid_argument("map coefficients must be finite");
    }
  }
  if (f.orientation == MapOrientation::interior && f.coeffs.size() > 1 &&
      f.coeffs[1] != cplx(0.0, 0.0)) {
    throw std::invalid_argument("interior maps absorb the linear coefficient into r");
  }
  if (boundary_samples >= 8 &&
      polyline_self_intersects(boundary_points(f, boundary_samples))) {
    throw std::runtime_error("boundary curve self-intersects");
  }
}

cplx eval_laurent(const LaurentMap& f, cplx w) {
  const cplx base = (f.orientation == MapOrientation::exterior) ? 1.0 / w : w;
  // Horner in the decaying (or growing) variable.
  cplx acc(0.0, 0.0);
  for (std::size_t i = f.coeffs.size(); i-- > 0;) {
    acc = acc * base + f.coeffs[i];
  }
  return f.r * w + acc;
}

cplx eval_laurent_derivative(const LaurentMap& f, cplx w) {
  cplx acc(0.0, 0.0);
  if (f.orientation == MapOrientation::exterior) {
    // d/dw u_k w^{-k} = -k u_k w^{-k-1}
    const cplx u = 1.0 / w;
    for (std::size_t i = f.coeffs.size(); i-- > 1;) {
      const double k = static_cast<double>(i);
      acc = (acc - k * f.coeffs[i]) * u;
    }
    acc *= u;
  } else {
    for (std::size_t i = f.coeffs.size(); i-- > 1;) {
      const double k = static_cast<double>(i);
      acc = acc * w + k * f.coeffs[i];
    }
  }
  return f.r + acc;
}

std::vector<cplx> boundary_points(const LaurentMap& f, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("boundary sampling needs at least one point");
  }
  std::vector<cplx> points;
  points.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    points.push_back(eval_laurent(f, std::polar(1.0, kTwoPi * static_cast<double>(j) / n)));
  }
  return points;
}

double laurent_area(const LaurentMap& f) {
  double sum = 0.0;
  for (std::size_t k = 1; k < f.coeffs.size(); ++k) {
    sum += static_cast<double>(k) * std::norm(f.coeffs[k]);
  }
  const double pi = kTwoPi / 2.0;
  return (f.orientation == MapOrientation::exterior) ? pi * (f.r * f.r - sum)
                                                     : pi * (f.r * f.r + sum);
}

cplx LaurentSeries::eval(cplx w) const {
  // Horner on the polynomial part, then shift by w^{min_power}.
  cplx poly(0.0, 0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    poly = poly * w + coeffs[i];
  }
  cplx prefactor(1.0, 0.0);
  const cplx base = (min_power >= 0) ? w : 1.0 / w;
  for (int p = 0; p < std::abs(min_power); ++p) prefactor *= base;
  return prefactor * poly;
}

LaurentSeries LaurentSeries::scaled_derivative() const {
  LaurentSeries out;
  out.min_power = min_power;
  out.coeffs.resize(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out.coeffs[i] = static_cast<double>(min_power + static_cast<int>(i)) * coeffs[i];
  }
  return out;
}

LaurentSeries map_series(const LaurentMap& f) {
  LaurentSeries s;
  if (f.orientation == MapOrientation::exterior) {
    const int K = f.truncation();
    s.min_power = -K;
    s.coeffs.resize(static_cast<std::size_t>(K) + 2, cplx(0.0, 0.0));
    for (int k = 0; k <= K; ++k) {
      s.coeffs[static_cast<std::size_t>(K - k)] = f.coeffs[static_cast<std::size_t>(k)];
    }
    s.coeffs.back() = cplx(f.r, 0.0);  // the w^{+1} term
  } else {
    const int K = f.truncation();
    s.min_power = 0;
    s.coeffs.resize(static_cast<std::size_t>(K) + 1, cplx(0.0, 0.0));
    for (int k = 0; k <= K; ++k) {
      s.coeffs[static_cast<std::size_t>(k)] = f.coeffs[static_cast<std::size_t>(k)];
    }
    if (s.coeffs.size() < 2) s.coeffs.resize(2, cplx(0.0, 0.0));
    s.coeffs[1] += f.r;
  }
  return s;
}

LaurentSeries velocity_series(const LaurentMap& f, const MapVelocity& v) {
  if (v.coeff_dots.size() != f.coeffs.size()) {
    throw std::invalid_argument("velocity truncation must match the map");
  }
  // The time derivative carries the same power layout as the map itself.
  LaurentMap vel;
  vel.r = v.r_dot;
  vel.orientation = f.orientation;
  vel.coeffs = v.coeff_dots;
  return map_series(vel);
}

LaurentSeries reflected_series(const LaurentSeries& s) {
  LaurentSeries out;
  const int max_power = s.min_power + static_cast<int>(s.coeffs.size()) - 1;
  out.min_power = -max_power;
  out.coeffs.resize(s.coeffs.size());
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    out.coeffs[s.coeffs.size() - 1 - i] = std::conj(s.coeffs[i]);
  }
  return out;
}

std::vector<cplx> poisson_bracket(const LaurentSeries& f, const LaurentSeries& f_dot,
                                  const LaurentSeries& g, const LaurentSeries& g_dot,
                                  std::size_t theta_grid) {
  if (theta_grid < 4) {
    throw std::invalid_argument("bracket grid too coarse");
  }
  const LaurentSeries wf = f.scaled_derivative();
  const LaurentSeries wg = g.scaled_derivative();
  std::vector<cplx> samples;
  samples.reserve(theta_grid);
  for (std::size_t j = 0; j < theta_grid; ++j) {
    const cplx w = std::polar(1.0, kTwoPi * static_cast<double>(j) / theta_grid);
    samples.push_back(wf.eval(w) * g_dot.eval(w) - wg.eval(w) * f_dot.eval(w));
  }
  return samples;
}

std::vector<cplx> poisson_bracket(const LaurentMap& f, const MapVelocity& f_dot,
                                  const LaurentMap& g, const MapVelocity& g_dot,
                                  std::size_t theta_grid) {
  const std::size_t min_grid =
      4 * std::max(f.coeffs.size(), g.coeffs.size());
  if (theta_grid < min_grid) {
    throw std::invalid_argument("bracket grid must have at least 4(K+1) points");
  }
  return poisson_bracket(map_series(f), velocity_series(f, f_dot), map_series(g),
                         velocity_series(g, g_dot), theta_grid);
}

namespace {

double bracket_sup_error(const LaurentMap& f, const MapVelocity& f_dot, double target,
                         std::size_t theta_grid) {
  const LaurentSeries fs = map_series(f);
  const LaurentSeries vs = velocity_series(f, f_dot);
  const auto samples =
      poisson_bracket(fs, vs, reflected_series(fs), reflected_series(vs), theta_grid);
  double worst = 0.0;
  for (const cplx& s : samples) {
    worst = std::max(worst, std::abs(s - cplx(target, 0.0)));
  }
  return worst;
}

}  // namespace

double pk_residual(const LaurentMap& f, const MapVelocity& f_dot,
                   std::size_t theta_grid) {
  check_exterior(f, "interface residual");
  if (theta_grid == 0) theta_grid = default_grid(f);
  if (theta_grid < 4 * f.coeffs.size()) {
    throw std::invalid_argument("residual grid must have at least 4(K+1) points");
  }
  return bracket_sup_error(f, f_dot, 1.0, theta_grid);
}

MapVelocity solve_string_velocity(const LaurentMap& f, double target) {
  check_exterior(f, "velocity solve");
  const std::size_t n_coeffs = f.coeffs.size();
  const std::size_t unknowns = 2 * n_coeffs + 1;
  const std::size_t m = default_grid(f);

  // W(theta) = w f_w on the circle; the interface equation is linear in the
  // velocity V through 2 Re[W conj(V)] = target.
  const LaurentSeries wf = map_series(f).scaled_derivative();
  Eigen::MatrixXd A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(unknowns));
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    const cplx w = std::polar(1.0, theta);
    const cplx W = wf.eval(w);
    const auto row = static_cast<Eigen::Index>(j);
    // r_dot enters V as r_dot * w.
    A(row, 0) = 2.0 * (W * std::conj(w)).real();
    cplx wk(1.0, 0.0);  // w^{+k}, the conjugate of the w^{-k} mode
    for (std::size_t k = 0; k < n_coeffs; ++k) {
      const cplx base = W * wk;
      A(row, static_cast<Eigen::Index>(2 * k + 1)) = 2.0 * base.real();
      A(row, static_cast<Eigen::Index>(2 * k + 2)) = 2.0 * base.imag();
      wk *= w;
    }
    b(row) = target;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(unknowns)) {
    throw std::runtime_error("singular projection matrix: map degenerates at the edge "
                             "of the polynomial class");
  }
  const Eigen::VectorXd x = qr.solve(b);

  MapVelocity v;
  v.r_dot = x(0);
  v.coeff_dots.resize(n_coeffs);
  for (std::size_t k = 0; k < n_coeffs; ++k) {
    v.coeff_dots[k] = cplx(x(static_cast<Eigen::Index>(2 * k + 1)),
                           x(static_cast<Eigen::Index>(2 * k + 2)));
  }
  return v;
}

namespace {

LaurentMap advance(const LaurentMap& f, const MapVelocity& v, double dt) {
  LaurentMap out = f;
  out.r += dt * v.r_dot;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) {
    out.coeffs[k] += dt * v.coeff_dots[k];
  }
  return out;
}

MapVelocity average(const MapVelocity& a, const MapVelocity& b) {
  MapVelocity out;
  out.r_dot = 0.5 * (a.r_dot + b.r_dot);
  out.coeff_dots.resize(a.coeff_dots.size());
  for (std::size_t k = 0; k < a.coeff_dots.size(); ++k) {
    out.coeff_dots[k] = 0.5 * (a.coeff_dots[k] + b.coeff_dots[k]);
  }
  return out;
}

}  // namespace

StringTrajectory evolve_string(const LaurentMap& f0, double dt, std::size_t steps,
                               const StringEvolutionOptions& options) {
  check_exterior(f0, "interface evolution");
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument("dt must be finite and positive");
  }
  validate_laurent_map(f0, options.univalence_samples);

  const double target = options.unsafe_contraction ? -1.0 : 1.0;
  StringTrajectory traj;
  traj.times.push_back(0.0);
  traj.maps.push_back(f0);

  double step_dt = dt;
  for (std::size_t step = 0; step < steps; ++step) {
    const LaurentMap& f = traj.maps.back();

    const double min_deriv = circle_min_derivative(f, 2048);
    if (min_deriv < options.cusp_threshold * f.r) {
      traj.halted = true;
      traj.halt_reason = "cusp proximity: min |f'| = " + format_double(min_deriv) +
                         " under threshold " +
                         format_double(options.cusp_threshold * f.r);
      break;
    }

    bool accepted = false;
    while (!accepted) {
      MapVelocity v1, v2;
      LaurentMap next;
      double residual = 0.0;
      bool failed = false;
      try {
        v1 = solve_string_velocity(f, target);
        const double res1 = bracket_sup_error(f, v1, target, default_grid(f));
        const LaurentMap predictor = advance(f, v1, step_dt);
        if (predictor.r <= 0.0) throw std::runtime_error("radius collapsed");
        v2 = solve_string_velocity(predictor, target);
        const double res2 =
            bracket_sup_error(predictor, v2, target, default_grid(predictor));
        next = advance(f, average(v1, v2), step_dt);
        residual = std::max(res1, res2);
      } catch (const std::exception& e) {
        traj.halted = true;
        traj.halt_reason = e.what();
        failed = true;
      }
      if (failed) break;

      if (residual > options.residual_tol) {
        if (traj.halvings >= options.max_halvings) {
          traj.halted = true;
          traj.halt_reason = "residual " + format_double(residual) +
                             " above tolerance after max dt halvings";
          break;
        }
        ++traj.halvings;
        step_dt *= 0.5;
        continue;
      }
      if (polyline_self_intersects(boundary_points(next, options.univalence_samples))) {
        traj.halted = true;
        traj.halt_reason = "boundary self-intersection";
        break;
      }
      traj.max_residual = std::max(traj.max_residual, residual);
      traj.times.push_back(traj.times.back() + step_dt);
      traj.maps.push_back(std::move(next));
      accepted = true;
    }
    if (traj.halted) break;
  }
  return traj;
}

MomentVector harmonic_moments(const LaurentMap& f, std::size_t M,
                              std::size_t quad_points) {
  check_exterior(f, "harmonic moments");
  if (M < 1) {
    throw std::invalid_argument("need at least one moment order");
  }
  if (quad_points == 0) {
    quad_points = std::max<std::size_t>(512, 16 * f.coeffs.size());
  }
  if (quad_points < 64) {
    throw std::invalid_argument("moment quadrature needs at least 64 points");
  }

  const auto compute = [&](std::size_t n) {
    std::vector<cplx> I(M, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
      const cplx w = std::polar(1.0, kTwoPi * static_cast<double>(j) / n);
      const cplx fv = eval_laurent(f, w);
      if (std::abs(fv) < 1e-9) {
        throw std::runtime_error("boundary passes through the origin; moments of "
                                 "z^{-k} are undefined");
      }
      const cplx weight = std::conj(fv) * (w * eval_laurent_derivative(f, w));
      const cplx inv = 1.0 / fv;
      cplx p = inv;
      for (std::size_t k = 0; k < M; ++k) {
        I[k] += weight * p;
        p *= inv;
      }
    }
    const double factor = -0.5 * kTwoPi / static_cast<double>(n);
    for (auto& value : I) value *= factor;
    return I;
  };

  const auto coarse = compute(quad_points);
  const auto fine = compute(2 * quad_points);
  for (std::size_t k = 0; k < M; ++k) {
    if (std::abs(fine[k] - coarse[k]) > 1e-8) {
      throw std::runtime_error("moment quadrature did not converge at order " +
                               std::to_string(k + 1));
    }
  }

  MomentVector out;
  out.area = laurent_area(f);
  out.t_area = out.area / kTwoPi;
  out.moments = fine;
  return out;
}

std::vector<double> richardson_invariance(const StringTrajectory& trajectory,
                                          std::size_t M) {
  if (trajectory.maps.empty()) {
    throw std::invalid_argument("empty trajectory");
  }
  const auto initial = harmonic_moments(trajectory.maps.front(), M);
  std::vector<double> drift(M, 0.0);
  for (std::size_t s = 1; s < trajectory.maps.size(); ++s) {
    const auto current = harmonic_moments(trajectory.maps[s], M);
    for (std::size_t k = 0; k < M; ++k) {
      const double rel = std::abs(current.moments[k] - initial.moments[k]) /
                         (std::abs(initial.moments[k]) + 1e-12);
      drift[k] = std::max(drift[k], rel);
    }
  }
  return drift;
}

cplx polygon_moment(const std::vector<cplx>& polygon, int k) {
  if (k < 0) {
    throw std::invalid_argument("polygon moment defined for k >= 0");
  }
  if (polygon.size() < 3) {
    throw std::invalid_argument("polygon needs at least three vertices");
  }
  // integral over P of z^k dA = (1/2i) contour integral of conj(z) z^k dz,
  // evaluated exactly edge by edge: with z = a + s(b - a),
  // conj(z) = C + D z where D = conj(b - a)/(b - a) and C = conj(a) - a D.
  cplx total(0.0, 0.0);
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = polygon[i];
    const cplx b = polygon[(i + 1) % n];
    const cplx delta = b - a;
    if (delta == cplx(0.0, 0.0)) continue;
    const cplx D = std::conj(delta) / delta;
    const cplx C = std::conj(a) - a * D;
    // powers b^{k+1} - a^{k+1} and b^{k+2} - a^{k+2}
    cplx ak1 = a, bk1 = b;
    for (int p = 0; p < k; ++p) {
      ak1 *= a;
      bk1 *= b;
    }
    const cplx ak2 = ak1 * a, bk2 = bk1 * b;
    total += C * (bk1 - ak1) / static_cast<double>(k + 1) +
             D * (bk2 - ak2) / static_cast<double>(k + 2);
  }
  return total / cplx(0.0, 2.0);
}

double integrate_harmonic(const LaurentMap& f, const HarmonicTestFunction& phi,
                          std::size_t base_points) {
  if (phi.k < 0) {
    throw std::invalid_argument("test functions are Re/Im z^k with k >= 0");
  }
  if (base_points < 16) {
    throw std::invalid_argument("need at least 16 boundary points");
  }
  const cplx coarse = polygon_moment(boundary_points(f, base_points), phi.k);
  const cplx fine = polygon_moment(boundary_points(f, 2 * base_points), phi.k);
  // Polygonization error scales as n^{-2}; one Richardson level removes it.
  const cplx extrapolated = (4.0 * fine - coarse) / 3.0;
  return phi.imaginary_part ? extrapolated.imag() : extrapolated.real();
}

double quadrature_check(const LaurentMap& f, const HarmonicTestFunction& phi,
                        const std::vector<cplx>& multipole, cplx z1) {
  const double integral = integrate_harmonic(f, phi);
  // Q[phi](z1) = Re-or-Im sum_m multipole[m] d^m/dz^m z^k at z1.
  cplx action(0.0, 0.0);
  for (std::size_t m = 0; m < multipole.size(); ++m) {
    if (static_cast<int>(m) > phi.k) break;
    double falling = 1.0;
    for (int j = 0; j < static_cast<int>(m); ++j) {
      falling *= static_cast<double>(phi.k - j);
    }
    cplx power(1.0, 0.0);
    for (int j = 0; j < phi.k - static_cast<int>(m); ++j) power *= z1;
    action += multipole[m] * falling * power;
  }
  const double predicted = phi.imaginary_part ? action.imag() : action.real();
  return std::abs(integral - predicted);
}

int winding_number(const std::vector<cplx>& curve, cplx z) {
  if (curve.size() < 3) {
    throw std::invalid_argument("winding number needs a closed curve");
  }
  double total = 0.0;
  double prev = std::arg(curve.back() - z);
  for (const cplx& p : curve) {
    const double cur = std::arg(p - z);
    total += std::remainder(cur - prev, kTwoPi);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

namespace {

struct CellKey {
  long long x, y;
  bool operator==(const CellKey& other) const { return x == other.x && y == other.y; }
};

struct CellHash {
  std::size_t operator()(const CellKey& key) const {
    const std::uint64_t a = static_cast<std::uint64_t>(key.x) * 0x9e3779b97f4a7c15ULL;
    const std::uint64_t b = static_cast<std::uint64_t>(key.y) * 0xc2b2ae3d27d4eb4fULL;
    return static_cast<std::size_t>(a ^ (b + 0x165667b19e3779f9ULL + (a << 6)));
  }
};

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  const auto on_segment = [](cplx a, cplx b, cplx p) {
    return std::min(a.real(), b.real()) <= p.real() &&
           p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() &&
           p.imag() <= std::max(a.imag(), b.imag());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

bool polyline_self_intersects(const std::vector<cplx>& points) {
  const std::size_t n = points.size();
  if (n < 4) return false;

  double max_len = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_len = std::max(max_len, std::abs(points[(i + 1) % n] - points[i]));
  }
  if (max_len == 0.0) return false;
  const double cell = 2.0 * max_len;

  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  const auto cells_of = [&](std::size_t i, auto&& visit) {
    const cplx a = points[i];
    const cplx b = points[(i + 1) % n];
    const long long x0 = static_cast<long long>(std::floor(std::min(a.real(), b.real()) / cell));
    const long long x1 = static_cast<long long>(std::floor(std::max(a.real(), b.real()) / cell));
    const long long y0 = static_cast<long long>(std::floor(std::min(a.imag(), b.imag()) / cell));
    const long long y1 = static_cast<long long>(std::floor(std::max(a.imag(), b.imag()) / cell));
    for (long long x = x0; x <= x1; ++x) {
      for (long long y = y0; y <= y1; ++y) {
        visit(CellKey{x, y});
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    cells_of(i, [&](CellKey key) { grid[key].push_back(i); });
  }

  for (std::size_t i = 0; i < n; ++i) {
    bool hit = false;
    cells_of(i, [&](CellKey key) {
      if (hit) return;
      const auto it = grid.find(key);
      if (it == grid.end()) return;
      for (const std::size_t j : it->second) {
        if (j <= i) continue;
        // Skip adjacent segments, including the wrap-around pair.
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (segments_intersect(points[i], points[(i + 1) % n], points[j],
                               points[(j + 1) % n])) {
          hit = true;
          return;
        }
      }
    });
    if (hit) return true;
  }
  return false;
}

void save_trajectory_csv(const StringTrajectory& trajectory, const std::string& file) {
  if (trajectory.maps.empty()) {
    throw std::invalid_argument("empty trajectory");
  }
  CsvTable table;
  table.header = {"t", "r"};
  const std::size_t n_coeffs = trajectory.maps.front().coeffs.size();
  for (std::size_t k = 0; k < n_coeffs; ++k) {
    table.header.push_back("re_u" + std::to_string(k));
    table.header.push_back("im_u" + std::to_string(k));
  }
  for (std::size_t s = 0; s < trajectory.maps.size(); ++s) {
    std::vector<double> row = {trajectory.times[s], trajectory.maps[s].r};
    for (const cplx& u : trajectory.maps[s].coeffs) {
      row.push_back(u.real());
      row.push_back(u.imag());
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(file, table);
}

void save_moments_csv(const StringTrajectory& trajectory, std::size_t M,
                      const std::string& file) {
  CsvTable table;
  table.header = {"t", "k", "re_I", "im_I"};
  for (std::size_t s = 0; s < trajectory.maps.size(); ++s) {
    const auto moments = harmonic_moments(trajectory.maps[s], M);
    table.rows.push_back({trajectory.times[s], 0.0, moments.area, 0.0});
    for (std::size_t k = 0; k < M; ++k) {
      table.rows.push_back({trajectory.times[s], static_cast<double>(k + 1),
                            moments.moments[k].real(), moments.moments[k].imag()});
    }
  }
  write_csv(file, table);
}

}  // namespace loewner
