#include "loewner/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace loewner {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDiskTolerance = 1e-12;      // admissible undershoot of |w| below 1
constexpr double kBaseAngleTolerance = 1e-12; // rejection window around the slit base
constexpr double kCircleBand = 1e-9;          // |w|^2 band counted as "on the circle"
constexpr double kSingularTolerance = 1e-12;  // loewner_rhs pole guard

bool is_finite(cplx w) {
  return std::isfinite(w.real()) && std::isfinite(w.imag());
}

void check_point(cplx w) {
  if (!is_finite(w)) {
    throw std::invalid_argument("map evaluation requires finite coordinates");
  }
  constexpr double inner = (1.0 - kDiskTolerance) * (1.0 - kDiskTolerance);
  if (std::norm(w) < inner) {
    throw std::invalid_argument("map evaluation requires |w| >= 1");
  }
}

// Angular distance between two angles, folded into [0, pi].
double angular_distance(double a, double b) {
  return std::fabs(std::remainder(a - b, kTwoPi));
}

// The slit base pulls back to the two circle points at angle +- base_offset
// around the attachment angle; the map degenerates there (the square-root
// factor vanishes and the derivative diverges), so points on the circle
// within angular distance 1e-12 of either preimage are rejected.
void check_base_proximity(const ElementarySlitMap& map, cplx w) {
  if (std::fabs(std::norm(w) - 1.0) < 2.0 * kCircleBand) {
    const double rel = angular_distance(std::arg(w), map.angle);
    if (std::fabs(rel - map.base_offset) < kBaseAngleTolerance) {
      throw std::runtime_error(
          "evaluation point coincides with the slit base on the unit circle");
    }
  }
}

// Slit map in the frame where the spike attaches at angle 0:
//
//   h(w, t) = e^t (w + 1)(w + 1 + S) / (2 w) - 1,
//   S(w, t) = w * sqrt(1 + (2 - 4 e^{-t}) / w + 1 / w^2)   (principal branch).
//
// Whenever the square-root argument would equal -s <= 0, its roots as a
// quadratic in u = 1/w are a conjugate pair of modulus sqrt(1 + s) >= 1, so
// the argument never crosses the branch cut for |w| > 1 and the principal
// branch is globally continuous there, with S ~ w and hence h ~ e^t w at
// infinity. The only degeneracies are the two points of the unit circle with
// S = 0, the preimages of the slit base.
struct HParts {
  cplx value;
  cplx n;  // (w + 1)(w + 1 + S)
  cplx s;  // the square-root factor S
};

HParts slit_h_parts(cplx w, const ElementarySlitMap& map) {
  const cplx u = 1.0 / w;
  const cplx s = w * std::sqrt(1.0 + (2.0 - 4.0 * map.exp_neg_cap) * u + u * u);
  const cplx wp1 = w + 1.0;
  const cplx n = wp1 * (wp1 + s);
  const cplx value = map.exp_cap * n * (0.5 * u) - 1.0;
  return {value, n, s};
}

// h'(w) = e^t (N' w - N) / (2 w^2) with N = (w + 1)(w + 1 + S) and
// S' = (w + 1 - 2 e^{-t}) / S.
cplx slit_h_derivative(cplx w, const ElementarySlitMap& map, const HParts& p) {
  const cplx sp = (w + 1.0 - 2.0 * map.exp_neg_cap) / p.s;
  const cplx np = (w + 1.0 + p.s) + (w + 1.0) * (1.0 + sp);
  return map.exp_cap * (np * w - p.n) / (2.0 * w * w);
}

// Rotates into the slit frame, evaluates, rotates back. Assumes the caller
// already validated w; intermediate points of a composition may sit on the
// circle itself, which is fine away from the slit base.
cplx elementary_value(const ElementarySlitMap& map, cplx w) {
  if (map.capacity == 0.0) return w;
  check_base_proximity(map, w);
  const cplx z = w * std::conj(map.rotation);
  const cplx result = map.rotation * slit_h_parts(z, map).value;
  if (!is_finite(result)) {
    throw std::runtime_error("slit map produced a non-finite value");
  }
  return result;
}

ValueAndDeriv elementary_value_and_derivative(const ElementarySlitMap& map, cplx w) {
  if (map.capacity == 0.0) return {w, cplx(1.0, 0.0)};
  const cplx z = w * std::conj(map.rotation);
  const HParts p = slit_h_parts(z, map);
  // d/dw [rot * h(w / rot)] = h'(w / rot); the frame factors cancel.
  const ValueAndDeriv result{map.rotation * p.value, slit_h_derivative(z, map, p)};
  if (!is_finite(result.value) || !is_finite(result.deriv)) {
    throw std::runtime_error("slit map produced a non-finite value or derivative");
  }
  return result;
}

[[noreturn]] void rethrow_with_slit_index(const std::exception& e, std::size_t index,
                                          bool invalid) {
  const std::string message = std::string(e.what()) + " (slit " + std::to_string(index) + ")";
  if (invalid) throw std::invalid_argument(message);
  throw std::runtime_error(message);
}

}  // namespace

double normalize_angle(double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("angle must be finite");
  }
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;  // fmod rounding can land exactly on 2*pi
  return a;
}

ElementarySlitMap::ElementarySlitMap(double angle_radians, double capacity_increment)
    : angle(normalize_angle(angle_radians)),
      capacity(capacity_increment),
      rotation(std::polar(1.0, angle)),
      exp_cap(std::exp(capacity_increment)),
      exp_neg_cap(std::exp(-capacity_increment)),
      base_offset(std::acos(std::clamp(2.0 * exp_neg_cap - 1.0, -1.0, 1.0))) {
  if (!std::isfinite(capacity_increment) || capacity_increment < 0.0) {
    throw std::invalid_argument("slit capacity must be finite and non-negative");
  }
}

double CompositeMap::total_capacity() const {
  double total = 0.0;
  for (const auto& slit : slits) total += slit.capacity;
  return total;
}

cplx eval_elementary(const ElementarySlitMap& map, cplx w) {
  check_point(w);
  return elementary_value(map, w);
}

cplx eval_elementary_derivative(const ElementarySlitMap& map, cplx w) {
  return eval_elementary_with_derivative(map, w).deriv;
}

ValueAndDeriv eval_elementary_with_derivative(const ElementarySlitMap& map, cplx w) {
  check_point(w);
  if (std::norm(w) <= 1.0) {
    throw std::invalid_argument("derivative evaluation requires |w| > 1 strictly");
  }
  return elementary_value_and_derivative(map, w);
}

cplx eval_composite(const CompositeMap& F, cplx w) {
  check_point(w);
  cplx z = w;
  for (std::size_t i = F.slits.size(); i-- > 0;) {
    try {
      z = elementary_value(F.slits[i], z);
    } catch (const std::invalid_argument& e) {
      rethrow_with_slit_index(e, i + 1, true);
    } catch (const std::runtime_error& e) {
      rethrow_with_slit_index(e, i + 1, false);
    }
  }
  if (F.log_scale == 0.0) return z;
  return std::exp(F.log_scale) * z;
}

cplx eval_derivative(const CompositeMap& F, cplx w) {
  return eval_with_derivative(F, w).deriv;
}

ValueAndDeriv eval_with_derivative(const CompositeMap& F, cplx w) {
  check_point(w);
  if (std::norm(w) <= 1.0) {
    throw std::invalid_argument("derivative evaluation requires |w| > 1 strictly");
  }
  cplx z = w;
  cplx d(1.0, 0.0);
  for (std::size_t i = F.slits.size(); i-- > 0;) {
    try {
      const ValueAndDeriv vd = elementary_value_and_derivative(F.slits[i], z);
      d *= vd.deriv;
      z = vd.value;
    } catch (const std::runtime_error& e) {
      rethrow_with_slit_index(e, i + 1, false);
    }
  }
  const double scale = (F.log_scale == 0.0) ? 1.0 : std::exp(F.log_scale);
  return {scale * z, scale * d};
}

cplx loewner_rhs(cplx w, double driver_value) {
  if (!is_finite(w) || !std::isfinite(driver_value)) {
    throw std::invalid_argument("loewner_rhs requires finite arguments");
  }
  const cplx atom = std::polar(1.0, driver_value);
  const cplx denom = w - atom;
  if (std::abs(denom) < kSingularTolerance) {
    throw std::runtime_error("loewner_rhs evaluated at the driving singularity");
  }
  return w * (w + atom) / denom;
}

CompositeMap whole_plane_rescale(CompositeMap F, double T) {
  if (!std::isfinite(T) || T < 0.0) {
    throw std::invalid_argument("whole-plane rescale requires T >= 0");
  }
  F.log_scale = -T;
  return F;
}

cplx fitted_leading_coefficient(const CompositeMap& F, double radius, int num_angles) {
  if (!(radius > 1.0)) {
    throw std::invalid_argument("leading-coefficient fit requires radius > 1");
  }
  if (num_angles < 1) {
    throw std::invalid_argument("leading-coefficient fit requires at least one angle");
  }
  cplx sum(0.0, 0.0);
  for (int k = 0; k < num_angles; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(num_angles);
    const cplx w = std::polar(radius, theta);
    sum += eval_composite(F, w) / w;
  }
  return sum / static_cast<double>(num_angles);
}

}  // namespace loewner
