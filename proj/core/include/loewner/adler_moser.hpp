#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "loewner/tau_functions.hpp"

namespace loewner {

using Rational = boost::multiprecision::cpp_rational;

/// Dense polynomial in x over the exact rationals, constant term first.
struct RationalPoly {
  std::vector<Rational> coeffs;

  /// Degree of the polynomial, or -1 for the zero polynomial. Trailing zero
  /// coefficients are ignored.
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  Rational at(const Rational& x) const;
  double at(double x) const;

  RationalPoly derivative() const;

  /// Human-readable form like "x^6 + 5/2*x^3 - 5", highest power first.
  std::string to_string() const;
};

RationalPoly poly_add(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_sub(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b);

/// The symmetric bilinear form whose vanishing chains consecutive
/// polynomials: B(p, q) = p'' q - 2 p' q' + p q''.
RationalPoly bilinear_form(const RationalPoly& p, const RationalPoly& q);

struct AdlerMoserPoly {
  std::size_t level = 0;          // l
  std::vector<Rational> params;   // t_3, t_5, ..., t_{2l-1}
  RationalPoly poly;              // degree l(l+1)/2, monic
};

/// Builds the level-l polynomial of the chain p_0 = 1, p_1 = x,
/// B(p_{k+1}, p_k) = 0 by exact linear algebra: each step solves for the
/// coefficients of p_{k+1} with the top monomial normalized monic; the
/// solution space is one-dimensional and the free direction is attached to
/// the lowest admissible monomial, whose coefficient is named t_{2k+1}.
/// (Other sources scale these parameters differently; only p_0, p_1 and the
/// recurrence are canonical.) Requires l <= 12 and params.size() == max(l-1, 0).
/// The construction verifies the recurrence residual is the exact zero
/// polynomial at every level and throws std::runtime_error otherwise.
AdlerMoserPoly adler_moser(std::size_t l, const std::vector<Rational>& params);

/// V = -2 d^2/dx^2 log p = -2 (p'' p - p'^2) / p^2 at a real point. Throws
/// std::invalid_argument when x is so close to a zero of p that the value
/// would be dominated by cancellation.
double rational_kdv_field(const RationalPoly& p, double x);

/// Finite-difference residual of V_t + V_xxx - 6 V V_x = 0 for the rational
/// solution V = -2 d^2/dx^2 log p_l, by the same stencil as kdv_residual.
/// Under this chain's normalization the stored parameter t_3 advances twelve
/// times faster than the flow time of that normal form, so the time
/// derivative steps t_3 by 12 * grid.dt3. Levels l <= 1 have no t_3 and a
/// time-independent field. The window must avoid real zeros of p_l.
double rational_kdv_residual(std::size_t l, const std::vector<Rational>& params,
                             const KdvGridSpec& grid = {});

}  // namespace loewner
