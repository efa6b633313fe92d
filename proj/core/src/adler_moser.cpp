#include "loewner/adler_moser.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace loewner {

int RationalPoly::degree() const {
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

Rational RationalPoly::at(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = acc * x + coeffs[i];
  }
  return acc;
}

double RationalPoly::at(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = acc * x + static_cast<double>(coeffs[i]);
  }
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  RationalPoly out;
  if (coeffs.size() <= 1) return out;
  out.coeffs.resize(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    out.coeffs[i - 1] = coeffs[i] * static_cast<int>(i);
  }
  return out;
}

std::string RationalPoly::to_string() const {
  const int deg = degree();
  if (deg < 0) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = deg; i >= 0; --i) {
    const Rational& c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out << "-";
      first = false;
    } else {
      out << (negative ? " - " : " + ");
    }
    const bool unit = (mag == 1) && i > 0;
    if (!unit) out << mag.str();
    if (i > 0) {
      if (!unit) out << "*";
      out << "x";
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

RationalPoly poly_add(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly out;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

RationalPoly poly_sub(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly out;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly out;
  if (a.coeffs.empty() || b.coeffs.empty()) return out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
      out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    }
  }
  return out;
}

RationalPoly bilinear_form(const RationalPoly& p, const RationalPoly& q) {
  const RationalPoly dp = p.derivative();
  const RationalPoly dq = q.derivative();
  RationalPoly twice_cross = poly_mul(dp, dq);
  for (Rational& c : twice_cross.coeffs) c *= 2;
  return poly_sub(poly_add(poly_mul(dp.derivative(), q), poly_mul(p, dq.derivative())),
                  twice_cross);
}

namespace {

/// Solves the exact linear system for the next polynomial in the chain.
/// Unknowns are the coefficients below the monic top monomial; the system
/// B(p_next, p) = 0 has a one-dimensional solution space whose free
/// coordinate (the lowest monomial without a pivot) receives `param`.
RationalPoly next_in_chain(const RationalPoly& p, std::size_t next_degree,
                           const Rational& param) {
  const std::size_t unknowns = next_degree;  // c_0 .. c_{D-1}, c_D = 1
  RationalPoly monic_top;
  monic_top.coeffs.assign(next_degree + 1, Rational(0));
  monic_top.coeffs[next_degree] = 1;

  // Residual rows: one per coefficient of B(., p), degree <= D + deg p - 2.
  const std::size_t rows =
      next_degree + static_cast<std::size_t>(p.degree() > 1 ? p.degree() - 2 : 0) + 1;

  // Column j holds the residual contribution of x^j; rhs is -B(x^D, p).
  std::vector<std::vector<Rational>> matrix(rows, std::vector<Rational>(unknowns, 0));
  std::vector<Rational> rhs(rows, 0);

  const auto fill_column = [&](const RationalPoly& basis, std::vector<Rational>* column,
                               bool negate) {
    const RationalPoly contribution = bilinear_form(basis, p);
    for (std::size_t r = 0; r < contribution.coeffs.size(); ++r) {
      if (r >= rows && contribution.coeffs[r] != 0) {
        throw std::runtime_error("residual degree exceeded its bound");
      }
      if (r < rows) {
        if (column) {
          (*column)[r] = contribution.coeffs[r];
        } else {
          rhs[r] += negate ? Rational(-contribution.coeffs[r])
                           : contribution.coeffs[r];
        }
      }
    }
  };

  std::vector<std::vector<Rational>> columns(unknowns,
                                             std::vector<Rational>(rows, 0));
  for (std::size_t j = 0; j < unknowns; ++j) {
    RationalPoly basis;
    basis.coeffs.assign(j + 1, Rational(0));
    basis.coeffs[j] = 1;
    fill_column(basis, &columns[j], false);
  }
  fill_column(monic_top, nullptr, true);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < unknowns; ++j) {
      matrix[r][j] = columns[j][r];
    }
  }

  // Exact Gaussian elimination to row echelon form, pivoting left to right.
  std::vector<int> pivot_of_column(unknowns, -1);
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < unknowns && pivot_row < rows; ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows && matrix[sel][col] == 0) ++sel;
    if (sel == rows) continue;  // free column
    std::swap(matrix[sel], matrix[pivot_row]);
    std::swap(rhs[sel], rhs[pivot_row]);
    const Rational inv = matrix[pivot_row][col];
    for (std::size_t j = col; j < unknowns; ++j) matrix[pivot_row][j] /= inv;
    rhs[pivot_row] /= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || matrix[r][col] == 0) continue;
      const Rational factor = matrix[r][col];
      for (std::size_t j = col; j < unknowns; ++j) {
        matrix[r][j] -= factor * matrix[pivot_row][j];
      }
      rhs[r] -= factor * rhs[pivot_row];
    }
    pivot_of_column[col] = static_cast<int>(pivot_row);
    ++pivot_row;
  }
  for (std::size_t r = pivot_row; r < rows; ++r) {
    if (rhs[r] != 0) {
      throw std::runtime_error("chain construction produced an inconsistent system");
    }
  }

  std::vector<std::size_t> free_columns;
  for (std::size_t col = 0; col < unknowns; ++col) {
    if (pivot_of_column[col] < 0) free_columns.push_back(col);
  }
  if (free_columns.size() != 1) {
    throw std::runtime_error("expected exactly one free parameter per level, got " +
                             std::to_string(free_columns.size()));
  }

  // Assign the parameter to the free monomial and read pivots off the
  // reduced system (each pivot row has a single pivot 1 plus the free column).
  const std::size_t free_col = free_columns.front();
  RationalPoly next;
  next.coeffs.assign(next_degree + 1, Rational(0));
  next.coeffs[next_degree] = 1;
  next.coeffs[free_col] = param;
  for (std::size_t col = 0; col < unknowns; ++col) {
    if (pivot_of_column[col] < 0) continue;
    const auto r = static_cast<std::size_t>(pivot_of_column[col]);
    next.coeffs[col] = rhs[r] - matrix[r][free_col] * param;
  }
  return next;
}

}  // namespace

AdlerMoserPoly adler_moser(std::size_t l, const std::vector<Rational>& params) {
  if (l > 12) {
    throw std::invalid_argument("chain construction limited to level 12");
  }
  const std::size_t expected = l >= 1 ? l - 1 : 0;
  if (params.size() != expected) {
    throw std::invalid_argument("level " + std::to_string(l) + " takes " +
                                std::to_string(expected) + " parameters");
  }

  AdlerMoserPoly out;
  out.level = l;
  out.params = params;
  out.poly.coeffs = {Rational(1)};     // p_0 = 1
  if (l == 0) return out;
  out.poly.coeffs = {Rational(0), 1};  // p_1 = x

  for (std::size_t k = 1; k < l; ++k) {
    const std::size_t next_degree = (k + 1) * (k + 2) / 2;
    RationalPoly next = next_in_chain(out.poly, next_degree, params[k - 1]);
    if (!bilinear_form(next, out.poly).is_zero()) {
      throw std::runtime_error("recurrence residual is not identically zero");
    }
    if (next.degree() != static_cast<int>(next_degree)) {
      throw std::runtime_error("constructed polynomial has the wrong degree");
    }
    out.poly = std::move(next);
  }
  return out;
}

double rational_kdv_field(const RationalPoly& p, double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("evaluation point must be finite");
  }
  // Cancellation guard: compare |p(x)| with the sum of term magnitudes.
  double amplitude = 0.0;
  double power = 1.0;
  for (const Rational& c : p.coeffs) {
    amplitude += std::fabs(static_cast<double>(c)) * std::fabs(power);
    power *= x;
  }
  const double value = p.at(x);
  if (std::fabs(value) < 1e-9 * amplitude) {
    throw std::invalid_argument("evaluation point is too close to a zero of the "
                                "polynomial");
  }
  const RationalPoly dp = p.derivative();
  const double d1 = dp.at(x);
  const double d2 = dp.derivative().at(x);
  return -2.0 * (d2 * value - d1 * d1) / (value * value);
}

double rational_kdv_residual(std::size_t l, const std::vector<Rational>& params,
                             const KdvGridSpec& grid) {
  if (!(grid.dx > 0.0) || !(grid.dt3 > 0.0) || !(grid.x_max > grid.x_min)) {
    throw std::invalid_argument("grid spec must have positive spacings and a "
                                "nonempty window");
  }
  const std::size_t nodes =
      static_cast<std::size_t>(std::floor((grid.x_max - grid.x_min) / grid.dx + 0.5)) + 1;
  if (nodes < 5) {
    throw std::invalid_argument("window too narrow for the 5-point stencil");
  }

  const RationalPoly center_poly = adler_moser(l, params).poly;
  RationalPoly ahead_poly = center_poly;
  RationalPoly behind_poly = center_poly;
  const bool time_dependent = l >= 2;
  if (time_dependent) {
    // t_3 runs twelve times faster than the flow time of the normal form.
    std::vector<Rational> shifted = params;
    shifted[0] += Rational(12.0 * grid.dt3);
    ahead_poly = adler_moser(l, shifted).poly;
    shifted[0] = params[0] - Rational(12.0 * grid.dt3);
    behind_poly = adler_moser(l, shifted).poly;
  }

  std::vector<double> center(nodes), ahead(nodes), behind(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = grid.x_min + static_cast<double>(i) * grid.dx;
    center[i] = rational_kdv_field(center_poly, x);
    ahead[i] = time_dependent ? rational_kdv_field(ahead_poly, x) : center[i];
    behind[i] = time_dependent ? rational_kdv_field(behind_poly, x) : center[i];
  }

  const double dx = grid.dx;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < nodes; ++i) {
    const double v_t = (ahead[i] - behind[i]) / (2.0 * grid.dt3);
    const double v_x = (center[i + 1] - center[i - 1]) / (2.0 * dx);
    const double v_xxx = (center[i + 2] - 2.0 * center[i + 1] +
                          2.0 * center[i - 1] - center[i - 2]) /
                         (2.0 * dx * dx * dx);
    worst = std::max(worst, std::fabs(v_t + v_xxx - 6.0 * center[i] * v_x));
  }
  return worst;
}

}  // namespace loewner
