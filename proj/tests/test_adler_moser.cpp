#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "loewner/adler_moser.hpp"

using namespace loewner;

TEST_SUITE_BEGIN("adler_moser");

TEST_CASE("rational polynomial arithmetic is exact") {
  RationalPoly p;  // 1 + 2x
  p.coeffs = {Rational(1), Rational(2)};
  RationalPoly q;  // -1 + x^2
  q.coeffs = {Rational(-1), Rational(0), Rational(1)};

  const RationalPoly sum = poly_add(p, q);
  CHECK(sum.coeffs == std::vector<Rational>{Rational(0), Rational(2), Rational(1)});

  const RationalPoly prod = poly_mul(p, q);
  // (1 + 2x)(x^2 - 1) = -1 - 2x + x^2 + 2x^3
  CHECK(prod.at(Rational(3)) == Rational(-1 - 6 + 9 + 54));
  CHECK(prod.degree() == 3);

  CHECK(poly_sub(p, p).is_zero());
  CHECK(poly_sub(p, p).degree() == -1);

  RationalPoly third;  // x/3
  third.coeffs = {Rational(0), Rational(1, 3)};
  CHECK(third.at(Rational(1, 2)) == Rational(1, 6));
  CHECK(third.derivative().coeffs == std::vector<Rational>{Rational(1, 3)});
}

TEST_CASE("the first chain polynomials have their normal forms") {
  const auto p1 = adler_moser(1, {});
  CHECK(p1.poly.to_string() == "x");
  CHECK(p1.poly.degree() == 1);

  const auto p2 = adler_moser(2, {Rational(1, 3)});
  CHECK(p2.poly.to_string() == "x^3 + 1/3");
  // the parameter enters linearly as the constant term
  const auto p2b = adler_moser(2, {Rational(-7, 5)});
  CHECK(p2b.poly.coeffs[0] == Rational(-7, 5));
  CHECK(p2b.poly.coeffs[3] == Rational(1));
}

TEST_CASE("level 3 closed form under this normalization") {
  const auto p3 = adler_moser(3, {Rational(1, 3), Rational(-2)});
  // x^6 + 5 t3 x^3 - 2 x - 5 t3^2 with t3 = 1/3, t5 = -2 entering via the
  // linear term
  RationalPoly expect;
  expect.coeffs = {Rational(-5) * Rational(1, 3) * Rational(1, 3), Rational(-2),
                   Rational(0), Rational(5, 3), Rational(0), Rational(0),
                   Rational(1)};
  CHECK(poly_sub(p3.poly, expect).is_zero());
  CHECK(p3.poly.degree() == 6);
}

TEST_CASE("recurrence residual is exactly zero and degrees follow l(l+1)/2") {
  std::vector<Rational> params;
  for (std::size_t l = 2; l <= 8; ++l) {
    params.emplace_back(1, static_cast<int>(l));
    const auto pl = adler_moser(l, params);
    const auto prev =
        adler_moser(l - 1, {params.begin(), params.end() - 1});
    CHECK(pl.poly.degree() == static_cast<int>(l * (l + 1) / 2));
    CHECK(bilinear_form(pl.poly, prev.poly).is_zero());
  }
}

TEST_CASE("bilinear form is symmetric") {
  RationalPoly p;
  p.coeffs = {Rational(1), Rational(0), Rational(3)};
  RationalPoly q;
  q.coeffs = {Rational(2), Rational(-1), Rational(0), Rational(1)};
  CHECK(poly_sub(bilinear_form(p, q), bilinear_form(q, p)).is_zero());
}

TEST_CASE("parameter count is enforced") {
  CHECK_THROWS_AS(adler_moser(3, {Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(adler_moser(13, std::vector<Rational>(12, Rational(1))),
                  std::invalid_argument);
}

TEST_CASE("rational kdv field closed form and pole guard") {
  const auto p1 = adler_moser(1, {});
  // V = -2 (log x)'' = 2 / x^2
  CHECK(rational_kdv_field(p1.poly, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rational_kdv_field(p1.poly, -3.0) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(rational_kdv_field(p1.poly, 1e-12), std::invalid_argument);
}

TEST_CASE("rational solutions satisfy kdv at second order in the stencil") {
  KdvGridSpec win;
  win.x_min = 1.0;
  win.x_max = 4.0;
  win.dx = 1e-2;
  win.dt3 = 1e-2;
  KdvGridSpec half = win;
  half.dx = 5e-3;
  half.dt3 = 5e-3;

  // level 1 is stationary; levels 2 and 3 move with t3
  const double s1 = rational_kdv_residual(1, {}, win);
  const double s2 = rational_kdv_residual(1, {}, half);
  CHECK(s1 / s2 > 3.0);
  CHECK(s1 / s2 < 5.0);

  const double a1 = rational_kdv_residual(2, {Rational(1, 3)}, win);
  const double a2 = rational_kdv_residual(2, {Rational(1, 3)}, half);
  CHECK(a1 / a2 > 3.0);
  CHECK(a1 / a2 < 5.0);

  KdvGridSpec far = win;
  far.x_min = 1.5;  // keep the stencil clear of the level-3 real root
  far.x_max = 4.5;
  KdvGridSpec far2 = far;
  far2.dx = 5e-3;
  far2.dt3 = 5e-3;
  const double b1 = rational_kdv_residual(3, {Rational(1, 3), Rational(-2)}, far);
  const double b2 = rational_kdv_residual(3, {Rational(1, 3), Rational(-2)}, far2);
  CHECK(b1 / b2 > 3.0);
  CHECK(b1 / b2 < 5.0);
}

TEST_SUITE_END();
