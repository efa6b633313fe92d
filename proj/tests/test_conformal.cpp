#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "loewner/conformal.hpp"
#include "loewner/rng.hpp"

using namespace loewner;

TEST_SUITE_BEGIN("conformal");

TEST_CASE("angle normalization wraps into [0, 2 pi) and rejects non-finite input") {
  const double two_pi = 2.0 * std::acos(-1.0);
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(two_pi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normalize_angle(-0.5) == doctest::Approx(two_pi - 0.5).epsilon(1e-15));
  CHECK(normalize_angle(7.0 * two_pi + 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(normalize_angle(std::nan("")), std::invalid_argument);
}

TEST_CASE("slit tip value matches the closed form") {
  // the attachment point maps to the slit tip at distance
  // e^t (2 + 2 sqrt(1 - e^{-t})) - 1 from the origin along the slit ray
  const double t = 0.01;
  const ElementarySlitMap s(0.0, t);
  const cplx tip = eval_elementary(s, cplx(1.0, 0.0));
  const double expect = std::exp(t) * (2.0 + 2.0 * std::sqrt(1.0 - std::exp(-t))) - 1.0;
  CHECK(tip.imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(tip.real() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("capacity zero is the identity and capacity sets the scale at infinity") {
  const ElementarySlitMap id(1.0, 0.0);
  const cplx w(2.0, 1.0);
  CHECK(eval_elementary(id, w) == w);

  const ElementarySlitMap s(0.7, 0.05);
  const cplx far = eval_elementary(s, cplx(1e8, 0.0));
  CHECK(std::abs(far) / 1e8 == doctest::Approx(std::exp(0.05)).epsilon(1e-6));
}

TEST_CASE("the point opposite the slit is fixed with derivative e^{t/2}") {
  const ElementarySlitMap s(0.0, 0.01);
  const cplx m1 = eval_elementary(s, cplx(-1.0, 0.0));
  CHECK(std::abs(m1 - cplx(-1.0, 0.0)) < 1e-12);
  // |h'| -> e^{t/2} as w -> -1 from outside
  const cplx d = eval_elementary_derivative(s, cplx(-1.0 - 1e-6, 0.0));
  CHECK(std::abs(d) == doctest::Approx(std::exp(0.005)).epsilon(1e-5));
}

TEST_CASE("evaluation guards the domain") {
  const ElementarySlitMap s(1.0, 0.02);
  CHECK_THROWS_AS(eval_elementary(s, cplx(0.5, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(eval_elementary(s, cplx(std::nan(""), 0.0)), std::invalid_argument);
  // on the circle within 1e-12 of the attachment angle the map degenerates
  CHECK_THROWS_AS(eval_elementary(s, std::polar(1.0, 1.0 + 1e-13)),
                  std::runtime_error);
  // the derivative needs |w| > 1 strictly
  CHECK_THROWS_AS(eval_elementary_derivative(s, std::polar(1.0, 2.5)),
                  std::invalid_argument);
}

TEST_CASE("composite map composes innermost-first and applies log_scale") {
  CompositeMap F;
  F.append(ElementarySlitMap(0.3, 0.01));
  F.append(ElementarySlitMap(2.1, 0.02));
  const cplx w(1.4, 0.6);
  const cplx manual =
      eval_elementary(F.slits[0], eval_elementary(F.slits[1], w));
  CHECK(eval_composite(F, w) == manual);
  CHECK(F.total_capacity() == doctest::Approx(0.03).epsilon(1e-15));

  CompositeMap scaled = F;
  scaled.log_scale = -0.5;
  CHECK(std::abs(eval_composite(scaled, w) - std::exp(-0.5) * manual) < 1e-15);

  const CompositeMap empty;
  CHECK(eval_composite(empty, w) == w);
  CHECK(eval_derivative(empty, w) == cplx(1.0, 0.0));
}

TEST_CASE("composite derivative agrees with finite differences") {
  CounterRng rng(7, 0);
  CompositeMap G;
  for (int i = 0; i < 10; ++i) {
    G.append(ElementarySlitMap(6.283 * rng.next_double(),
                               0.002 + 0.01 * rng.next_double()));
  }
  const cplx w = std::polar(1.1, 0.3);
  const cplx dv = eval_derivative(G, w);
  const double h = 1e-6;
  const cplx fd = (eval_composite(G, w + h) - eval_composite(G, w - h)) / (2.0 * h);
  CHECK(std::abs(dv - fd) / std::abs(dv) < 1e-8);

  const ValueAndDeriv both = eval_with_derivative(G, w);
  CHECK(both.value == eval_composite(G, w));
  CHECK(both.deriv == dv);
}

TEST_CASE("composite evaluation reports the failing slit index") {
  CompositeMap F;
  F.append(ElementarySlitMap(0.0, 0.01));
  F.append(ElementarySlitMap(3.0, 0.01));
  // the innermost slit (index 2 in storage order) rejects its own base point
  try {
    (void)eval_composite(F, std::polar(1.0, 3.0));
    REQUIRE(false);
  } catch (const std::runtime_error& err) {
    CHECK(std::string(err.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("loewner velocity factor and its singularity") {
  const cplx w(2.0, 0.0);
  // L = 0: w (w+1)/(w-1) = 2 * 3 / 1 = 6
  CHECK(std::abs(loewner_rhs(w, 0.0) - cplx(6.0, 0.0)) < 1e-14);
  CHECK_THROWS_AS(loewner_rhs(std::polar(1.0, 0.4), 0.4), std::runtime_error);
}

TEST_CASE("whole-plane rescale stores the log factor") {
  CompositeMap F;
  F.append(ElementarySlitMap(1.0, 0.3));
  const CompositeMap R = whole_plane_rescale(F, 2.0);
  CHECK(R.log_scale == -2.0);
  const cplx w(1.5, 0.2);
  CHECK(std::abs(eval_composite(R, w) - std::exp(-2.0) * eval_composite(F, w)) <
        1e-12);
  CHECK_THROWS_AS(whole_plane_rescale(F, -1.0), std::invalid_argument);
}

TEST_CASE("fitted leading coefficient recovers e^{total capacity}") {
  CompositeMap F;
  F.append(ElementarySlitMap(0.3, 0.01));
  F.append(ElementarySlitMap(2.1, 0.02));
  const cplx lead = fitted_leading_coefficient(F);
  CHECK(std::abs(lead - cplx(std::exp(0.03), 0.0)) / std::exp(0.03) < 1e-10);
}

TEST_SUITE_END();
