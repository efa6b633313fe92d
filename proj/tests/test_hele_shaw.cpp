#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "loewner/csv.hpp"
#include "loewner/hele_shaw.hpp"

using namespace loewner;

namespace {

constexpr double kPi = std::numbers::pi;

LaurentMap unit_circle() {
  LaurentMap f;
  f.r = 1.0;
  f.coeffs = {cplx(0.0, 0.0)};
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("hele_shaw");

TEST_CASE("map validation guards r, coefficients, and interior gauge") {
  LaurentMap bad = unit_circle();
  bad.r = -1.0;
  CHECK_THROWS_AS(validate_laurent_map(bad), std::invalid_argument);

  LaurentMap interior = unit_circle();
  interior.orientation = MapOrientation::interior;
  interior.coeffs = {cplx(0.0, 0.0), cplx(0.1, 0.0)};  // u_1 must be zero
  CHECK_THROWS_AS(validate_laurent_map(interior), std::invalid_argument);

  // a strongly pinched ellipse self-intersects
  LaurentMap pinched = unit_circle();
  pinched.coeffs = {cplx(0.0, 0.0), cplx(1.2, 0.0)};
  CHECK_THROWS_AS(validate_laurent_map(pinched), std::runtime_error);
}

TEST_CASE("area formulas for exterior and interior maps") {
  LaurentMap f = unit_circle();
  f.r = 2.0;
  f.coeffs = {cplx(1.0, 0.0), cplx(0.5, 0.0)};
  CHECK(laurent_area(f) == doctest::Approx(kPi * (4.0 - 0.25)).epsilon(1e-14));

  LaurentMap g;
  g.orientation = MapOrientation::interior;
  g.r = 2.0;
  g.coeffs = {cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.3, 0.0)};
  CHECK(laurent_area(g) == doctest::Approx(kPi * (4.0 + 2.0 * 0.09)).epsilon(1e-14));
}

TEST_CASE("circle velocity solves the interface equation exactly") {
  const LaurentMap circle = unit_circle();
  const MapVelocity v = solve_string_velocity(circle);
  CHECK(v.r_dot == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(v.coeff_dots[0]) < 1e-12);
  CHECK(pk_residual(circle, v) < 1e-10);
}

TEST_CASE("poisson bracket is antisymmetric on samples") {
  LaurentMap f = unit_circle();
  f.coeffs = {cplx(0.1, 0.05), cplx(0.2, 0.0)};
  const MapVelocity v = solve_string_velocity(f);
  const auto fore = poisson_bracket(f, v, f, v, 64);
  for (const cplx& b : fore) {
    CHECK(std::abs(b) < 1e-12);  // {f, f} = 0
  }
}

TEST_CASE("circle grows as r(t) = sqrt(t + 1)") {
  const auto traj = evolve_string(unit_circle(), 1e-3, 1000);
  REQUIRE(!traj.halted);
  REQUIRE(traj.maps.size() == 1001);
  CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.max_residual < 1e-8);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.maps.size(); ++i) {
    const double want = std::sqrt(traj.times[i] + 1.0);
    worst = std::max(worst, std::abs(traj.maps[i].r - want) / want);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("ellipse ratio u1 / r is conserved") {
  LaurentMap ellipse = unit_circle();
  ellipse.coeffs = {cplx(0.0, 0.0), cplx(0.3, 0.0)};
  const auto traj = evolve_string(ellipse, 1e-3, 500);
  REQUIRE(!traj.halted);
  double worst = 0.0;
  for (const auto& m : traj.maps) {
    worst = std::max(worst, std::abs(m.coeffs[1].real() / m.r - 0.3));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("harmonic moments are conserved and converge at second order") {
  LaurentMap perturbed = unit_circle();
  perturbed.coeffs = {cplx(0.12, 0.07), cplx(0.18, -0.05), cplx(0.04, 0.06),
                      cplx(0.02, -0.01), cplx(0.015, 0.008)};
  const auto traj = evolve_string(perturbed, 1e-3, 500);
  REQUIRE(!traj.halted);
  const auto drift = richardson_invariance(traj, 5);
  double worst = 0.0;
  for (const double d : drift) worst = std::max(worst, d);
  CHECK(worst < 1e-5);

  const auto traj2 = evolve_string(perturbed, 5e-4, 1000);
  const auto drift2 = richardson_invariance(traj2, 5);
  double worst2 = 0.0;
  for (const double d : drift2) worst2 = std::max(worst2, d);
  CHECK(worst2 < worst);  // refinement shrinks the defect
}

TEST_CASE("area grows at exactly the source rate pi") {
  LaurentMap ellipse = unit_circle();
  ellipse.coeffs = {cplx(0.0, 0.0), cplx(0.3, 0.0)};
  const auto traj = evolve_string(ellipse, 1e-3, 500);
  const double rate = (laurent_area(traj.maps.back()) - laurent_area(traj.maps.front())) /
                      (traj.times.back() - traj.times.front());
  CHECK(rate == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("near-cusp data halts before stepping with a named reason") {
  LaurentMap cusp = unit_circle();
  cusp.coeffs = {cplx(0.0, 0.0), cplx(0.99, 0.0)};
  const auto traj = evolve_string(cusp, 1e-3, 100);
  CHECK(traj.halted);
  CHECK(traj.maps.size() == 1);
  CHECK(traj.halt_reason.find("cusp") != std::string::npos);
}

TEST_CASE("moments of shifted and centered disks") {
  const cplx z0(0.31, -0.17);
  LaurentMap shifted = unit_circle();
  shifted.coeffs = {z0, cplx(0.0, 0.0), cplx(0.0, 0.0)};
  const auto mv = harmonic_moments(shifted, 3);
  CHECK(std::abs(mv.moments[0] + kPi * std::conj(z0)) < 1e-9);
  CHECK(std::abs(mv.moments[1]) < 1e-9);
  CHECK(std::abs(mv.moments[2]) < 1e-9);
  CHECK(mv.area == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(mv.t_area == doctest::Approx(0.5).epsilon(1e-12));

  const auto cm = harmonic_moments(unit_circle(), 4);
  for (const cplx& I : cm.moments) CHECK(std::abs(I) < 1e-12);
}

TEST_CASE("polygon moments of the unit square") {
  const std::vector<cplx> square = {cplx(0, 0), cplx(1, 0), cplx(1, 1), cplx(0, 1)};
  CHECK(std::abs(polygon_moment(square, 0) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(polygon_moment(square, 1) - cplx(0.5, 0.5)) < 1e-15);
}

TEST_CASE("monopole quadrature identity holds on constants and linears") {
  const cplx z0(0.31, -0.17);
  LaurentMap shifted = unit_circle();
  shifted.coeffs = {z0, cplx(0.0, 0.0), cplx(0.0, 0.0)};
  const auto mv = harmonic_moments(shifted, 1);
  CHECK(quadrature_check(shifted, HarmonicTestFunction{0, false},
                         {cplx(mv.area, 0.0)}, cplx(0, 0)) < 1e-9);
  CHECK(quadrature_check(shifted, HarmonicTestFunction{1, false},
                         {cplx(mv.area, 0.0)}, z0) < 1e-9);
  CHECK(quadrature_check(shifted, HarmonicTestFunction{1, true},
                         {cplx(mv.area, 0.0)}, z0) < 1e-9);
}

TEST_CASE("winding numbers and self-intersection detection") {
  LaurentMap shifted = unit_circle();
  shifted.coeffs = {cplx(0.31, -0.17)};
  const auto loop = boundary_points(shifted, 256);
  CHECK(winding_number(loop, cplx(0.31, -0.17)) == 1);
  CHECK(winding_number(loop, cplx(5.0, 0.0)) == 0);
  CHECK(!polyline_self_intersects(loop));

  std::vector<cplx> eight;
  for (int j = 0; j < 64; ++j) {
    const double t = 2.0 * kPi * j / 64;
    eight.emplace_back(std::sin(2 * t), std::sin(t));
  }
  CHECK(polyline_self_intersects(eight));
}

TEST_CASE("trajectory and moment csv dumps parse back") {
  LaurentMap ellipse = unit_circle();
  ellipse.coeffs = {cplx(0.0, 0.0), cplx(0.2, 0.1)};
  const auto traj = evolve_string(ellipse, 1e-2, 20);
  const std::string tpath = "/tmp/loewner_unit_traj.csv";
  const std::string mpath = "/tmp/loewner_unit_moments.csv";
  save_trajectory_csv(traj, tpath);
  save_moments_csv(traj, 3, mpath);

  const CsvTable t = read_csv(tpath);
  REQUIRE(t.header.size() >= 2);
  CHECK(t.header[0] == "t");
  CHECK(t.rows.size() == traj.maps.size());

  const CsvTable m = read_csv(mpath);
  CHECK(m.header == std::vector<std::string>{"t", "k", "re_I", "im_I"});
  CHECK(m.rows.size() == traj.maps.size() * 4);  // k = 0..3 per state
  std::remove(tpath.c_str());
  std::remove(mpath.c_str());
}

TEST_SUITE_END();
