#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "loewner/conformal.hpp"
#include "loewner/drivers.hpp"
#include "loewner/growth.hpp"

using namespace loewner;

TEST_SUITE_BEGIN("growth");

TEST_CASE("capacity-feedback growth at alpha 0 has bit-constant capacities") {
  const double da = 2.5e-3;
  const GrowthRun run = grow_hl(0.0, da, 150, RngSeed{31, 0});
  REQUIRE(!run.aborted);
  REQUIRE(run.map.size() == 150);
  for (const auto& slit : run.map.slits) CHECK(slit.capacity == da);
  CHECK(run.map.total_capacity() == doctest::Approx(150 * da).epsilon(1e-12));

  const GrowthRun again = grow_hl(0.0, da, 150, RngSeed{31, 0});
  for (std::size_t i = 0; i < 150; ++i) {
    CHECK(run.map.slits[i].angle == again.map.slits[i].angle);
  }
}

TEST_CASE("alpha 2 growth modulates capacities by the local derivative") {
  const GrowthRun run = grow_hl(2.0, 1e-3, 200, RngSeed{17, 0});
  REQUIRE(!run.aborted);
  REQUIRE(run.map.size() == 200);
  double lo = 1e300, hi = 0.0;
  for (const auto& slit : run.map.slits) {
    CHECK(std::isfinite(slit.capacity));
    CHECK(slit.capacity >= 0.0);
    lo = std::min(lo, slit.capacity);
    hi = std::max(hi, slit.capacity);
  }
  CHECK(hi > lo);  // feedback actually varies the increments
  CHECK(run.alpha == 2.0);
  CHECK(run.delta_a == 1e-3);
}

TEST_CASE("driven growth consumes the driver stepwise") {
  const DriverPath drv = sample_brownian(2.0, 1e-2, 50, RngSeed{11, 0});
  const GrowthRun run = grow_driven(drv, 1e-2);
  REQUIRE(run.map.size() == 50);
  for (std::size_t i = 0; i < run.map.size(); ++i) {
    CHECK(run.map.slits[i].capacity == 1e-2);
    const double want = std::fmod(drv.value_at(i * 1e-2), 2.0 * std::acos(-1.0));
    const double got = run.map.slits[i].angle;
    CHECK(std::abs(got - (want < 0 ? want + 2.0 * std::acos(-1.0) : want)) < 1e-12);
  }
}

TEST_CASE("driven growth satisfies the loewner equation to first order in dt") {
  const DriverPath drv = sample_brownian(2.0, 1e-2, 50, RngSeed{11, 0});
  const cplx wp(1.7, 0.9);
  std::vector<double> residuals;
  for (const double dt : {1e-2, 5e-3, 2.5e-3}) {
    const GrowthRun run = grow_driven(drv, dt);
    CompositeMap full = run.map;
    CompositeMap prev = run.map;
    prev.slits.pop_back();
    const double L = run.map.slits.back().angle;
    const cplx lhs = (eval_composite(full, wp) - eval_composite(prev, wp)) / dt;
    const cplx rhs = eval_derivative(prev, wp) * loewner_rhs(wp, L);
    residuals.push_back(std::abs(lhs - rhs));
  }
  // piecewise-constant composition is first-order accurate: halving dt
  // should roughly halve the defect
  CHECK(residuals[0] / residuals[1] > 1.5);
  CHECK(residuals[0] / residuals[1] < 3.0);
  CHECK(residuals[1] / residuals[2] > 1.5);
  CHECK(residuals[1] / residuals[2] < 3.0);
}

TEST_CASE("whole-plane map has unit leading coefficient at t = 0") {
  WholePlaneParams params;
  params.kind = DriverKind::brownian;
  params.kappa = 2.0;
  params.t = 0.0;
  params.t_burn = 10.0;
  params.dt = 1e-2;
  const GrowthRun run = grow_whole_plane(params, RngSeed{5, 0});
  REQUIRE(!run.aborted);
  CHECK(run.rescale_T == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(run.map.log_scale == -run.rescale_T);
  CHECK(std::abs(fitted_leading_coefficient(run.map)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // the recorded driver starts at time zero
  CHECK(run.driver.kind == DriverKind::prescribed);
  CHECK(run.driver.start_time() == 0.0);
}

TEST_CASE("deepening the burn-in prepends slits and keeps the rest") {
  WholePlaneParams params;
  params.kind = DriverKind::brownian;
  params.kappa = 2.0;
  params.t = 0.0;
  params.t_burn = 10.0;
  params.dt = 1e-2;
  const GrowthRun shallow = grow_whole_plane(params, RngSeed{5, 0});
  params.t_burn = 12.0;
  const GrowthRun deep = grow_whole_plane(params, RngSeed{5, 0});
  REQUIRE(deep.map.size() > shallow.map.size());
  const std::size_t extra = deep.map.size() - shallow.map.size();
  for (std::size_t i = 0; i < shallow.map.size(); ++i) {
    CHECK(deep.map.slits[extra + i].angle == shallow.map.slits[i].angle);
    CHECK(deep.map.slits[extra + i].capacity == shallow.map.slits[i].capacity);
  }
}

TEST_CASE("extending physical time appends slits and keeps the burn-in") {
  WholePlaneParams params;
  params.kind = DriverKind::brownian;
  params.kappa = 2.0;
  params.t = 0.05;
  params.t_burn = 10.0;
  params.dt = 1e-2;
  const GrowthRun shortrun = grow_whole_plane(params, RngSeed{6, 0});
  params.t = 0.1;
  const GrowthRun longrun = grow_whole_plane(params, RngSeed{6, 0});
  REQUIRE(longrun.map.size() > shortrun.map.size());
  for (std::size_t i = 0; i < shortrun.map.size(); ++i) {
    CHECK(longrun.map.slits[i].angle == shortrun.map.slits[i].angle);
  }
}

TEST_CASE("whole-plane growth accepts only stochastic kinds and deep burn-in") {
  WholePlaneParams params;
  params.kind = DriverKind::uniform_iid;
  params.kappa = 2.0;
  CHECK_THROWS_AS(grow_whole_plane(params, RngSeed{1, 0}), std::invalid_argument);
  params.kind = DriverKind::brownian;
  params.t_burn = 5.0;  // below the minimum depth 10
  CHECK_THROWS_AS(grow_whole_plane(params, RngSeed{1, 0}), std::invalid_argument);
}

TEST_CASE("slit csv round trip is bit exact") {
  const GrowthRun run = grow_hl(2.0, 1e-3, 60, RngSeed{23, 1});
  const std::string path = "/tmp/loewner_unit_map.csv";
  save_map_csv(run.map, path);
  const CompositeMap back = load_map_csv(path);
  REQUIRE(back.size() == run.map.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.slits[i].angle == run.map.slits[i].angle);
    CHECK(back.slits[i].capacity == run.map.slits[i].capacity);
  }
  std::remove(path.c_str());
}

TEST_CASE("trace points sample the requested circle image") {
  const GrowthRun run = grow_hl(0.0, 1e-3, 40, RngSeed{2, 2});
  const auto pts = trace_points(run.map, 128);
  REQUIRE(pts.size() == 128);
  for (const cplx& z : pts) {
    CHECK(std::isfinite(z.real()));
    CHECK(std::isfinite(z.imag()));
    CHECK(std::abs(z) >= 0.99);  // image of a circle just outside the disk
  }
}

TEST_SUITE_END();
