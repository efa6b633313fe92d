#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "loewner/drivers.hpp"
#include "loewner/numerics.hpp"

using namespace loewner;

TEST_SUITE_BEGIN("drivers");

TEST_CASE("kind names round trip and reject unknown names") {
  for (const DriverKind k : {DriverKind::brownian, DriverKind::levy,
                             DriverKind::uniform_iid, DriverKind::prescribed}) {
    CHECK(driver_kind_from_name(driver_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(driver_kind_from_name("whatever"), std::invalid_argument);
}

TEST_CASE("brownian driver: shape, start, determinism, increment law") {
  const double kappa = 3.0, dt = 1e-2;
  const std::size_t steps = 4000;
  const DriverPath p = sample_brownian(kappa, dt, steps, RngSeed{21, 0});
  validate_driver(p);
  REQUIRE(p.size() == steps + 1);
  CHECK(p.values.front() == 0.0);
  CHECK(p.breakpoints.front() == 0.0);
  CHECK(p.breakpoints.back() == doctest::Approx(steps * dt).epsilon(1e-12));

  const DriverPath q = sample_brownian(kappa, dt, steps, RngSeed{21, 0});
  CHECK(p.values == q.values);

  // increments are iid N(0, kappa dt): check the variance within 5 sigma
  std::vector<double> inc(steps);
  for (std::size_t i = 0; i < steps; ++i) inc[i] = p.values[i + 1] - p.values[i];
  const double var = sample_variance(inc);
  const double expect = kappa * dt;
  const double sigma = expect * std::sqrt(2.0 / (steps - 1.0));
  CHECK(std::abs(var - expect) < 5.0 * sigma);
  CHECK(std::abs(mean(inc)) < 5.0 * std::sqrt(expect / steps));
}

TEST_CASE("piecewise-constant lookup semantics") {
  const DriverPath p = prescribed_driver({0.0, 1.0, 2.5}, {5.0, -1.0, 7.0});
  CHECK(p.value_at(0.0) == 5.0);
  CHECK(p.value_at(0.999) == 5.0);
  CHECK(p.value_at(1.0) == -1.0);
  CHECK(p.value_at(2.4999) == -1.0);
  CHECK(p.value_at(2.5) == 7.0);
  CHECK(p.value_at(100.0) == 7.0);  // last value extends forever
  CHECK_THROWS_AS(p.value_at(-0.1), std::invalid_argument);
}

TEST_CASE("levy driver: zero rate means no jumps, positive rate jumps by the atom") {
  const DriverPath none = sample_levy(2.0, 0.0, 1.0, 1e-2, 500, RngSeed{4, 0});
  validate_driver(none);
  CHECK(none.jump_count == 0);

  const double kappa = 0.0, rate = 40.0, size = 0.7, dt = 1e-2;
  const DriverPath jumpy = sample_levy(kappa, rate, size, dt, 2000, RngSeed{4, 1});
  validate_driver(jumpy);
  CHECK(jumpy.jump_count > 0);
  // with no diffusion every increment is an integer multiple of the atom size
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < jumpy.values.size(); ++i) {
    const double d = (jumpy.values[i + 1] - jumpy.values[i]) / size;
    worst = std::max(worst, std::abs(d - std::round(d)));
  }
  CHECK(worst < 1e-12);
  // jump count concentrates near rate * T = 800 (5 sigma = ~141)
  CHECK(std::abs(static_cast<double>(jumpy.jump_count) - 800.0) < 150.0);
}

TEST_CASE("uniform angle sequence uses placeholder breakpoints") {
  const DriverPath p = sample_uniform_angles(64, RngSeed{8, 8});
  validate_driver(p);
  REQUIRE(p.size() == 64);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p.breakpoints[i] == static_cast<double>(i + 1));
    CHECK(p.values[i] >= 0.0);
    CHECK(p.values[i] < 2.0 * std::acos(-1.0));
  }
}

TEST_CASE("validation rejects structural violations") {
  DriverPath bad = prescribed_driver({0.0, 1.0}, {0.0, 2.0});
  bad.breakpoints[1] = 0.0;  // not strictly increasing
  CHECK_THROWS_AS(validate_driver(bad), std::invalid_argument);

  DriverPath mismatch = prescribed_driver({0.0, 1.0}, {0.0, 2.0});
  mismatch.values.pop_back();
  CHECK_THROWS_AS(validate_driver(mismatch), std::invalid_argument);

  // brownian paths must start at L(0) = 0
  DriverPath shifted = sample_brownian(1.0, 1e-2, 10, RngSeed{1, 1});
  shifted.values[0] = 0.5;
  CHECK_THROWS_AS(validate_driver(shifted), std::invalid_argument);
}

TEST_CASE("driver csv round trip is bit exact") {
  const DriverPath p = sample_brownian(2.0, 1e-3, 200, RngSeed{3, 9});
  const std::string path = "/tmp/loewner_unit_driver.csv";
  save_driver_csv(p, path);
  const DriverPath back = load_driver_csv(path);
  CHECK(back.kind == DriverKind::prescribed);
  REQUIRE(back.size() == p.size());
  CHECK(back.breakpoints == p.breakpoints);
  CHECK(back.values == p.values);
  std::remove(path.c_str());
}

TEST_SUITE_END();
