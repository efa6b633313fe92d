#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "loewner/coulomb_gas.hpp"
#include "loewner/numerics.hpp"
#include "loewner/rng.hpp"
#include "loewner/tau_functions.hpp"

using namespace loewner;

TEST_SUITE_BEGIN("coulomb_gas");

TEST_CASE("energy hand values and symmetries") {
  GasState s;
  s.positions = {cplx(0.0, 0.0)};
  CHECK(std::abs(energy(s)) < 1e-15);

  s.positions = {cplx(0.5, 0.0), cplx(-0.5, 0.0)};
  // -2 log 1 + (1/1) * (0.25 + 0.25) = 0.5
  CHECK(energy(s) == doctest::Approx(0.5).epsilon(1e-12));

  GasState shifted = s;
  const cplx delta(0.3, -0.2);
  for (cplx& z : shifted.positions) z += delta;
  double expected = 0.5;
  for (const cplx& z : s.positions) {
    expected += std::norm(z + delta) - std::norm(z);
  }
  CHECK(energy(shifted) == doctest::Approx(expected).epsilon(1e-12));

  GasState swapped = s;
  std::swap(swapped.positions[0], swapped.positions[1]);
  CHECK(energy(swapped) == energy(s));

  GasState coincident = s;
  coincident.positions[1] = coincident.positions[0];
  CHECK(std::isinf(energy(coincident)));
}

TEST_CASE("half-plane kernel value and conductor behavior") {
  GasState s;
  s.kernel = GasKernel::half_plane;
  s.positions = {cplx(0.0, 1.0), cplx(0.0, 2.0)};
  // pair: -log[(i-2i)(-i+2i)/((i+2i)(-i-2i))] = 2 log 3; confinement: 1 + 4
  CHECK(energy(s) == doctest::Approx(2.0 * std::log(3.0) + 5.0).epsilon(1e-12));
  CHECK(std::isinf(confinement_energy(s, cplx(0.0, -0.1))));
  // image charges screen the interaction near the axis
  CHECK(std::abs(kp_phase_shift(cplx(0.5, 1e-4), cplx(-0.5, 1e-4))) < 1e-6);
}

TEST_CASE("state validation rejects oversized harmonic deformations") {
  GasState s;
  s.positions.assign(16, cplx(0.1, 0.1));
  s.potential_coeffs = {cplx(0.0, 0.0), cplx(5.0, 0.0)};
  CHECK_THROWS_AS(validate_gas_state(s), std::invalid_argument);

  GasState neg = s;
  neg.potential_coeffs.clear();
  neg.hbar = -1.0;
  CHECK_THROWS_AS(validate_gas_state(neg), std::invalid_argument);

  GasState outside;
  outside.kernel = GasKernel::half_plane;
  outside.positions = {cplx(0.0, -1.0)};
  CHECK_THROWS_AS(validate_gas_state(outside), std::invalid_argument);
}

TEST_CASE("single particle samples the exact gaussian law") {
  GasState s;
  s.hbar = 0.7;
  s.positions = {cplx(0.3, 0.1)};
  MetropolisOptions opt;
  opt.sweeps = 30000;
  opt.burn_in = 2000;
  opt.thin = 20;
  const MetropolisResult res = metropolis_run(s, opt, RngSeed{12, 0});
  REQUIRE(!res.chain.empty());
  CHECK(res.acceptance_rate > 0.2);
  CHECK(res.acceptance_rate < 0.7);
  CHECK(res.max_cache_error < 1e-8);

  std::vector<double> r2;
  for (const auto& snap : res.chain) r2.push_back(std::norm(snap[0]));
  const double m = mean(r2);
  // |z|^2 is exponential with mean hbar; batch means give the standard error
  const std::size_t batches = 20, per = r2.size() / batches;
  std::vector<double> bm(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < per; ++i) bm[b] += r2[b * per + i];
    bm[b] /= static_cast<double>(per);
  }
  const double se = std::sqrt(sample_variance(bm) / batches);
  CHECK(std::abs(m - s.hbar) < 3.0 * se);

  const double ks = ks_statistic(
      r2, [&](double x) { return 1.0 - std::exp(-x / s.hbar); });
  CHECK(ks < ks_critical(r2.size(), 0.01));

  const MetropolisResult res2 = metropolis_run(s, opt, RngSeed{12, 0});
  REQUIRE(res2.chain.size() == res.chain.size());
  bool same = true;
  for (std::size_t i = 0; i < res.chain.size(); ++i) {
    same = same && res.chain[i] == res2.chain[i];
  }
  CHECK(same);
}

TEST_CASE("vanishing proposals are always accepted") {
  GasState s;
  s.positions = {cplx(0.1, 0.0), cplx(-0.2, 0.3)};
  MetropolisOptions opt;
  opt.sweeps = 200;
  opt.burn_in = 0;
  opt.auto_tune = false;
  opt.proposal_scale = 1e-8;
  const MetropolisResult res = metropolis_run(s, opt, RngSeed{5, 1});
  CHECK(res.acceptance_rate > 0.999);
}

TEST_CASE("incremental energy bookkeeping matches recomputation") {
  GasState s;
  s.hbar = 0.1;
  CounterRng init(7, 7);
  for (int i = 0; i < 16; ++i) {
    s.positions.emplace_back(init.next_normal(), init.next_normal());
  }
  MetropolisOptions opt;
  opt.sweeps = 6000;
  opt.burn_in = 500;
  opt.recheck_interval = 500;
  const MetropolisResult res = metropolis_run(s, opt, RngSeed{99, 0});
  CHECK(res.max_cache_error < 1e-8);
}

TEST_CASE("droplet statistics guard their inputs") {
  CHECK_THROWS_AS(droplet_stats({}, 16, 0.1), std::invalid_argument);
  const std::vector<std::vector<cplx>> chain = {{cplx(0.1, 0.0)}};
  CHECK_THROWS_AS(droplet_stats(chain, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(droplet_stats(chain, 16, 0.1, 4), std::invalid_argument);
}

TEST_CASE("a small droplet reaches its expected radius") {
  GasState s;
  s.hbar = 0.05;
  s.confinement_scale = 0.5;
  CounterRng init(3, 1);
  for (int i = 0; i < 24; ++i) {
    s.positions.emplace_back(0.5 * init.next_normal(), 0.5 * init.next_normal());
  }
  MetropolisOptions opt;
  opt.sweeps = 6000;
  opt.burn_in = 800;
  opt.thin = 4;
  const MetropolisResult res = metropolis_run(s, opt, RngSeed{2025, 0});
  const DropletStats stats = droplet_stats(res.chain, 14, s.hbar);
  const double target = std::sqrt(2.0 * s.hbar * 24.0);  // sqrt(2 hbar N)
  // small-N edges are soft; a 15% band is already informative
  CHECK(std::abs(stats.support_radius - target) < 0.15 * target);
  CHECK(stats.mass_radius > stats.support_radius * 0.8);
}

TEST_CASE("t2 perturbation elongates the droplet against the squeeze") {
  auto second_harmonic = [](double t2) {
    GasState s;
    s.hbar = 0.02;
    s.confinement_scale = 0.5;
    s.potential_coeffs = {cplx(0.0, 0.0), cplx(t2, 0.0)};
    CounterRng init(4, 0);
    for (int i = 0; i < 64; ++i) {
      s.positions.emplace_back(0.8 * init.next_normal(), 0.8 * init.next_normal());
    }
    MetropolisOptions opt;
    opt.sweeps = 3000;
    opt.burn_in = 800;
    opt.thin = 5;
    const MetropolisResult res = metropolis_run(s, opt, RngSeed{77, 0});
    const DropletStats stats = droplet_stats(res.chain, 16, s.hbar, 32);
    double acc = 0.0;
    for (const cplx& b : stats.boundary) {
      acc += std::abs(b) * std::cos(2.0 * std::arg(b));
    }
    return acc / static_cast<double>(stats.boundary.size());
  };
  CHECK(second_harmonic(0.08) < -0.01);
  CHECK(second_harmonic(-0.08) > 0.01);
}

TEST_CASE("half-plane sampler never crosses the conductor") {
  GasState s;
  s.kernel = GasKernel::half_plane;
  s.hbar = 0.5;
  s.positions = {cplx(0.2, 0.8), cplx(-0.3, 1.2), cplx(0.1, 0.4)};
  MetropolisOptions opt;
  opt.sweeps = 3000;
  opt.burn_in = 500;
  const MetropolisResult res = metropolis_run(s, opt, RngSeed{11, 3});
  bool all_upper = true;
  for (const auto& snap : res.chain) {
    for (const cplx& z : snap) all_upper = all_upper && z.imag() > 0.0;
  }
  CHECK(all_upper);
  CHECK(res.max_cache_error < 1e-8);
}

TEST_CASE("curve distance identities") {
  LaurentMap circle;
  circle.r = 1.6;
  circle.coeffs = {cplx(0.0, 0.0)};
  CHECK(compare_to_hele_shaw(boundary_points(circle, 64), circle, 64) < 1e-12);
  CHECK(compare_to_hele_shaw(boundary_points(circle, 48), circle, 512) < 5e-3);
  CHECK_THROWS_AS(compare_to_hele_shaw({cplx(1.0, 0.0)}, circle),
                  std::invalid_argument);
}

TEST_SUITE_END();
