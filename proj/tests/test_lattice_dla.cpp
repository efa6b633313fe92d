#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "loewner/lattice_dla.hpp"

using namespace loewner;

namespace {

double charge_sum(const LatticeCluster& c) {
  double t = 0.0;
  for (const auto& [s, q] : c.boundary) t += q;
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("lattice_dla");

TEST_CASE("seed cluster has one site and four boundary neighbors") {
  LatticeCluster c = make_seed_cluster();
  validate_cluster(c);
  CHECK(c.occupied.size() == 1);
  CHECK(c.boundary.size() == 4);
}

TEST_CASE("single-seed field is symmetric and charges are exact quarters") {
  LatticeCluster c = make_seed_cluster();
  HarmonicField f = dla_harmonic_field(c, 16);
  CHECK(f.residual < 1e-8);
  bool sym = true;
  for (int k = 2; k <= 12; ++k) {
    const double a = f.at(0, k), b = f.at(k, 0), d = f.at(0, -k), e = f.at(-k, 0);
    sym = sym && a == b && b == d && d == e;
  }
  CHECK(sym);
  dla_charges(c, f);
  validate_cluster(c, true);
  for (const auto& [site, q] : c.boundary) CHECK(q == 0.25);
}

TEST_CASE("cross cluster keeps bit-exact dihedral symmetry") {
  LatticeCluster c = make_seed_cluster();
  add_site(c, {1, 0});
  add_site(c, {-1, 0});
  add_site(c, {0, 1});
  add_site(c, {0, -1});
  HarmonicField f = dla_harmonic_field(c, 16);
  dla_charges(c, f);
  validate_cluster(c, true);
  CHECK(c.boundary.at({2, 0}) == c.boundary.at({-2, 0}));
  CHECK(c.boundary.at({2, 0}) == c.boundary.at({0, 2}));
  CHECK(c.boundary.at({2, 0}) == c.boundary.at({0, -2}));
  CHECK(c.boundary.at({1, 1}) == c.boundary.at({-1, 1}));
  CHECK(c.boundary.at({1, 1}) == c.boundary.at({1, -1}));
  CHECK(c.boundary.at({1, 1}) == c.boundary.at({-1, -1}));
  CHECK(c.boundary.at({2, 0}) > c.boundary.at({1, 1}));
}

TEST_CASE("off-center block charges stay symmetric to the far-field error") {
  // The 2x2 block occupies (0..1)^2 while the solve box is centered at the
  // origin, so reflections are only exact up to the O(1/L) boundary image.
  LatticeCluster c = make_seed_cluster();
  add_site(c, {1, 0});
  add_site(c, {0, 1});
  add_site(c, {1, 1});
  HarmonicField f = dla_harmonic_field(c, 64);
  dla_charges(c, f);
  validate_cluster(c, true);
  auto rel = [&](LatticeSite a, LatticeSite b) {
    return std::abs(c.boundary.at(a) - c.boundary.at(b)) / c.boundary.at(a);
  };
  CHECK(rel({-1, 0}, {2, 0}) < 1e-2);
  CHECK(rel({0, -1}, {0, 2}) < 1e-2);
  CHECK(rel({-1, 1}, {2, 1}) < 1e-2);
  // reflection across the block diagonal maps the lattice box to itself
  CHECK(c.boundary.at({-1, 0}) == c.boundary.at({0, -1}));
  CHECK(c.boundary.at({2, 0}) == c.boundary.at({0, 2}));
}

TEST_CASE("domino ends attract more flux than its sides") {
  LatticeCluster c = make_seed_cluster();
  add_site(c, {1, 0});
  HarmonicField f = dla_harmonic_field(c, 64);
  dla_charges(c, f);
  const double end_a = c.boundary.at({-1, 0});
  const double end_b = c.boundary.at({2, 0});
  const double side = c.boundary.at({0, 1});
  CHECK(std::abs(end_a - end_b) / end_a < 1e-2);
  CHECK(std::abs(side - c.boundary.at({1, 1})) / side < 1e-2);
  CHECK(c.boundary.at({0, 1}) == c.boundary.at({0, -1}));
  CHECK(end_a > side);
}

TEST_CASE("warm start converges to the cold-solve field") {
  LatticeCluster c = make_seed_cluster();
  add_site(c, {0, 1});
  HarmonicField cold0 = dla_harmonic_field(c, 16);
  add_site(c, {1, 0});
  HarmonicField warm = dla_harmonic_field(c, 16, &cold0);
  HarmonicField cold = dla_harmonic_field(c, 16);
  double diff = 0.0;
  for (std::size_t i = 0; i < warm.values.size(); ++i) {
    diff = std::max(diff, std::abs(warm.values[i] - cold.values[i]));
  }
  CHECK(diff < 1e-6);
}

TEST_CASE("solver and mutation preconditions") {
  LatticeCluster c = make_seed_cluster();
  CHECK_THROWS_AS(add_site(c, {5, 5}), std::invalid_argument);
  CHECK_THROWS_AS(dla_harmonic_field(c, 4), std::invalid_argument);
  for (int m = 1; m <= 3; ++m) add_site(c, {m, 0});
  // radius 3 needs a box of at least 12
  CHECK_THROWS_AS(dla_harmonic_field(c, 8), std::invalid_argument);
  CHECK_THROWS_AS(dla_grow(0, RngSeed{1, 0}, DlaMode::exact_charges),
                  std::invalid_argument);
}

TEST_CASE("invariant checks catch tampering") {
  LatticeCluster c = make_seed_cluster();
  HarmonicField f = dla_harmonic_field(c, 16);
  dla_charges(c, f);

  LatticeCluster stray = c;
  stray.boundary[{7, 7}] = 0.0;
  CHECK_THROWS_AS(validate_cluster(stray), std::logic_error);

  LatticeCluster negative = c;
  negative.boundary.at({0, 1}) = -0.25;
  CHECK_THROWS_AS(validate_cluster(negative), std::logic_error);

  LatticeCluster skewed = c;
  skewed.boundary.at({0, 1}) = 0.5;
  CHECK_NOTHROW(validate_cluster(skewed));
  CHECK_THROWS_AS(validate_cluster(skewed, true), std::logic_error);

  LatticeCluster history = c;
  history.history.push_back({9, 9});
  CHECK_THROWS_AS(validate_cluster(history), std::logic_error);
}

TEST_CASE("one-particle run is just the seed") {
  DlaRun run = dla_grow(1, RngSeed{1, 0}, DlaMode::exact_charges);
  CHECK(run.cluster.occupied.size() == 1);
  CHECK(run.cluster.occupied.count({0, 0}) == 1);
}

TEST_CASE("small exact run is reproducible and conserves charge") {
  DlaRun a = dla_grow(60, RngSeed{42, 0}, DlaMode::exact_charges);
  DlaRun b = dla_grow(60, RngSeed{42, 0}, DlaMode::exact_charges);
  validate_cluster(a.cluster, true);
  CHECK(a.cluster.history == b.cluster.history);
  CHECK(a.worst_residual < 1e-8);
  CHECK(a.worst_charge_sum_error < 1e-9);
  CHECK(std::abs(charge_sum(a.cluster) - 1.0) < 1e-9);
}

TEST_CASE("walker clusters are dendritic and reproducible") {
  DlaRun run = dla_grow(2000, RngSeed{9, 1}, DlaMode::random_walker);
  validate_cluster(run.cluster);
  CHECK(run.cluster.occupied.size() == 2000);
  // a compact disk of 2000 sites has radius ~25; DLA should be much sparser
  CHECK(run.cluster.max_radius > 35.0);
  DlaRun again = dla_grow(2000, RngSeed{9, 1}, DlaMode::random_walker);
  CHECK(run.cluster.history == again.cluster.history);
}

TEST_CASE("cluster csv and svg artifacts") {
  DlaRun run = dla_grow(40, RngSeed{3, 3}, DlaMode::random_walker);
  const std::string csv = "/tmp/loewner_test_cluster.csv";
  save_cluster_csv(csv, run.cluster);
  LatticeCluster loaded = load_cluster_csv(csv);
  CHECK(loaded.history == run.cluster.history);
  CHECK(loaded.boundary.size() == run.cluster.boundary.size());
  save_cluster_svg("/tmp/loewner_test_cluster.svg", run.cluster);
  CHECK_THROWS_AS(load_cluster_csv("/tmp/loewner_no_such_cluster.csv"),
                  std::runtime_error);
  std::remove(csv.c_str());
  std::remove("/tmp/loewner_test_cluster.svg");
}

TEST_SUITE_END();
