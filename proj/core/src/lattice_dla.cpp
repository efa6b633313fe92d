#include "loewner/lattice_dla.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "loewner/csv.hpp"
#include "loewner/svg.hpp"

namespace loewner {

namespace {

constexpr std::uint8_t kFree = 0;
constexpr std::uint8_t kZero = 1;
constexpr std::uint8_t kEdge = 2;
constexpr double kInvFourPi = 0.079577471545947667884;

std::uint64_t pack_site(LatticeSite s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.m)) << 32) |
         static_cast<std::uint32_t>(s.n);
}

double far_field(int m, int n) {
  double r2 = static_cast<double>(m) * m + static_cast<double>(n) * n;
  return -kInvFourPi * std::log(r2);
}

std::array<LatticeSite, 4> neighbors(LatticeSite s) {
  return {LatticeSite{s.m + 1, s.n}, LatticeSite{s.m - 1, s.n},
          LatticeSite{s.m, s.n + 1}, LatticeSite{s.m, s.n - 1}};
}

std::vector<LatticeSite> sorted_boundary(const LatticeCluster& cluster) {
  std::vector<LatticeSite> sites;
  sites.reserve(cluster.boundary.size());
  for (const auto& [site, charge] : cluster.boundary) sites.push_back(site);
  std::sort(sites.begin(), sites.end(), [](LatticeSite a, LatticeSite b) {
    return a.m != b.m ? a.m < b.m : a.n < b.n;
  });
  return sites;
}

// One multigrid level: the error equation A e = r on a box of half-width L,
// where A is the 5-point negative Laplacian restricted to free sites.
struct MgLevel {
  int L = 0;
  std::size_t side = 0;
  std::vector<std::uint8_t> mask;
  std::vector<double> e, r, scratch;
};

// All stencil sums are grouped as (m-neighbor pair) + (n-neighbor pair).
// The two groups swap under lattice rotations and reflections, and floating
// addition is commutative, so symmetric configurations stay bit-exactly
// symmetric (red-black passes read only the frozen opposite color).
inline double stencil_sum(const std::vector<double>& v, std::size_t idx,
                          std::size_t side) {
  return (v[idx - side] + v[idx + side]) + (v[idx - 1] + v[idx + 1]);
}

// Red-black Gauss-Seidel pass on A e = r over sites of one parity.
void smooth_color(MgLevel& lv, int parity) {
  const std::size_t side = lv.side;
  for (std::size_t i = 1; i + 1 < side; ++i) {
    std::size_t j = 1 + ((i + static_cast<std::size_t>(parity)) & 1);
    for (std::size_t idx = i * side + j; j + 1 < side; j += 2, idx += 2) {
      if (lv.mask[idx] == kFree) {
        lv.e[idx] = (stencil_sum(lv.e, idx, side) + lv.r[idx]) * 0.25;
      }
    }
  }
}

void smooth(MgLevel& lv, bool red_first) {
  smooth_color(lv, red_first ? 0 : 1);
  smooth_color(lv, red_first ? 1 : 0);
}

// scratch = r - A e on free sites, zero elsewhere.
void level_residual(MgLevel& lv) {
  const std::size_t side = lv.side;
  std::fill(lv.scratch.begin(), lv.scratch.end(), 0.0);
  for (std::size_t i = 1; i + 1 < side; ++i) {
    for (std::size_t j = 1; j + 1 < side; ++j) {
      std::size_t idx = i * side + j;
      if (lv.mask[idx] == kFree) {
        lv.scratch[idx] =
            (stencil_sum(lv.e, idx, side) - 4.0 * lv.e[idx]) + lv.r[idx];
      }
    }
  }
}

// Full weighting of the fine scratch residual into the coarse rhs.
void restrict_residual(const MgLevel& fine, MgLevel& coarse) {
  const std::size_t fs = fine.side;
  std::fill(coarse.r.begin(), coarse.r.end(), 0.0);
  for (int I = -coarse.L; I <= coarse.L; ++I) {
    for (int J = -coarse.L; J <= coarse.L; ++J) {
      std::size_t cidx = static_cast<std::size_t>(I + coarse.L) * coarse.side +
                         static_cast<std::size_t>(J + coarse.L);
      if (coarse.mask[cidx] != kFree) continue;
      std::size_t f = static_cast<std::size_t>(2 * I + fine.L) * fs +
                      static_cast<std::size_t>(2 * J + fine.L);
      double edges = (fine.scratch[f - fs] + fine.scratch[f + fs]) +
                     (fine.scratch[f - 1] + fine.scratch[f + 1]);
      double corners = (fine.scratch[f - fs - 1] + fine.scratch[f + fs + 1]) +
                       (fine.scratch[f - fs + 1] + fine.scratch[f + fs - 1]);
      coarse.r[cidx] = (4.0 * fine.scratch[f] + 2.0 * edges + corners) / 16.0;
    }
  }
}

// Bilinear prolongation of the coarse error added into the fine error.
void prolong_add(const MgLevel& coarse, MgLevel& fine) {
  const std::size_t fs = fine.side;
  const std::size_t cs = coarse.side;
  auto cval = [&](int I, int J) -> double {
    if (std::abs(I) > coarse.L || std::abs(J) > coarse.L) return 0.0;
    return coarse.e[static_cast<std::size_t>(I + coarse.L) * cs +
                    static_cast<std::size_t>(J + coarse.L)];
  };
  for (int m = -fine.L; m <= fine.L; ++m) {
    int I = m >= 0 ? m / 2 : -((-m + 1) / 2);
    bool m_even = (m & 1) == 0;
    int I2 = m >= 0 ? (m + 1) / 2 : -((-m) / 2);
    for (int n = -fine.L; n <= fine.L; ++n) {
      std::size_t idx = static_cast<std::size_t>(m + fine.L) * fs +
                        static_cast<std::size_t>(n + fine.L);
      if (fine.mask[idx] != kFree) continue;
      int J = n >= 0 ? n / 2 : -((-n + 1) / 2);
      int J2 = n >= 0 ? (n + 1) / 2 : -((-n) / 2);
      bool n_even = (n & 1) == 0;
      double add;
      if (m_even && n_even) {
        add = cval(I, J);
      } else if (m_even) {
        add = 0.5 * (cval(I, J) + cval(I, J2));
      } else if (n_even) {
        add = 0.5 * (cval(I, J) + cval(I2, J));
      } else {
        add = 0.25 * ((cval(I, J) + cval(I2, J2)) + (cval(I2, J) + cval(I, J2)));
      }
      fine.e[idx] += add;
    }
  }
}

void v_cycle(std::vector<MgLevel>& levels, std::size_t k) {
  MgLevel& lv = levels[k];
  std::fill(lv.e.begin(), lv.e.end(), 0.0);
  if (k + 1 == levels.size()) {
    for (int sweep = 0; sweep < 100; ++sweep) smooth(lv, true);
    return;
  }
  smooth(lv, true);
  smooth(lv, true);
  level_residual(lv);
  restrict_residual(lv, levels[k + 1]);
  v_cycle(levels, k + 1);
  prolong_add(levels[k + 1], lv);
  smooth(lv, false);
  smooth(lv, false);
}

std::vector<MgLevel> build_levels(const std::vector<std::uint8_t>& fine_mask,
                                  int L) {
  std::vector<MgLevel> levels;
  levels.push_back(MgLevel{L, 2 * static_cast<std::size_t>(L) + 1, fine_mask,
                           {}, {}, {}});
  while (levels.back().L % 2 == 0 && levels.back().L > 8) {
    const MgLevel& f = levels.back();
    MgLevel c;
    c.L = f.L / 2;
    c.side = 2 * static_cast<std::size_t>(c.L) + 1;
    c.mask.assign(c.side * c.side, kZero);
    for (int I = -c.L; I <= c.L; ++I) {
      for (int J = -c.L; J <= c.L; ++J) {
        std::size_t fidx = static_cast<std::size_t>(2 * I + f.L) * f.side +
                           static_cast<std::size_t>(2 * J + f.L);
        c.mask[static_cast<std::size_t>(I + c.L) * c.side +
               static_cast<std::size_t>(J + c.L)] =
            f.mask[fidx] == kFree ? kFree : kZero;
      }
    }
    levels.push_back(std::move(c));
  }
  for (MgLevel& lv : levels) {
    lv.e.assign(lv.side * lv.side, 0.0);
    lv.r.assign(lv.side * lv.side, 0.0);
    lv.scratch.assign(lv.side * lv.side, 0.0);
  }
  return levels;
}

}  // namespace

std::size_t LatticeSiteHash::operator()(const LatticeSite& s) const noexcept {
  std::uint64_t x = pack_site(s) + 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return static_cast<std::size_t>(x ^ (x >> 31));
}

LatticeCluster make_seed_cluster() {
  LatticeCluster cluster;
  LatticeSite seed{0, 0};
  cluster.occupied.insert(seed);
  cluster.history.push_back(seed);
  for (LatticeSite nb : neighbors(seed)) cluster.boundary.emplace(nb, 0.0);
  return cluster;
}

void add_site(LatticeCluster& cluster, LatticeSite site) {
  auto it = cluster.boundary.find(site);
  if (it == cluster.boundary.end()) {
    throw std::invalid_argument("add_site: can only grow at a boundary site");
  }
  cluster.boundary.erase(it);
  cluster.occupied.insert(site);
  cluster.history.push_back(site);
  cluster.max_radius = std::max(
      cluster.max_radius, std::hypot(static_cast<double>(site.m),
                                     static_cast<double>(site.n)));
  for (LatticeSite nb : neighbors(site)) {
    if (!cluster.occupied.count(nb)) cluster.boundary.emplace(nb, 0.0);
  }
}

void validate_cluster(const LatticeCluster& cluster, bool require_charges) {
  SiteSet expected;
  for (const LatticeSite& s : cluster.occupied) {
    for (LatticeSite nb : neighbors(s)) {
      if (!cluster.occupied.count(nb)) expected.insert(nb);
    }
  }
  if (expected.size() != cluster.boundary.size()) {
    throw std::logic_error("cluster invariant: boundary set size mismatch");
  }
  double total = 0.0;
  for (const auto& [site, charge] : cluster.boundary) {
    if (!expected.count(site)) {
      throw std::logic_error("cluster invariant: stray boundary site");
    }
    if (charge < 0.0) {
      throw std::logic_error("cluster invariant: negative charge");
    }
    total += charge;
  }
  if (cluster.history.size() != cluster.occupied.size()) {
    throw std::logic_error("cluster invariant: history size mismatch");
  }
  if (require_charges && std::abs(total - 1.0) > 1e-9) {
    throw std::logic_error("cluster invariant: charges do not sum to 1");
  }
}

std::size_t HarmonicField::index(int m, int n) const {
  if (std::abs(m) > box_radius || std::abs(n) > box_radius) {
    throw std::out_of_range("harmonic field: site outside the box");
  }
  return static_cast<std::size_t>(m + box_radius) * side() +
         static_cast<std::size_t>(n + box_radius);
}

double HarmonicField::at(int m, int n) const { return values[index(m, n)]; }

HarmonicField dla_harmonic_field(const LatticeCluster& cluster, int box_radius,
                                 const HarmonicField* warm_start,
                                 double tolerance) {
  if (cluster.occupied.empty()) {
    throw std::invalid_argument("dla_harmonic_field: empty cluster");
  }
  if (box_radius < 8 ||
      box_radius < static_cast<int>(4.0 * cluster.max_radius)) {
    throw std::invalid_argument(
        "dla_harmonic_field: box half-width must be at least 8 and at least "
        "four times the cluster radius");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("dla_harmonic_field: tolerance must be positive");
  }

  const int L = box_radius;
  HarmonicField field;
  field.box_radius = L;
  const std::size_t side = field.side();
  field.mask.assign(side * side, kFree);
  field.values.assign(side * side, 0.0);

  auto idx_of = [&](int m, int n) {
    return static_cast<std::size_t>(m + L) * side + static_cast<std::size_t>(n + L);
  };

  // Initial guess: previous field where available, continuum far field
  // elsewhere; Dirichlet data overwrites both below.
  for (int m = -L; m <= L; ++m) {
    for (int n = -L; n <= L; ++n) {
      if (m == 0 && n == 0) continue;
      field.values[idx_of(m, n)] = far_field(m, n);
    }
  }
  if (warm_start != nullptr) {
    int Lw = warm_start->box_radius;
    int overlap = std::min(L, Lw);
    for (int m = -overlap; m <= overlap; ++m) {
      for (int n = -overlap; n <= overlap; ++n) {
        field.values[idx_of(m, n)] =
            warm_start->values[static_cast<std::size_t>(m + Lw) *
                                   warm_start->side() +
                               static_cast<std::size_t>(n + Lw)];
      }
    }
  }

  for (const LatticeSite& s : cluster.occupied) {
    if (std::max(std::abs(s.m), std::abs(s.n)) > L - 4) {
      throw std::invalid_argument("dla_harmonic_field: cluster too close to the box edge");
    }
    field.mask[idx_of(s.m, s.n)] = kZero;
  }
  for (const auto& [s, charge] : cluster.boundary) {
    field.mask[idx_of(s.m, s.n)] = kZero;
  }
  for (int m = -L; m <= L; ++m) {
    for (int n = -L; n <= L; ++n) {
      if (std::max(std::abs(m), std::abs(n)) == L) {
        std::size_t idx = idx_of(m, n);
        field.mask[idx] = kEdge;
        field.values[idx] = far_field(m, n);
      }
    }
  }
  for (std::size_t i = 0; i < side * side; ++i) {
    if (field.mask[i] == kZero) field.values[i] = 0.0;
  }

  // After a single growth step the warm start is exact except near the
  // newly occupied site, where forcing the new Dirichlet zeros leaves a
  // residual spike.  Relaxing a small patch around each changed site first
  // absorbs the spike locally, so the global solve only has to polish a
  // smooth, small correction.
  if (warm_start != nullptr && warm_start->box_radius == L) {
    for (int m = -L + 1; m < L; ++m) {
      for (int n = -L + 1; n < L; ++n) {
        std::size_t idx = idx_of(m, n);
        if (field.mask[idx] != kZero || warm_start->mask[idx] != kFree) continue;
        const int patch = 24;
        int m_lo = std::max(m - patch, -L + 1), m_hi = std::min(m + patch, L - 1);
        int n_lo = std::max(n - patch, -L + 1), n_hi = std::min(n + patch, L - 1);
        for (int sweep = 0; sweep < 96; ++sweep) {
          for (int parity = 0; parity < 2; ++parity) {
            for (int i = m_lo; i <= m_hi; ++i) {
              int j0 = n_lo + (((i + n_lo + parity) & 1) != 0 ? 1 : 0);
              for (int j = j0; j <= n_hi; j += 2) {
                std::size_t p = idx_of(i, j);
                if (field.mask[p] == kFree) {
                  field.values[p] = stencil_sum(field.values, p, side) * 0.25;
                }
              }
            }
          }
        }
      }
    }
  }

  std::vector<MgLevel> levels = build_levels(field.mask, L);

  // Residual of the full problem: b - A x folded into the grid with the
  // Dirichlet values held in place.
  std::vector<double> r(side * side, 0.0);
  std::vector<double> p(side * side, 0.0);
  std::vector<double> ap(side * side, 0.0);
  auto compute_residual = [&]() {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < side; ++i) {
      for (std::size_t j = 1; j + 1 < side; ++j) {
        std::size_t idx = i * side + j;
        if (field.mask[idx] != kFree) {
          r[idx] = 0.0;
          continue;
        }
        r[idx] = stencil_sum(field.values, idx, side) - 4.0 * field.values[idx];
        worst = std::max(worst, std::abs(r[idx]));
      }
    }
    return worst;
  };
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };
  auto precondition = [&]() {
    MgLevel& top = levels.front();
    top.r = r;
    v_cycle(levels, 0);
    return top.e;  // copy out; levels reuse their buffers next call
  };

  double max_r = compute_residual();
  double rz = 0.0;
  const std::size_t max_iterations = 500;
  while (max_r > tolerance) {
    if (field.iterations >= max_iterations) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "dla_harmonic_field: no convergence after %zu iterations "
                    "(residual %.3e, tolerance %.3e)",
                    field.iterations, max_r, tolerance);
      throw std::runtime_error(msg);
    }
    std::vector<double> z = precondition();
    double rz_new = dot(r, z);
    if (field.iterations == 0 || rz_new <= 0.0 || rz <= 0.0) {
      p = z;
    } else {
      double beta = rz_new / rz;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    rz = rz_new;

    for (std::size_t i = 1; i + 1 < side; ++i) {
      for (std::size_t j = 1; j + 1 < side; ++j) {
        std::size_t idx = i * side + j;
        ap[idx] = field.mask[idx] == kFree
                      ? 4.0 * p[idx] - stencil_sum(p, idx, side)
                      : 0.0;
      }
    }
    double p_ap = dot(p, ap);
    if (!(p_ap > 0.0)) {
      throw std::runtime_error("dla_harmonic_field: preconditioned system lost "
                               "positive definiteness");
    }
    double alpha = rz / p_ap;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
      if (field.mask[i] == kFree) field.values[i] += alpha * p[i];
    }
    ++field.iterations;
    max_r = compute_residual();
  }
  field.residual = max_r;
  return field;
}

void dla_charges(LatticeCluster& cluster, const HarmonicField& field) {
  const std::size_t side = field.side();
  std::vector<LatticeSite> sites = sorted_boundary(cluster);
  std::vector<double> raw(sites.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    LatticeSite s = sites[k];
    std::size_t idx = field.index(s.m, s.n);
    if (field.mask[idx] != kZero) {
      throw std::invalid_argument("dla_charges: field does not match cluster");
    }
    // Discrete inward flux, grouped by axis like every other stencil sum.
    // The discrete maximum principle bounds the exact solution by the
    // Dirichlet value 0, so positive excursions at strongly screened sites
    // are solver round-off; clipping them keeps every flux nonnegative.
    auto pull = [&](std::size_t nb) {
      return field.mask[nb] == kFree ? std::max(0.0, -field.values[nb]) : 0.0;
    };
    raw[k] = (pull(idx - side) + pull(idx + side)) + (pull(idx - 1) + pull(idx + 1));
    total += raw[k];
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("dla_charges: total boundary flux is not positive");
  }
  for (std::size_t k = 0; k < sites.size(); ++k) {
    cluster.boundary[sites[k]] = raw[k] / total;
  }
}

namespace {

// Smallest half-width of the form b * 2^a (8 <= b <= 15) covering `needed`,
// so the multigrid hierarchy bottoms out on a small grid.
int multigrid_box(int needed) {
  int best = std::numeric_limits<int>::max();
  for (int b = 8; b <= 15; ++b) {
    int candidate = b;
    while (candidate < needed && candidate < (1 << 24)) candidate *= 2;
    best = std::min(best, candidate);
  }
  return best;
}

LatticeSite sample_boundary_site(const LatticeCluster& cluster, double u) {
  std::vector<LatticeSite> sites = sorted_boundary(cluster);
  double acc = 0.0;
  for (const LatticeSite& s : sites) {
    acc += cluster.boundary.at(s);
    if (u < acc) return s;
  }
  return sites.back();
}

}  // namespace

DlaRun dla_grow(std::size_t n_particles, RngSeed seed, DlaMode mode) {
  if (n_particles == 0) {
    throw std::invalid_argument("dla_grow: need at least one particle");
  }
  DlaRun run;
  run.seed = seed;
  run.mode = mode;
  run.cluster = make_seed_cluster();
  CounterRng rng(seed);

  if (mode == DlaMode::exact_charges) {
    HarmonicField field;
    bool warm = false;
    auto charge_sum_error = [&]() {
      double total = 0.0;
      for (const auto& [site, charge] : run.cluster.boundary) total += charge;
      return std::abs(total - 1.0);
    };
    auto solve_and_charge = [&]() {
      int needed = std::max(8, static_cast<int>(4.0 * run.cluster.max_radius) + 4);
      int L = multigrid_box(needed);
      if (L > 4096) {
        throw std::runtime_error("dla_grow: box exhaustion (cluster outgrew the "
                                 "4096 half-width safety margin)");
      }
      field = dla_harmonic_field(run.cluster, L, warm ? &field : nullptr);
      warm = true;
      run.worst_residual = std::max(run.worst_residual, field.residual);
      run.total_field_iterations += field.iterations;
      dla_charges(run.cluster, field);
      run.worst_charge_sum_error =
          std::max(run.worst_charge_sum_error, charge_sum_error());
    };
    while (run.cluster.step() < n_particles) {
      solve_and_charge();
      add_site(run.cluster, sample_boundary_site(run.cluster, rng.next_double()));
    }
    // Leave the returned cluster with charges consistent with its final
    // shape rather than the pre-growth distribution.
    solve_and_charge();
    return run;
  }

  while (run.cluster.step() < n_particles) {
    double launch_radius = run.cluster.max_radius + 5.0;
    double kill2 = 100.0 * launch_radius * 100.0 * launch_radius;
    double theta = rng.next_uniform(0.0, 6.2831853071795864769);
    LatticeSite w{static_cast<int>(std::lround(launch_radius * std::cos(theta))),
                  static_cast<int>(std::lround(launch_radius * std::sin(theta)))};
    for (;;) {
      double r = std::hypot(static_cast<double>(w.m), static_cast<double>(w.n));
      if (r * r > kill2) {
        theta = rng.next_uniform(0.0, 6.2831853071795864769);
        w.m = static_cast<int>(std::lround(launch_radius * std::cos(theta)));
        w.n = static_cast<int>(std::lround(launch_radius * std::sin(theta)));
        continue;
      }
      if (r > launch_radius + 4.0) {
        // Far from the cluster the walk only matters through where it
        // re-enters the launch region, so take the exit point of the
        // largest cluster-free disk in one stroke (uniform direction, the
        // Brownian exit law) instead of simulating every lattice step.
        double jump = r - launch_radius - 2.0;
        theta = rng.next_uniform(0.0, 6.2831853071795864769);
        w.m += static_cast<int>(std::lround(jump * std::cos(theta)));
        w.n += static_cast<int>(std::lround(jump * std::sin(theta)));
        continue;
      }
      switch (rng.next_u64() & 3u) {
        case 0: ++w.m; break;
        case 1: --w.m; break;
        case 2: ++w.n; break;
        default: --w.n; break;
      }
      if (run.cluster.boundary.count(w)) {
        add_site(run.cluster, w);
        break;
      }
    }
  }
  return run;
}

void save_cluster_csv(const std::string& path, const LatticeCluster& cluster) {
  CsvTable table;
  table.header = {"step", "m", "n"};
  for (std::size_t i = 0; i < cluster.history.size(); ++i) {
    table.rows.push_back({static_cast<double>(i),
                          static_cast<double>(cluster.history[i].m),
                          static_cast<double>(cluster.history[i].n)});
  }
  write_csv(path, table);
}

LatticeCluster load_cluster_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  if (table.rows.empty()) {
    throw std::runtime_error("load_cluster_csv: no sites in " + path);
  }
  LatticeCluster cluster;
  for (const auto& row : table.rows) {
    if (row.size() != 3) {
      throw std::runtime_error("load_cluster_csv: malformed row");
    }
    LatticeSite s{static_cast<int>(row[1]), static_cast<int>(row[2])};
    if (cluster.occupied.empty()) {
      cluster.occupied.insert(s);
      cluster.history.push_back(s);
      cluster.max_radius = std::hypot(static_cast<double>(s.m),
                                      static_cast<double>(s.n));
      for (LatticeSite nb : neighbors(s)) cluster.boundary.emplace(nb, 0.0);
    } else {
      add_site(cluster, s);
    }
  }
  return cluster;
}

void save_cluster_svg(const std::string& path, const LatticeCluster& cluster) {
  double extent = cluster.max_radius + 2.0;
  SvgWriter svg(-extent, -extent, extent, extent);
  double denom = cluster.history.size() > 1
                     ? static_cast<double>(cluster.history.size() - 1)
                     : 1.0;
  for (std::size_t i = 0; i < cluster.history.size(); ++i) {
    const LatticeSite& s = cluster.history[i];
    svg.add_rect(s.m - 0.5, s.n - 0.5, 1.0, 1.0,
                 heat_color(static_cast<double>(i) / denom));
  }
  svg.save(path);
}

}  // namespace loewner
