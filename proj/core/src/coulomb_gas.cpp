#include "loewner/coulomb_gas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "loewner/csv.hpp"
#include "loewner/svg.hpp"
#include "loewner/tau_functions.hpp"

namespace loewner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.2831853071795864769;

double pair_energy(GasKernel kernel, cplx a, cplx b) {
  if (a == b) return kInf;
  if (kernel == GasKernel::plane) return -2.0 * std::log(std::abs(a - b));
  if (!(a.imag() > 0.0) || !(b.imag() > 0.0)) return kInf;
  return kp_phase_shift(a, b);
}

// Harmonic deformation V(z) = sum_k (t_k z^k + conj(t_k) zbar^k), written as
// twice the real part of the analytic half.
double harmonic_potential(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc = 0.0;
  cplx power = 1.0;
  for (const cplx& t : coeffs) {
    power *= z;
    acc += t * power;
  }
  return 2.0 * acc.real();
}

// Estimated droplet radius in the quadratic well: area pi*hbar*N /
// confinement_scale, so r = sqrt(hbar*N / confinement_scale).
double droplet_radius_estimate(const GasState& state) {
  double n = static_cast<double>(std::max<std::size_t>(state.positions.size(), 1));
  return std::sqrt(state.hbar * n / state.confinement_scale);
}

// Total energy of one particle against all the others plus its confinement.
// Skipping index `skip` lets the sampler form O(N) energy differences.
double particle_energy(const GasState& state, cplx z, std::size_t skip) {
  double acc = confinement_energy(state, z);
  if (acc == kInf) return kInf;
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    if (j == skip) continue;
    acc += pair_energy(state.kernel, z, state.positions[j]);
    if (acc == kInf) return kInf;
  }
  return acc;
}

}  // namespace

void validate_gas_state(const GasState& state) {
  if (!(state.hbar > 0.0) || !std::isfinite(state.hbar)) {
    throw std::invalid_argument("gas state: hbar must be positive and finite");
  }
  if (!(state.confinement_scale > 0.0) || !std::isfinite(state.confinement_scale)) {
    throw std::invalid_argument(
        "gas state: confinement_scale must be positive and finite");
  }
  for (const cplx& z : state.positions) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("gas state: positions must be finite");
    }
    if (state.kernel == GasKernel::half_plane && !(z.imag() > 0.0)) {
      throw std::invalid_argument(
          "gas state: half-plane kernel requires Im z > 0 for every particle");
    }
  }
  for (const cplx& t : state.potential_coeffs) {
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
      throw std::invalid_argument("gas state: potential coefficients must be finite");
    }
  }
  if (!state.potential_coeffs.empty()) {
    // Admissibility: the confining |z|^2 must dominate the harmonic
    // deformation out to twice the expected droplet radius, otherwise the
    // sampling weight is not normalizable.
    double radius = 2.0 * std::max(droplet_radius_estimate(state),
                                   std::sqrt(state.hbar));
    double worst = 0.0;
    const std::size_t kAngles = 64;
    for (std::size_t i = 0; i < kAngles; ++i) {
      double theta = kTwoPi * static_cast<double>(i) / kAngles;
      cplx z = radius * cplx(std::cos(theta), std::sin(theta));
      worst = std::max(worst, std::abs(harmonic_potential(state.potential_coeffs, z)));
    }
    if (worst >= 0.5 * radius * radius) {
      throw std::invalid_argument(
          "gas state: harmonic deformation exceeds half the confining term on "
          "the sampling disk; reduce |t_k|");
    }
  }
}

double confinement_energy(const GasState& state, cplx z) {
  if (state.kernel == GasKernel::half_plane && !(z.imag() > 0.0)) return kInf;
  double v = harmonic_potential(state.potential_coeffs, z);
  return state.confinement_scale / state.hbar * (std::norm(z) + v);
}

double energy(const GasState& state) {
  double acc = 0.0;
  const std::size_t n = state.positions.size();
  for (std::size_t i = 0; i < n; ++i) {
    acc += confinement_energy(state, state.positions[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      acc += pair_energy(state.kernel, state.positions[i], state.positions[j]);
    }
    if (acc == kInf) return kInf;
  }
  return acc;
}

MetropolisResult metropolis_run(GasState state, const MetropolisOptions& options,
                                RngSeed seed) {
  validate_gas_state(state);
  if (options.sweeps == 0) {
    throw std::invalid_argument("metropolis_run: sweeps must be at least 1");
  }
  if (options.thin == 0) {
    throw std::invalid_argument("metropolis_run: thin must be at least 1");
  }
  if (state.positions.empty()) {
    throw std::invalid_argument("metropolis_run: no particles");
  }

  state.energy_cache = energy(state);
  if (state.energy_cache == kInf) {
    throw std::invalid_argument("metropolis_run: initial configuration has "
                                "coincident particles");
  }

  MetropolisResult result;
  double scale = options.proposal_scale > 0.0 ? options.proposal_scale
                                              : std::sqrt(state.hbar);
  CounterRng rng(seed);
  const std::size_t n = state.positions.size();
  const std::size_t total_sweeps = options.burn_in + options.sweeps;

  std::size_t window_accepts = 0;
  std::size_t window_proposals = 0;
  std::size_t accepts = 0;         // post-burn-in
  std::size_t proposals = 0;       // post-burn-in
  const std::size_t kTuneWindow = 50;

  for (std::size_t sweep = 0; sweep < total_sweeps; ++sweep) {
    const bool burning = sweep < options.burn_in;
    for (std::size_t i = 0; i < n; ++i) {
      cplx old_z = state.positions[i];
      cplx new_z = old_z + scale * cplx(rng.next_normal(), rng.next_normal());
      double e_old = particle_energy(state, old_z, i);
      double e_new = particle_energy(state, new_z, i);
      double delta = e_new - e_old;
      bool accept = false;
      if (delta <= 0.0) {
        accept = true;
      } else if (delta < kInf) {
        accept = rng.next_double() < std::exp(-delta);
      }
      if (accept) {
        state.positions[i] = new_z;
        state.energy_cache += delta;
      }
      if (burning) {
        window_accepts += accept ? 1 : 0;
        ++window_proposals;
      } else {
        accepts += accept ? 1 : 0;
        ++proposals;
      }
    }

    if (burning && options.auto_tune && (sweep + 1) % kTuneWindow == 0 &&
        window_proposals > 0) {
      double rate = static_cast<double>(window_accepts) / window_proposals;
      if (rate > 0.5) {
        scale *= 1.3;
      } else if (rate < 0.3) {
        scale /= 1.3;
      }
      window_accepts = 0;
      window_proposals = 0;
    }

    if ((sweep + 1) % options.recheck_interval == 0) {
      double full = energy(state);
      result.max_cache_error =
          std::max(result.max_cache_error, std::abs(full - state.energy_cache));
      state.energy_cache = full;
    }

    if (!burning) {
      std::size_t kept = sweep - options.burn_in + 1;
      if (kept % options.thin == 0) {
        result.chain.push_back(state.positions);
      }
    }
  }

  double full = energy(state);
  result.max_cache_error =
      std::max(result.max_cache_error, std::abs(full - state.energy_cache));
  state.energy_cache = full;

  result.state = std::move(state);
  result.acceptance_rate =
      proposals > 0 ? static_cast<double>(accepts) / proposals : 0.0;
  result.proposal_scale = scale;
  result.low_acceptance = result.acceptance_rate < 0.01;
  return result;
}

DropletStats droplet_stats(const std::vector<std::vector<cplx>>& chain,
                           std::size_t bins, double hbar, std::size_t sectors) {
  if (chain.empty()) {
    throw std::invalid_argument("droplet_stats: empty chain");
  }
  if (bins == 0) {
    throw std::invalid_argument("droplet_stats: bins must be at least 1");
  }
  if (sectors < 8) {
    throw std::invalid_argument("droplet_stats: need at least 8 angular sectors");
  }
  if (!(hbar > 0.0)) {
    throw std::invalid_argument("droplet_stats: hbar must be positive");
  }

  const std::size_t first = chain.size() / 2;
  const std::size_t used = chain.size() - first;
  std::vector<double> radii;
  std::vector<std::vector<std::size_t>> sector_counts(
      sectors, std::vector<std::size_t>(bins, 0));
  for (std::size_t s = first; s < chain.size(); ++s) {
    for (const cplx& z : chain[s]) radii.push_back(std::abs(z));
  }
  if (radii.empty()) {
    throw std::invalid_argument("droplet_stats: chain snapshots are empty");
  }
  std::sort(radii.begin(), radii.end());

  DropletStats stats;
  {
    auto idx = static_cast<std::size_t>(0.99 * (radii.size() - 1) + 0.5);
    stats.mass_radius = radii[std::min(idx, radii.size() - 1)];
  }

  double r_edge = radii.back() * (1.0 + 1e-9);
  if (r_edge <= 0.0) r_edge = 1.0;
  std::vector<std::size_t> counts(bins, 0);
  auto bin_of = [&](double r) {
    auto bin = static_cast<std::size_t>(r / r_edge * bins);
    return std::min(bin, bins - 1);
  };
  for (std::size_t s = first; s < chain.size(); ++s) {
    for (const cplx& z : chain[s]) {
      std::size_t bin = bin_of(std::abs(z));
      ++counts[bin];
      double theta = std::arg(z);
      if (theta < 0.0) theta += kTwoPi;
      auto sector = static_cast<std::size_t>(theta / kTwoPi * sectors);
      if (sector >= sectors) sector = sectors - 1;
      ++sector_counts[sector][bin];
    }
  }

  stats.radii.resize(bins);
  std::vector<double> annulus_area(bins);
  stats.density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    double r_lo = r_edge * static_cast<double>(b) / bins;
    double r_hi = r_edge * static_cast<double>(b + 1) / bins;
    annulus_area[b] = (r_hi * r_hi - r_lo * r_lo) * kTwoPi / 2.0;
    stats.radii[b] = 0.5 * (r_lo + r_hi);
    stats.density[b] = kTwoPi * hbar * static_cast<double>(counts[b]) /
                       (static_cast<double>(used) * annulus_area[b]);
  }

  // Interior plateau: median density over the bins well inside the 99% mass
  // radius.  The median shrugs off the noisy innermost annuli.
  std::vector<double> interior;
  for (std::size_t b = 0; b < bins; ++b) {
    if (stats.radii[b] < 0.6 * stats.mass_radius) interior.push_back(stats.density[b]);
  }
  double plateau;
  if (interior.empty()) {
    plateau = *std::max_element(stats.density.begin(), stats.density.end());
  } else {
    std::sort(interior.begin(), interior.end());
    plateau = interior[interior.size() / 2];
  }

  // Outward scan for the radius where a profile drops through half the
  // plateau, with linear interpolation between bin centers.
  auto half_crossing = [&](const std::vector<double>& profile) {
    double half = 0.5 * plateau;
    std::size_t start = 0;
    while (start + 1 < bins && stats.radii[start] < 0.3 * stats.mass_radius) ++start;
    for (std::size_t b = start; b + 1 < bins; ++b) {
      if (profile[b] >= half && profile[b + 1] < half) {
        double frac = (profile[b] - half) / (profile[b] - profile[b + 1]);
        return stats.radii[b] + frac * (stats.radii[b + 1] - stats.radii[b]);
      }
    }
    return stats.mass_radius;
  };
  stats.support_radius = half_crossing(stats.density);

  std::vector<double> sector_profile(bins);
  for (std::size_t s = 0; s < sectors; ++s) {
    std::size_t total = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      total += sector_counts[s][b];
      sector_profile[b] =
          kTwoPi * hbar * static_cast<double>(sector_counts[s][b]) * sectors /
          (static_cast<double>(used) * annulus_area[b]);
    }
    if (total == 0) continue;
    double r = half_crossing(sector_profile);
    double theta = kTwoPi * (static_cast<double>(s) + 0.5) / sectors;
    stats.boundary.push_back(r * cplx(std::cos(theta), std::sin(theta)));
  }
  return stats;
}

double compare_to_hele_shaw(const std::vector<cplx>& boundary,
                            const LaurentMap& f, std::size_t map_samples) {
  if (boundary.size() < 3) {
    throw std::invalid_argument(
        "compare_to_hele_shaw: boundary estimate needs at least 3 points");
  }
  if (map_samples < 16) {
    throw std::invalid_argument("compare_to_hele_shaw: need at least 16 map samples");
  }
  validate_laurent_map(f);
  std::vector<cplx> curve = boundary_points(f, map_samples);

  auto segment_distance = [](cplx p, cplx a, cplx b) {
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a) * std::conj(ab)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
  };
  // Worst distance from the vertices of one closed polyline to the other
  // polyline's segments.
  auto one_sided = [&](const std::vector<cplx>& from, const std::vector<cplx>& to) {
    double worst = 0.0;
    for (const cplx& p : from) {
      double best = kInf;
      for (std::size_t j = 0; j < to.size(); ++j) {
        best = std::min(best, segment_distance(p, to[j], to[(j + 1) % to.size()]));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };

  double h = std::max(one_sided(boundary, curve), one_sided(curve, boundary));
  double radius = std::sqrt(std::abs(laurent_area(f)) / (kTwoPi / 2.0));
  if (radius <= 0.0) {
    throw std::invalid_argument("compare_to_hele_shaw: map encloses no area");
  }
  return h / radius;
}

void save_chain_csv(const std::string& path,
                    const std::vector<std::vector<cplx>>& chain) {
  CsvTable table;
  table.header = {"snapshot", "particle", "x", "y"};
  for (std::size_t s = 0; s < chain.size(); ++s) {
    for (std::size_t i = 0; i < chain[s].size(); ++i) {
      table.rows.push_back({static_cast<double>(s), static_cast<double>(i),
                            chain[s][i].real(), chain[s][i].imag()});
    }
  }
  write_csv(path, table);
}

void save_density_csv(const std::string& path, const DropletStats& stats) {
  CsvTable table;
  table.header = {"r", "density"};
  for (std::size_t b = 0; b < stats.radii.size(); ++b) {
    table.rows.push_back({stats.radii[b], stats.density[b]});
  }
  write_csv(path, table);
}

void save_gas_svg(const std::string& path, const std::vector<cplx>& positions,
                  const std::vector<cplx>& boundary,
                  const std::vector<cplx>& reference) {
  double extent = 1e-6;
  auto stretch = [&extent](const std::vector<cplx>& pts) {
    for (const cplx& z : pts) {
      extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
    }
  };
  stretch(positions);
  stretch(boundary);
  stretch(reference);
  extent *= 1.1;

  SvgWriter svg(-extent, -extent, extent, extent);
  auto polyline = [&svg](const std::vector<cplx>& pts, const std::string& color) {
    if (pts.size() < 2) return;
    std::vector<std::pair<double, double>> xy;
    xy.reserve(pts.size());
    for (const cplx& z : pts) xy.emplace_back(z.real(), z.imag());
    svg.add_polyline(xy, color, 1.5, /*closed=*/true);
  };
  for (const cplx& z : positions) {
    svg.add_circle(z.real(), z.imag(), extent / 200.0, "#1f4e8c");
  }
  polyline(boundary, "#c23b22");
  polyline(reference, "#2e8b57");
  svg.save(path);
}

}  // namespace loewner
