#include "loewner/tau_functions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace loewner {

namespace {

constexpr std::size_t kMaxSubsetSolitons = 24;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

/// Streaming subset sum over all 2^N lattice-gas configurations.
///
/// a_sigma = -E(sigma) is the log of one Hirota term. The caller receives
/// A = sum e^{a - shift}, B = sum s e^{a - shift}, C = sum s^2 e^{a - shift}
/// with s = d a/dx (only tracked for KdV data), so
///   log tau = shift + log A,   d^2_x log tau = (A C - B^2) / A^2.
struct SubsetSums {
  double shift = 0.0;
  double a = 1.0;  // the empty configuration contributes e^0
  double b = 0.0;
  double c = 0.0;
};

SubsetSums hirota_subset_sums(const SolitonData& data) {
  validate_soliton_data(data);
  const std::size_t n = data.size();
  if (n > kMaxSubsetSolitons) {
    throw std::invalid_argument("subset enumeration limited to 24 solitons");
  }

  std::vector<std::vector<double>> shifts;
  std::vector<double> phases;
  soliton_couplings(data, shifts, phases);
  const bool track_x = (data.kind == SolitonKind::kdv);

  SubsetSums sums;
  if (n == 0) return sums;

  // Gray-code walk: configuration i differs from i-1 in exactly one site, so
  // the energy and the occupied-neighbour sums update in O(N).
  std::vector<double> acc(n, 0.0);  // acc[j] = sum over occupied l of G[j][l]
  std::uint32_t bits = 0;
  double energy = 0.0;
  double slope = 0.0;  // sum of occupied momenta = d(-E)/dx for KdV
  const std::uint32_t count = std::uint32_t{1} << n;
  for (std::uint32_t i = 1; i < count; ++i) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(i));
    const double delta = phases[j] + acc[j];
    if (bits & (std::uint32_t{1} << j)) {
      bits &= ~(std::uint32_t{1} << j);
      energy -= delta;
      if (track_x) slope -= data.momenta[j];
      for (std::size_t m = 0; m < n; ++m) acc[m] -= shifts[m][j];
    } else {
      bits |= std::uint32_t{1} << j;
      energy += delta;
      if (track_x) slope += data.momenta[j];
      for (std::size_t m = 0; m < n; ++m) acc[m] += shifts[m][j];
    }

    const double log_term = -energy;
    if (log_term > sums.shift) {
      const double rescale = std::exp(sums.shift - log_term);
      sums.a *= rescale;
      sums.b *= rescale;
      sums.c *= rescale;
      sums.shift = log_term;
    }
    const double term = std::exp(log_term - sums.shift);
    sums.a += term;
    sums.b += slope * term;
    sums.c += slope * slope * term;
  }
  return sums;
}

double time_at(const SolitonData& data, std::size_t index) {
  return index < data.times.size() ? data.times[index] : 0.0;
}

}  // namespace

void validate_soliton_data(const SolitonData& data) {
  const std::size_t n = data.size();
  if (data.phases.size() != n) {
    throw std::invalid_argument("need one phase per soliton");
  }
  for (const double phi : data.phases) require_finite(phi, "phase");
  for (const double t : data.times) require_finite(t, "time");

  if (data.kind == SolitonKind::kdv) {
    if (!data.points.empty()) {
      throw std::invalid_argument("KdV data must not carry half-plane points");
    }
    for (const double k : data.momenta) {
      require_finite(k, "momentum");
      if (k <= 0.0) {
        throw std::invalid_argument("KdV momenta must be positive");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (data.momenta[i] == data.momenta[j]) {
          throw std::invalid_argument("KdV momenta must be distinct");
        }
      }
    }
  } else {
    if (!data.momenta.empty()) {
      throw std::invalid_argument("KP data must not carry real momenta");
    }
    for (const cplx z : data.points) {
      require_finite(z.real(), "point");
      require_finite(z.imag(), "point");
      if (z.imag() <= 0.0) {
        throw std::invalid_argument("KP points must lie in the open upper half-plane");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (data.points[i] == data.points[j]) {
          throw std::invalid_argument("KP points must be distinct");
        }
      }
    }
  }
}

double soliton_phase(const SolitonData& data, std::size_t l) {
  if (l >= data.size()) {
    throw std::invalid_argument("soliton index out of range");
  }
  if (data.kind == SolitonKind::kdv) {
    const double k = data.momenta[l];
    double theta = -data.phases[l] - k * time_at(data, 0);
    double power = k;  // k^{2j+1} for the time at slot j
    for (std::size_t j = 1; j < data.times.size(); ++j) {
      power *= k * k;
      theta += power * data.times[j];
    }
    return theta;
  }
  const cplx z = data.points[l];
  double theta = data.phases[l];
  cplx zm(1.0, 0.0);
  for (std::size_t m = 1; m <= data.times.size(); ++m) {
    zm *= z;
    const double coeff = (m % 2 == 1) ? 2.0 * zm.real() : 2.0 * zm.imag();
    theta += coeff * data.times[m - 1];
  }
  return theta;
}

double kdv_phase_shift(double k, double kp) {
  require_finite(k, "momentum");
  require_finite(kp, "momentum");
  if (k <= 0.0 || kp <= 0.0 || k == kp) {
    throw std::invalid_argument("phase shift needs distinct positive momenta");
  }
  return -2.0 * std::log(std::fabs(k - kp) / (k + kp));
}

double kp_phase_shift(cplx z, cplx zp) {
  if (z.imag() <= 0.0 || zp.imag() <= 0.0) {
    throw std::invalid_argument("phase shift points must lie in the upper half-plane");
  }
  if (z == zp) {
    throw std::invalid_argument("phase shift diverges at coincident points");
  }
  const cplx ratio = ((z - zp) * (std::conj(z) - std::conj(zp))) /
                     ((z - std::conj(zp)) * (std::conj(z) - zp));
  return -std::log(ratio).real();
}

double phase_shift(const SolitonData& data, std::size_t l, std::size_t lp) {
  if (l >= data.size() || lp >= data.size() || l == lp) {
    throw std::invalid_argument("phase shift needs two distinct soliton indices");
  }
  if (data.kind == SolitonKind::kdv) {
    return kdv_phase_shift(data.momenta[l], data.momenta[lp]);
  }
  return kp_phase_shift(data.points[l], data.points[lp]);
}

void soliton_couplings(const SolitonData& data,
                       std::vector<std::vector<double>>& shifts,
                       std::vector<double>& phases) {
  validate_soliton_data(data);
  const std::size_t n = data.size();
  shifts.assign(n, std::vector<double>(n, 0.0));
  phases.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    phases[l] = soliton_phase(data, l);
    for (std::size_t lp = l + 1; lp < n; ++lp) {
      const double g = phase_shift(data, l, lp);
      shifts[l][lp] = g;
      shifts[lp][l] = g;
    }
  }
}

double log_tau_hirota(const SolitonData& data) {
  const SubsetSums sums = hirota_subset_sums(data);
  return sums.shift + std::log(sums.a);
}

double tau_hirota(const SolitonData& data) { return std::exp(log_tau_hirota(data)); }

double kdv_potential(const SolitonData& data) {
  if (data.kind != SolitonKind::kdv) {
    throw std::invalid_argument("the x-derivative field is defined for KdV data");
  }
  const SubsetSums s = hirota_subset_sums(data);
  return -2.0 * (s.a * s.c - s.b * s.b) / (s.a * s.a);
}

LatticeGasEnergy lattice_gas_energy(const std::vector<int>& occupation,
                                    const std::vector<std::vector<double>>& shifts,
                                    const std::vector<double>& phases) {
  const std::size_t n = occupation.size();
  if (shifts.size() != n || phases.size() != n) {
    throw std::invalid_argument("coupling sizes must match the site count");
  }
  for (const auto& row : shifts) {
    if (row.size() != n) {
      throw std::invalid_argument("shift matrix must be square");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (shifts[i][j] != shifts[j][i]) {
        throw std::invalid_argument("shift matrix must be symmetric");
      }
    }
  }
  LatticeGasEnergy out;
  for (std::size_t l = 0; l < n; ++l) {
    if (occupation[l] != 0 && occupation[l] != 1) {
      throw std::invalid_argument("occupation numbers must be 0 or 1");
    }
    if (occupation[l] == 0) continue;
    ++out.particles;
    out.energy += phases[l];
    for (std::size_t lp = l + 1; lp < n; ++lp) {
      if (occupation[lp] == 1) out.energy += shifts[l][lp];
    }
  }
  return out;
}

double kdv_residual(const SolitonData& data, const KdvGridSpec& grid) {
  if (data.kind != SolitonKind::kdv) {
    throw std::invalid_argument("the hierarchy residual is defined for KdV data");
  }
  validate_soliton_data(data);
  if (!(grid.dx > 0.0) || !(grid.dt3 > 0.0) || !(grid.x_max > grid.x_min)) {
    throw std::invalid_argument("grid spec must have positive spacings and a "
                                "nonempty window");
  }
  if (!data.momenta.empty()) {
    const double k_max = *std::max_element(data.momenta.begin(), data.momenta.end());
    if (grid.dx >= 0.1 / k_max) {
      throw std::invalid_argument("dx must resolve the narrowest soliton "
                                  "(dx < 0.1 / max momentum)");
    }
  }

  const std::size_t nodes =
      static_cast<std::size_t>(std::floor((grid.x_max - grid.x_min) / grid.dx + 0.5)) + 1;
  if (nodes < 5) {
    throw std::invalid_argument("window too narrow for the 5-point stencil");
  }

  SolitonData probe = data;
  if (probe.times.size() < 2) probe.times.resize(2, 0.0);
  const double t3 = probe.times[1];

  const auto field_row = [&](double t3_value) {
    std::vector<double> values(nodes);
    probe.times[1] = t3_value;
    for (std::size_t i = 0; i < nodes; ++i) {
      probe.times[0] = grid.x_min + static_cast<double>(i) * grid.dx;
      values[i] = kdv_potential(probe);
    }
    return values;
  };

  const std::vector<double> center = field_row(t3);
  const std::vector<double> ahead = field_row(t3 + grid.dt3);
  const std::vector<double> behind = field_row(t3 - grid.dt3);

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

GeometricGas geometric_momenta(double C, double hbar, std::size_t N) {
  require_finite(C, "scale");
  require_finite(hbar, "spacing parameter");
  if (C <= 0.0 || hbar <= 0.0) {
    throw std::invalid_argument("geometric momenta need positive scale and spacing");
  }
  GeometricGas out;
  out.momenta.resize(N);
  for (std::size_t l = 0; l < N; ++l) {
    out.momenta[l] = C * std::exp(2.0 * hbar * static_cast<double>(l + 1));
  }
  if (N >= 2) {
    out.pair_potential.resize(N - 1);
    for (std::size_t d = 1; d < N; ++d) {
      out.pair_potential[d - 1] = -2.0 * std::log(std::tanh(hbar * static_cast<double>(d)));
    }
    for (std::size_t l = 0; l < N; ++l) {
      for (std::size_t lp = l + 1; lp < N; ++lp) {
        const double g = kdv_phase_shift(out.momenta[l], out.momenta[lp]);
        const double u = out.pair_potential[lp - l - 1];
        out.max_identity_error = std::max(out.max_identity_error, std::fabs(g - u));
      }
    }
    if (out.max_identity_error > 1e-12) {
      throw std::runtime_error("geometric-series coupling failed the "
                               "separation-potential identity");
    }
  }
  return out;
}

CoxeterWeight coxeter_weight(std::size_t l, std::size_t m1, std::size_t m2, cplx z) {
  if (l == 0) {
    throw std::invalid_argument("reflection order l must be at least 1");
  }
  require_finite(z.real(), "point");
  require_finite(z.imag(), "point");

  cplx zl(1.0, 0.0);
  for (std::size_t p = 0; p < l; ++p) zl *= z;

  CoxeterWeight out;
  if (m1 == 0 && m2 == 0) return out;  // Laplacian case, kappa = 1 everywhere

  // Distance to the lines Im z^l = 0 / Re z^l = 0 estimated as value over
  // gradient magnitude |l z^{l-1}|.
  const double grad = static_cast<double>(l) *
                      std::pow(std::abs(z), static_cast<double>(l) - 1.0);
  const double odd_part = 2.0 * std::fabs(zl.imag());   // |z^l - conj(z)^l|
  const double even_part = 2.0 * std::fabs(zl.real());  // |z^l + conj(z)^l|

  if (m1 > 0) {
    if (odd_part == 0.0) {
      throw std::invalid_argument("point lies on a singular reflection line");
    }
    if (grad == 0.0 || odd_part / (2.0 * grad) < 1e-6) out.near_singular = true;
    out.kappa *= std::pow(odd_part, -2.0 * static_cast<double>(m1));
  }
  if (m2 > 0) {
    if (even_part == 0.0) {
      throw std::invalid_argument("point lies on a singular reflection line");
    }
    if (grad == 0.0 || even_part / (2.0 * grad) < 1e-6) out.near_singular = true;
    out.kappa *= std::pow(even_part, -2.0 * static_cast<double>(m2));
  }
  return out;
}

}  // namespace loewner
