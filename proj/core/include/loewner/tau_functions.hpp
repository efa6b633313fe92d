#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "loewner/conformal.hpp"

namespace loewner {

/// Which hierarchy the soliton data parameterizes.
enum class SolitonKind { kdv, kp };

/// Data for an N-soliton tau function in Hirota form.
///
/// KdV: `momenta` holds positive, distinct wave numbers k_1..k_N and `times`
/// is (x, t3, t5, ...), so the phase of soliton l is
///   theta_l = -phi_l - k_l x + k_l^3 t3 + k_l^5 t5 + ...
///
/// KP: `points` holds distinct points z_1..z_N in the open upper half-plane
/// (each soliton is the conjugate pair (z_l, conj z_l)) and `times` is
/// (t1, t2, t3, ...) with
///   theta_l = phi_l + 2 Re(z_l) t1 + 2 Im(z_l^2) t2 + 2 Re(z_l^3) t3 + ...
/// Odd times couple to z^m + conj(z)^m = 2 Re z^m; the even-power difference
/// z^m - conj(z)^m is purely imaginary, and the conventional reality choice
/// absorbs that unit into the even times, leaving the real coefficient
/// 2 Im z^m.
struct SolitonData {
  SolitonKind kind = SolitonKind::kdv;
  std::vector<double> momenta;
  std::vector<cplx> points;
  std::vector<double> phases;
  std::vector<double> times;

  std::size_t size() const {
    return kind == SolitonKind::kdv ? momenta.size() : points.size();
  }
};

/// Throws std::invalid_argument on inconsistent sizes, non-finite entries,
/// KdV momenta that are not positive and distinct, or KP points that are not
/// distinct interior points of the upper half-plane.
void validate_soliton_data(const SolitonData& data);

/// Phase theta_l of soliton l (0-based) under the conventions above.
double soliton_phase(const SolitonData& data, std::size_t l);

/// Pairwise phase shift for KdV wave numbers:
///   G = -log[(k - k')^2 / (k + k')^2], positive for distinct positive k.
double kdv_phase_shift(double k, double kp);

/// Pairwise phase shift for KP points in the upper half-plane:
///   G = -log[(z - z')(conj z - conj z') / ((z - conj z')(conj z - z'))],
/// which equals the half-plane Coulomb energy -2 log|z - z'| + 2 log|z - conj z'|
/// (charge plus opposite image charge below the real axis).
double kp_phase_shift(cplx z, cplx zp);

/// Phase shift G_{l,l'} between solitons l != l' of `data`.
double phase_shift(const SolitonData& data, std::size_t l, std::size_t lp);

/// Fills the symmetric shift matrix G (zero diagonal) and the phase vector.
void soliton_couplings(const SolitonData& data,
                       std::vector<std::vector<double>>& shifts,
                       std::vector<double>& phases);

/// log of the Hirota sum
///   tau = sum over sigma in {0,1}^N of
///         exp(-sum_{l<l'} G_{ll'} sigma_l sigma_l' - sum_l sigma_l theta_l).
/// Enumerates subsets in Gray-code order (one O(N) energy update per subset)
/// and accumulates in streaming log-sum-exp form, so intermediate sums never
/// overflow. Requires N <= 24.
double log_tau_hirota(const SolitonData& data);

/// exp(log_tau_hirota). Positive; overflows to +inf only if tau itself
/// exceeds the double range.
double tau_hirota(const SolitonData& data);

/// The KdV field V = -2 d^2/dx^2 log tau, evaluated exactly from the same
/// subset sum: with a_sigma the log of one Hirota term and
/// s_sigma = d a_sigma / dx = sum_l sigma_l k_l,
///   d^2/dx^2 log tau = (A C - B^2) / A^2,
/// where A, B, C accumulate e^{a}, s e^{a}, s^2 e^{a} under a common shift.
double kdv_potential(const SolitonData& data);

struct LatticeGasEnergy {
  double energy = 0.0;
  std::size_t particles = 0;
};

/// Energy of one lattice-gas configuration:
///   E = sum_{l<l'} G_{ll'} sigma_l sigma_l' + sum_l theta_l sigma_l.
/// `occupation` entries must be 0 or 1; `shifts` must be square with
/// symmetric off-diagonal entries. The Hirota sum is the grand partition
/// function of this gas, which tests exploit as a cross-implementation
/// oracle.
LatticeGasEnergy lattice_gas_energy(const std::vector<int>& occupation,
                                    const std::vector<std::vector<double>>& shifts,
                                    const std::vector<double>& phases);

/// Grid spec for the KdV residual stencil. The window [x_min, x_max] is
/// sampled with spacing dx; the t3 derivative uses a central step dt3.
struct KdvGridSpec {
  double x_min = -10.0;
  double x_max = 10.0;
  double dx = 1e-2;
  double dt3 = 1e-2;
};

/// Max over interior grid nodes of |dV/dt3 + d^3V/dx^3 - 6 V dV/dx| with all
/// derivatives by central differences of the exact V values; converges to 0
/// at second order in the spacings for genuine hierarchy solutions. Requires
/// dx < 0.1 / max k_l so the narrowest soliton is resolved.
double kdv_residual(const SolitonData& data, const KdvGridSpec& grid = {});

/// Momenta in geometric progression and the induced translation-invariant
/// pair potential.
struct GeometricGas {
  std::vector<double> momenta;         // k_l = C e^{2 hbar l}, l = 1..N
  std::vector<double> pair_potential;  // U(d) = -2 log tanh(hbar d), d = 1..N-1
  double max_identity_error = 0.0;     // max |G_{l,l'} - U(|l - l'|)|
};

/// Builds k_l = C e^{2 hbar l} and U(d) = -2 log tanh(hbar d) and verifies
/// the algebraic identity G_{l,l'} = U(l - l') (the tanh addition law turns
/// the geometric ratio into a separation-only coupling); throws
/// std::runtime_error if the identity fails beyond 1e-12.
GeometricGas geometric_momenta(double C, double hbar, std::size_t N);

struct CoxeterWeight {
  double kappa = 1.0;
  double eta = 1.0;
  /// Set when z lies within estimated distance 1e-6 of a singular line that
  /// carries a negative exponent; kappa is then numerically untrustworthy.
  bool near_singular = false;
};

/// Reflection-invariant permeability weight
///   kappa = |z^l - conj(z)^l|^{-2 m1} |z^l + conj(z)^l|^{-2 m2},  eta = 1.
/// The squared-modulus form keeps kappa real positive on every chamber.
/// Throws std::invalid_argument on the singular lines themselves (where a
/// negative exponent would divide by zero).
CoxeterWeight coxeter_weight(std::size_t l, std::size_t m1, std::size_t m2, cplx z);

}  // namespace loewner
