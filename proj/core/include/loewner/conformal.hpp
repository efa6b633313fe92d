#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace loewner {

/// Complex plane coordinate shared by every conformal map in the library.
using cplx = std::complex<double>;

/// Map value together with its w-derivative, computed in a single pass.
struct ValueAndDeriv {
  cplx value;
  cplx deriv;
};

/// Normalizes an angle into [0, 2*pi). Throws std::invalid_argument on
/// non-finite input.
double normalize_angle(double angle);

/// One radial slit attachment, the building block of every cluster map.
///
/// `angle` is the point on the unit circle where the slit attaches,
/// normalized into [0, 2*pi). `capacity` is the logarithmic-capacity
/// increment delta_t contributed by the attachment; capacity 0 is the
/// identity map and is accepted so that degenerate steps stay well defined.
struct ElementarySlitMap {
  double angle;
  double capacity;
  // Constants of the map cached at construction so that composite evaluation
  // does not pay for trig and exponentials at every sample point.
  cplx rotation;       // e^{i angle}
  double exp_cap;      // e^{capacity}
  double exp_neg_cap;  // e^{-capacity}
  double base_offset;  // arccos(2 e^{-capacity} - 1); the slit base pulls
                       // back to the circle points angle +- base_offset

  ElementarySlitMap(double angle_radians, double capacity_increment);
};

/// Ordered composition of elementary slit maps acting on {|w| >= 1}.
///
/// `slits[0]` is the earliest (outermost) attachment; the last entry is the
/// most recent one and is applied first during evaluation, so the composite
/// is slits[0] o slits[1] o ... o slits[n-1]. `log_scale` rescales the final
/// value by exp(log_scale); it is kept in log space so that rescalings by
/// factors as small as exp(-700) do not underflow.
struct CompositeMap {
  std::vector<ElementarySlitMap> slits;
  double log_scale = 0.0;

  CompositeMap() = default;

  /// Appends a new innermost slit (the latest attachment).
  void append(const ElementarySlitMap& slit) { slits.push_back(slit); }

  std::size_t size() const { return slits.size(); }

  /// Sum of the capacities of all slits, excluding log_scale.
  double total_capacity() const;
};

/// Evaluates one slit map at w with |w| >= 1.
///
/// The map fixes the exterior of the unit disk, attaches a radial slit at
/// `angle`, and behaves as exp(capacity) * w at infinity. Throws
/// std::invalid_argument for points inside the disk or non-finite input and
/// std::runtime_error when w sits on the circle within angular distance
/// 1e-12 of the attachment point, where the map degenerates.
cplx eval_elementary(const ElementarySlitMap& map, cplx w);

/// Derivative of one slit map. Requires |w| > 1 strictly; the derivative
/// diverges on the circle at the slit base.
cplx eval_elementary_derivative(const ElementarySlitMap& map, cplx w);

/// Value and derivative of one slit map in a single evaluation.
ValueAndDeriv eval_elementary_with_derivative(const ElementarySlitMap& map, cplx w);

/// Evaluates the composite map at w with |w| >= 1, innermost slit first,
/// then applies exp(log_scale). An empty map with log_scale 0 is the
/// identity. Errors from individual slits are rethrown with the failing
/// slit index (1-based, in storage order) appended to the message.
cplx eval_composite(const CompositeMap& F, cplx w);

/// Derivative of the composite map by the chain rule across the slit
/// sequence, times exp(log_scale). Requires |w| > 1 strictly.
cplx eval_derivative(const CompositeMap& F, cplx w);

/// Value and derivative of the composite map in one pass over the slits.
/// Costs the same as eval_composite plus a multiply per slit, which matters
/// for spectrum estimation where both are needed at every sample point.
ValueAndDeriv eval_with_derivative(const CompositeMap& F, cplx w);

/// Velocity factor w * (w + e^{iL}) / (w - e^{iL}) of the radial Loewner
/// equation, where L is the current driver value. Throws std::runtime_error
/// when w collides with the driving singularity e^{iL}.
cplx loewner_rhs(cplx w, double driver_value);

/// Returns a copy of F with log_scale set to -T, representing the rescaled
/// map exp(-T) * F. Requires T >= 0.
CompositeMap whole_plane_rescale(CompositeMap F, double T);

/// Estimates the leading Laurent coefficient of F by averaging F(w)/w over
/// equally spaced angles on the circle |w| = radius. The angular average
/// cancels every Laurent term whose power is not congruent to 1 modulo
/// num_angles, so with the default 16 angles at radius 1e3 the contamination
/// is far below double precision.
cplx fitted_leading_coefficient(const CompositeMap& F, double radius = 1e3,
                                int num_angles = 16);

}  // namespace loewner
