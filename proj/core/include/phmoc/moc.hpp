#pragma once

#include "phmoc/basis.hpp"
#include "phmoc/phs_system.hpp"
#include "phmoc/types.hpp"

namespace phmoc {

/// Scalar ingredients of the modified optimal control law at one (x, w):
///   f_ups = (∂V/∂x)ᵀ(J−R)∂H/∂x        (drift power seen by V)
///   s_ups = (∂V/∂x)ᵀ G S⁻¹ Gᵀ (∂V/∂x)  (control authority, ≥ 0)
///   q_ups = r(x)                        (state cost, > 0 off origin)
struct MocScalars {
  double f_ups = 0.0;
  double s_ups = 0.0;
  double q_ups = 0.0;
};

/// K(x) = G(x) S⁻¹ G(x)ᵀ, the control-authority kernel.
[[nodiscard]] Matrix kernel_matrix(const PhsSystem& sys, const Vector& x);

[[nodiscard]] MocScalars moc_scalars(const PhsSystem& sys, const ExtendedClf& clf,
                                     const Vector& x, const Vector& w);

/// Scale-aware switch point below which s_ups is treated as vanishing.
[[nodiscard]] double degenerate_threshold(const PhsSystem& sys, const Vector& grad_v);

/// Lagrange multiplier of the modified problem: the positive root
///   Υ = (f + √(f² + q·s)) / s
/// evaluated in a cancellation-free form; for s ≤ eps the continuous
/// limit −q/(2f) applies when f < 0, the origin convention Υ = 1 when
/// q ≤ eps, and the positive root is kept while s > 0 otherwise. Only
/// s = 0 with f ≥ 0 and q > eps is a genuine CLF violation and throws.
[[nodiscard]] double upsilon(const MocScalars& scalars, double eps);

/// Convenience overload computing eps from the current ∂V/∂x scale.
[[nodiscard]] double upsilon(const PhsSystem& sys, const ExtendedClf& clf, const Vector& x,
                             const Vector& w);

/// Feedback law u = −S⁻¹ Gᵀ (∂V/∂x) · Υ(x, w).
[[nodiscard]] Vector control(const PhsSystem& sys, const ExtendedClf& clf, const Vector& x,
                             const Vector& w);

/// Closed-form Lyapunov rate −√(f² + q·s); nonpositive by construction.
[[nodiscard]] double vdot_closed_form(const MocScalars& scalars);

}  // namespace phmoc
