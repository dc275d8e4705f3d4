#pragma once

#include "phmoc/basis.hpp"
#include "phmoc/moc.hpp"
#include "phmoc/phs_system.hpp"
#include "phmoc/types.hpp"

#include <string>
#include <vector>

namespace phmoc {

/// Coefficients of the weight-space quadric at a frozen state x:
///   Q(x, w) = wᵀ·quad·w + linᵀ·w + constant,
/// which reproduces S′ − 2f′ − Q′ of the control law at the same (x, w)
/// and vanishes at the optimal weights for every x.
struct QuadricCoefficients {
  Matrix quad;      // Φ_x K Φ_xᵀ, symmetric PSD
  Vector lin;       // 2(Φ_x K ∂H/∂x − Φ_x (J−R) ∂H/∂x)
  double constant;  // gradHᵀK gradH − 2 gradHᵀ(J−R) gradH − r(x)
};

[[nodiscard]] QuadricCoefficients quadric_at(const PhsSystem& sys, const ExtendedClf& clf,
                                             const Vector& x);

[[nodiscard]] double quadric_value(const QuadricCoefficients& qc, const Vector& w);

enum class AdaptationMethod { kGradient, kNewton, kNewtonPseudoinverse };

[[nodiscard]] std::string to_string(AdaptationMethod method);
[[nodiscard]] AdaptationMethod adaptation_method_from_string(const std::string& name);

/// State shifts c₁…c_k and learning settings of the convexified
/// objective J_w(x, w) = Σᵢ Q(x+cᵢ, w)². Needs k ≥ r shifts; the first
/// shift is the zero vector by convention.
struct ShiftSet {
  std::vector<Vector> shifts;
  double learning_rate = 0.01;
  AdaptationMethod method = AdaptationMethod::kGradient;
};

/// Throws std::invalid_argument when the shift set cannot convexify an
/// r-dimensional weight space (too few shifts, wrong dimensions,
/// nonzero first shift, nonpositive learning rate).
void validate_shift_set(const ShiftSet& shifts, int dim_r, int dim_x);

[[nodiscard]] double jw_value(const PhsSystem& sys, const ExtendedClf& clf,
                              const ShiftSet& shifts, const Vector& x, const Vector& w);

/// Analytic ∂J_w/∂w = Σᵢ 2 Q(x+cᵢ, w)(2 A(x+cᵢ) w + lin(x+cᵢ)).
[[nodiscard]] Vector jw_gradient(const PhsSystem& sys, const ExtendedClf& clf,
                                 const ShiftSet& shifts, const Vector& x, const Vector& w);

/// Analytic ∂²J_w/∂w² = Σᵢ [2 vᵢvᵢᵀ + 4 A(x+cᵢ) Q(x+cᵢ, w)] with
/// vᵢ = 2 A(x+cᵢ) w + lin(x+cᵢ).
[[nodiscard]] Matrix jw_hessian(const PhsSystem& sys, const ExtendedClf& clf,
                                const ShiftSet& shifts, const Vector& x, const Vector& w);

/// Rank test of the stacked vᵢ vectors (strict-convexity condition) plus
/// the Hessian's smallest eigenvalue at (x, w_ref).
struct ConvexityReport {
  int rank = 0;
  int required_rank = 0;
  double hessian_min_eigenvalue = 0.0;
  bool passed = false;
};

[[nodiscard]] ConvexityReport convexity_diagnostic(const PhsSystem& sys,
                                                   const ExtendedClf& clf,
                                                   const ShiftSet& shifts, const Vector& x,
                                                   const Vector& w_ref);

/// Counters for events inside the weight dynamics (owned by the caller).
struct AdaptationLog {
  int newton_fallbacks = 0;
};

/// Right-hand side of the weight adaptation ẇ:
///   gradient:             −α ∂J_w/∂w
///   newton:               −α (∂²J_w/∂w²)⁻¹ ∂J_w/∂w   (solved, not inverted)
///   newton-pseudoinverse: −α (∂²J_w/∂w²)⁺ ∂J_w/∂w    (SVD truncation)
/// Newton falls back to the pseudoinverse when the Hessian's condition
/// number exceeds 1e12; each fallback is counted in the log.
[[nodiscard]] Vector weight_rhs(const PhsSystem& sys, const ExtendedClf& clf,
                                const ShiftSet& shifts, const Vector& x, const Vector& w,
                                AdaptationLog* log = nullptr);

}  // namespace phmoc
