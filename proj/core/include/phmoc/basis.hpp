#pragma once

#include "phmoc/phs_system.hpp"
#include "phmoc/types.hpp"

#include <string>
#include <vector>

namespace phmoc {

/// Basis functions Φ: ℝⁿ → ℝʳ with exact gradients (rows of grad_phi
/// are ∇Φᵢᵀ). Every component must vanish at the origin so that the
/// extended CLF satisfies V(0, w) = 0 for all w.
struct BasisSet {
  int dim_r = 0;
  int dim_x = 0;
  VectorFn phi;
  MatrixFn grad_phi;  // r x n
  std::string name;
  std::vector<std::vector<int>> exponents;  // nonempty when monomial-built
};

/// Basis of the given monomials x^e (one exponent tuple per component).
/// Constant monomials are rejected: Φ(0) must be the zero vector.
[[nodiscard]] BasisSet monomial_basis(std::vector<std::vector<int>> exponents,
                                      std::string name = {});

/// Φ = [x₁², x₁x₂, x₂²] — the basis used by both worked scenarios.
[[nodiscard]] BasisSet quadratic_2d_basis();

/// Φ′ = [x₁², x₁x₂, x₂⁴] — deliberately unable to represent the
/// nonlinear example's value function; drives the ablation scenario.
[[nodiscard]] BasisSet quadratic_2d_wrong_basis();

[[nodiscard]] BasisSet basis_by_name(const std::string& name);

/// Extended control-Lyapunov function V(x, w) = H(x) + wᵀΦ(x) around a
/// system's Hamiltonian. Immutable; evaluation is pure.
class ExtendedClf {
 public:
  ExtendedClf(const PhsSystem& sys, BasisSet basis);

  /// H(x) + wᵀΦ(x)
  [[nodiscard]] double value(const Vector& x, const Vector& w) const;
  /// ∂V/∂x = ∂H/∂x + (∂Φ/∂x)ᵀ w
  [[nodiscard]] Vector gradient(const Vector& x, const Vector& w) const;

  [[nodiscard]] const BasisSet& basis() const { return basis_; }
  [[nodiscard]] int dim_r() const { return basis_.dim_r; }
  [[nodiscard]] int dim_x() const { return dim_x_; }

 private:
  void require_dims(const Vector& x, const Vector& w) const;
  ScalarFn hamiltonian_;
  VectorFn grad_hamiltonian_;
  BasisSet basis_;
  int dim_x_;
};

}  // namespace phmoc
