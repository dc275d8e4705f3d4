#pragma once

#include "phmoc/polynomial.hpp"
#include "phmoc/types.hpp"

#include <optional>
#include <span>
#include <string>

namespace phmoc {

/// Constant-coefficient structure of a linear system with quadratic
/// energy, when detectable: ẋ = drift·x + input·u, H = ½xᵀ quad x.
struct LinearStructure {
  Matrix drift;   // (J − R)·quad
  Matrix input;   // G
  Matrix quad;    // Q with H = ½xᵀQx
  Matrix interconnection;
  Matrix dissipation;
  std::optional<Matrix> cost_quad;  // Q_c with r = xᵀQ_c x, when r is quadratic
};

/// Input-state-output port-Hamiltonian system
///   ẋ = (J(x) − R(x)) ∂H/∂x + G(x) u,   y = G(x)ᵀ ∂H/∂x,
/// together with the running-cost pair (r, S) of the optimal control
/// problem. J must be skew-symmetric and R positive-semidefinite at
/// every evaluated state; S is validated positive-definite on
/// construction. All callables are pure; instances are immutable and
/// safe to share across threads.
class PhsSystem {
 public:
  PhsSystem(int dim_x, int dim_u, MatrixFn interconnection, MatrixFn dissipation,
            MatrixFn input_map, ScalarFn hamiltonian, VectorFn grad_hamiltonian,
            ScalarFn state_cost, Matrix input_cost, std::string name = {});

  [[nodiscard]] int dim_x() const { return dim_x_; }
  [[nodiscard]] int dim_u() const { return dim_u_; }
  [[nodiscard]] const std::string& name() const { return name_; }

  [[nodiscard]] Matrix interconnection(const Vector& x) const;
  [[nodiscard]] Matrix dissipation(const Vector& x) const;
  [[nodiscard]] Matrix input_map(const Vector& x) const;
  [[nodiscard]] double hamiltonian(const Vector& x) const;
  [[nodiscard]] Vector grad_hamiltonian(const Vector& x) const;
  [[nodiscard]] double state_cost(const Vector& x) const;
  [[nodiscard]] const Matrix& input_cost() const { return input_cost_; }
  [[nodiscard]] const Matrix& input_cost_inverse() const { return input_cost_inv_; }

  /// Copyable energy callables, so value-function types can outlive the system.
  [[nodiscard]] const ScalarFn& hamiltonian_fn() const { return hamiltonian_; }
  [[nodiscard]] const VectorFn& grad_hamiltonian_fn() const { return grad_hamiltonian_; }

  /// (J(x) − R(x)) ∂H/∂x + G(x) u
  [[nodiscard]] Vector dynamics(const Vector& x, const Vector& u) const;
  /// y = G(x)ᵀ ∂H/∂x
  [[nodiscard]] Vector passive_output(const Vector& x) const;
  /// Uncontrolled drift (J − R) ∂H/∂x.
  [[nodiscard]] Vector drift(const Vector& x) const;

  [[nodiscard]] const std::optional<LinearStructure>& linear_structure() const {
    return linear_;
  }
  void set_linear_structure(LinearStructure s) { linear_ = std::move(s); }

 private:
  void require_state(const Vector& x) const;
  int dim_x_, dim_u_;
  MatrixFn interconnection_, dissipation_, input_map_;
  ScalarFn hamiltonian_;
  VectorFn grad_hamiltonian_;
  ScalarFn state_cost_;
  Matrix input_cost_, input_cost_inv_;
  std::optional<LinearStructure> linear_;
  std::string name_;
};

/// Instantaneous state increment x ← x + jump applied at a point in time.
struct DisturbanceImpulse {
  double time = 0.0;
  Vector jump;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  [[nodiscard]] bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Sample-based check of the standing structural assumptions: J(x)
/// skew-symmetric, R(x) ⪰ 0, S ≻ 0, r(x) > 0 off the origin, H(0)=0
/// with ∂H/∂x(0)=0, and ∂H/∂x consistent with H by central
/// differences. Violations are report entries, never exceptions.
[[nodiscard]] ValidationReport validate_structure(const PhsSystem& sys,
                                                  std::span<const Vector> samples,
                                                  double tol = 1e-8);

/// Builds a PhsSystem from polynomial coefficient tables. grad H is the
/// exact polynomial derivative of H.
[[nodiscard]] PhsSystem make_polynomial_system(const PolynomialMatrix& J,
                                               const PolynomialMatrix& R,
                                               const PolynomialMatrix& G,
                                               const Polynomial& H, const Polynomial& r,
                                               Matrix S, std::string name = {});

/// Linear benchmark system: J = [[0,−1],[1,0]], R = I, G = [1,0]ᵀ,
/// H = ½‖x‖², r = 100x₁² + x₂², S = 1.
[[nodiscard]] PhsSystem linear_example_system();

/// Nonlinear benchmark system: J = [[0,3],[−3,0]], R = [[1+x₂²,1],[1,2]],
/// G = [x₂,0]ᵀ, H = ½‖x‖², r = (8+24x₂²)x₁² + 8x₂², S = 1. The state
/// cost is the unique quadratic-in-x₂ weight consistent with the known
/// value function 2x₁² + x₂².
[[nodiscard]] PhsSystem nonlinear_example_system();

}  // namespace phmoc
