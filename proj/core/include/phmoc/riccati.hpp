#pragma once

#include "phmoc/basis.hpp"
#include "phmoc/moc.hpp"
#include "phmoc/phs_system.hpp"
#include "phmoc/types.hpp"

namespace phmoc {

/// Solves AᵀP + PA + Q = 0 for symmetric P (A must have no eigenvalue
/// pair summing to zero; Hurwitz A always qualifies). Direct Kronecker
/// solve, intended for desk-scale dimensions.
[[nodiscard]] Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

struct RiccatiSolution {
  Matrix P;        // stabilizing solution, symmetric positive-definite
  Vector w_star;   // P mapped onto the quadratic 2-d monomial basis
  int iterations = 0;
  double residual = 0.0;  // ‖AᵀP + PA − P B S⁻¹ Bᵀ P + Q‖
};

/// Maps V* = ½xᵀPx onto weights for Φ = [x₁², x₁x₂, x₂²] relative to a
/// Hamiltonian ½xᵀ·quad·x: w = [½(P−quad)₁₁, (P−quad)₁₂, ½(P−quad)₂₂].
[[nodiscard]] Vector riccati_weights(const Matrix& P, const Matrix& hamiltonian_quad);

/// Newton–Kleinman iteration for the continuous algebraic Riccati
/// equation, started from the zero gain (requires Hurwitz A; the gain
/// K = S⁻¹BᵀP is refined by one Lyapunov solve per step). Throws on a
/// non-stabilizing start or divergence, with the residual history in
/// the message.
[[nodiscard]] RiccatiSolution solve_riccati(const Matrix& A, const Matrix& B,
                                            const Matrix& Q_cost, const Matrix& S,
                                            double tol = 1e-13);

/// ½Q′ − ½S′ + f′ at (x, w): zero exactly when V(·, w) satisfies the
/// stationary Hamilton–Jacobi–Bellman equation at x.
[[nodiscard]] double hjbe_residual(const PhsSystem& sys, const ExtendedClf& clf,
                                   const Vector& x, const Vector& w);

}  // namespace phmoc
