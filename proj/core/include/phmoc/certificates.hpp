#pragma once

#include "phmoc/phs_system.hpp"
#include "phmoc/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace phmoc {

/// PASS/FAIL verdict of one CLF certificate, with witnesses for failures.
struct Certificate {
  std::string condition;
  bool passed = false;
  std::vector<std::string> witnesses;
};

/// Sufficient condition: rank R(x) = n at every sample implies the
/// Hamiltonian is a CLF. Rank via singular values above tol·σ_max.
[[nodiscard]] Certificate certify_rank_R(const PhsSystem& sys,
                                         std::span<const Vector> samples,
                                         double tol = 1e-10);

/// Necessary and sufficient condition for a linear system with
/// H = ½xᵀQx: the kernels of GᵀQ and QᵀRQ intersect only in {0}.
[[nodiscard]] Certificate certify_linear_kernel(const Matrix& J, const Matrix& R,
                                                const Matrix& G, const Matrix& Q);

/// Sampled form of the zero-state-detectability condition: at samples
/// with near-vanishing passive output and x ≠ 0, the dissipated power
/// gradHᵀ R gradH must be strictly positive.
[[nodiscard]] Certificate certify_zsd_sampled(const PhsSystem& sys,
                                              std::span<const Vector> samples,
                                              double tol = 1e-8);

/// xᵀMx = 0 ⇔ Mx = 0 for symmetric positive-semidefinite M; decided as
/// ‖Mx‖ ≤ tol·‖M‖·‖x‖. Asymmetric input is an argument error.
[[nodiscard]] bool psd_kernel_membership(const Matrix& M, const Vector& x,
                                         double tol = 1e-6);

}  // namespace phmoc
