#pragma once

#include "phmoc/types.hpp"

namespace phmoc {

/// Central-difference comparison of an analytic gradient or Jacobian
/// against its defining map. rel_error is ‖numeric − analytic‖ over
/// max(1, ‖analytic‖).
struct FdReport {
  Matrix numeric;
  Matrix analytic;
  double rel_error = 0.0;
};

/// Step 1e-5·(1 + ‖point‖): the usual truncation/rounding balance.
[[nodiscard]] double default_fd_step(const Vector& point);

[[nodiscard]] Vector fd_gradient(const ScalarFn& f, const Vector& point, double h);

[[nodiscard]] Matrix fd_jacobian(const VectorFn& f, const Vector& point, double h);

[[nodiscard]] FdReport fd_check_gradient(const ScalarFn& f, const Vector& analytic_gradient,
                                         const Vector& point, double h = 0.0);

[[nodiscard]] FdReport fd_check_jacobian(const VectorFn& f, const Matrix& analytic_jacobian,
                                         const Vector& point, double h = 0.0);

}  // namespace phmoc
