#include "phmoc/fd_check.hpp"

#include <cmath>
#include <stdexcept>

namespace phmoc {

double default_fd_step(const Vector& point) { return 1e-5 * (1.0 + point.norm()); }

Vector fd_gradient(const ScalarFn& f, const Vector& point, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  Vector g(point.size());
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    Vector xp = point, xm = point;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Matrix fd_jacobian(const VectorFn& f, const Vector& point, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_jacobian: step must be positive");
  Vector f0 = f(point);
  Matrix jac(f0.size(), point.size());
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    Vector xp = point, xm = point;
    xp(i) += h;
    xm(i) -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

FdReport fd_check_gradient(const ScalarFn& f, const Vector& analytic_gradient,
                           const Vector& point, double h) {
  if (h <= 0.0) h = default_fd_step(point);
  FdReport report;
  report.numeric = fd_gradient(f, point, h);
  report.analytic = analytic_gradient;
  report.rel_error = (report.numeric - report.analytic).norm() /
                     std::max(1.0, report.analytic.norm());
  return report;
}

FdReport fd_check_jacobian(const VectorFn& f, const Matrix& analytic_jacobian,
                           const Vector& point, double h) {
  if (h <= 0.0) h = default_fd_step(point);
  FdReport report;
  report.numeric = fd_jacobian(f, point, h);
  report.analytic = analytic_jacobian;
  report.rel_error = (report.numeric - report.analytic).norm() /
                     std::max(1.0, report.analytic.norm());
  return report;
}

}  // namespace phmoc
