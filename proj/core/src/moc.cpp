#include "phmoc/moc.hpp"

#include <cmath>
#include <sstream>

namespace phmoc {

Matrix kernel_matrix(const PhsSystem& sys, const Vector& x) {
  Matrix G = sys.input_map(x);
  return G * sys.input_cost_inverse() * G.transpose();
}

MocScalars moc_scalars(const PhsSystem& sys, const ExtendedClf& clf, const Vector& x,
                       const Vector& w) {
  Vector grad_v = clf.gradient(x, w);
  Vector y = sys.input_map(x).transpose() * grad_v;
  MocScalars s;
  s.f_ups = grad_v.dot(sys.drift(x));
  s.s_ups = y.dot(sys.input_cost_inverse() * y);
  s.q_ups = sys.state_cost(x);
  return s;
}

double degenerate_threshold(const PhsSystem& sys, const Vector& grad_v) {
  return 1e-9 * (1.0 + grad_v.squaredNorm() * sys.input_cost_inverse().norm());
}

double upsilon(const MocScalars& sc, double eps) {
  const double f = sc.f_ups, s = sc.s_ups, q = sc.q_ups;
  if (s > eps) {
    // Equivalent forms of the positive root; pick the one without
    // subtractive cancellation for the sign of f at hand.
    if (f <= 0.0) return q / (std::sqrt(f * f + q * s) - f);
    return (f + std::sqrt(f * f + q * s)) / s;
  }
  if (f < 0.0) return -q / (2.0 * f);
  if (q <= eps) return 1.0;  // origin: value is irrelevant, G^T dV/dx = 0
  if (s > 0.0) return (f + std::sqrt(f * f + q * s)) / s;
  std::ostringstream os;
  os << "CLF violation: G^T dV/dx = 0 with nonnegative drift power f = " << f
     << " and state cost q = " << q << " off the origin";
  throw ClfViolationError(os.str(), Vector());
}

double upsilon(const PhsSystem& sys, const ExtendedClf& clf, const Vector& x,
               const Vector& w) {
  MocScalars sc = moc_scalars(sys, clf, x, w);
  try {
    return upsilon(sc, degenerate_threshold(sys, clf.gradient(x, w)));
  } catch (const ClfViolationError& e) {
    throw ClfViolationError(e.what(), x);
  }
}

Vector control(const PhsSystem& sys, const ExtendedClf& clf, const Vector& x,
               const Vector& w) {
  Vector grad_v = clf.gradient(x, w);
  Vector y = sys.input_map(x).transpose() * grad_v;
  MocScalars sc;
  sc.f_ups = grad_v.dot(sys.drift(x));
  sc.s_ups = y.dot(sys.input_cost_inverse() * y);
  sc.q_ups = sys.state_cost(x);
  double ups;
  try {
    ups = upsilon(sc, degenerate_threshold(sys, grad_v));
  } catch (const ClfViolationError& e) {
    throw ClfViolationError(e.what(), x);
  }
  return -(sys.input_cost_inverse() * y) * ups;
}

double vdot_closed_form(const MocScalars& sc) {
  return -std::sqrt(sc.f_ups * sc.f_ups + sc.q_ups * sc.s_ups);
}

}  // namespace phmoc
