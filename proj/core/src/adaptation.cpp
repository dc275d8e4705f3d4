#include "phmoc/adaptation.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace phmoc {

QuadricCoefficients quadric_at(const PhsSystem& sys, const ExtendedClf& clf,
                               const Vector& x) {
  if (x.size() != sys.dim_x())
    throw std::invalid_argument("quadric_at: state has wrong dimension");
  Matrix phi_x = clf.basis().grad_phi(x);             // r x n
  Matrix K = kernel_matrix(sys, x);                   // n x n
  Vector grad_h = sys.grad_hamiltonian(x);
  Vector drift = sys.drift(x);                        // (J-R) gradH

  QuadricCoefficients qc;
  qc.quad = phi_x * K * phi_x.transpose();
  qc.lin = 2.0 * (phi_x * (K * grad_h) - phi_x * drift);
  qc.constant = grad_h.dot(K * grad_h) - 2.0 * grad_h.dot(drift) - sys.state_cost(x);
  return qc;
}

double quadric_value(const QuadricCoefficients& qc, const Vector& w) {
  if (w.size() != qc.lin.size())
    throw std::invalid_argument("quadric_value: weight vector has wrong dimension");
  return w.dot(qc.quad * w) + qc.lin.dot(w) + qc.constant;
}

std::string to_string(AdaptationMethod method) {
  switch (method) {
    case AdaptationMethod::kGradient: return "gradient";
    case AdaptationMethod::kNewton: return "newton";
    case AdaptationMethod::kNewtonPseudoinverse: return "newton-pseudoinverse";
  }
  return "gradient";
}

AdaptationMethod adaptation_method_from_string(const std::string& name) {
  if (name == "gradient") return AdaptationMethod::kGradient;
  if (name == "newton") return AdaptationMethod::kNewton;
  if (name == "newton-pseudoinverse") return AdaptationMethod::kNewtonPseudoinverse;
  throw std::invalid_argument("unknown adaptation method: " + name);
}

void validate_shift_set(const ShiftSet& shifts, int dim_r, int dim_x) {
  if (static_cast<int>(shifts.shifts.size()) < dim_r)
    throw std::invalid_argument("shift set: needs at least r = " + std::to_string(dim_r) +
                                " shifts for strict convexity");
  for (const auto& c : shifts.shifts)
    if (c.size() != dim_x)
      throw std::invalid_argument("shift set: shift vector has wrong dimension");
  if (shifts.shifts.front().norm() != 0.0)
    throw std::invalid_argument("shift set: first shift must be the zero vector");
  if (!(shifts.learning_rate > 0.0))
    throw std::invalid_argument("shift set: learning rate must be positive");
}

double jw_value(const PhsSystem& sys, const ExtendedClf& clf, const ShiftSet& shifts,
                const Vector& x, const Vector& w) {
  double total = 0.0;
  for (const auto& c : shifts.shifts) {
    double q = quadric_value(quadric_at(sys, clf, x + c), w);
    total += q * q;
  }
  return total;
}

Vector jw_gradient(const PhsSystem& sys, const ExtendedClf& clf, const ShiftSet& shifts,
                   const Vector& x, const Vector& w) {
  Vector grad = Vector::Zero(w.size());
  for (const auto& c : shifts.shifts) {
    QuadricCoefficients qc = quadric_at(sys, clf, x + c);
    double q = quadric_value(qc, w);
    grad += 2.0 * q * (2.0 * (qc.quad * w) + qc.lin);
  }
  return grad;
}

Matrix jw_hessian(const PhsSystem& sys, const ExtendedClf& clf, const ShiftSet& shifts,
                  const Vector& x, const Vector& w) {
  Matrix hess = Matrix::Zero(w.size(), w.size());
  for (const auto& c : shifts.shifts) {
    QuadricCoefficients qc = quadric_at(sys, clf, x + c);
    double q = quadric_value(qc, w);
    Vector v = 2.0 * (qc.quad * w) + qc.lin;
    hess += 2.0 * v * v.transpose() + 4.0 * qc.quad * q;
  }
  return hess;
}

ConvexityReport convexity_diagnostic(const PhsSystem& sys, const ExtendedClf& clf,
                                     const ShiftSet& shifts, const Vector& x,
                                     const Vector& w_ref) {
  const int r = clf.dim_r();
  Matrix stacked(static_cast<Eigen::Index>(shifts.shifts.size()), r);
  Eigen::Index row = 0;
  for (const auto& c : shifts.shifts) {
    QuadricCoefficients qc = quadric_at(sys, clf, x + c);
    stacked.row(row++) = (2.0 * (qc.quad * w_ref) + qc.lin).transpose();
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(0) > 0.0 && sv(i) > 1e-10 * sv(0)) ++rank;

  ConvexityReport report;
  report.rank = rank;
  report.required_rank = r;
  Eigen::SelfAdjointEigenSolver<Matrix> es(jw_hessian(sys, clf, shifts, x, w_ref));
  report.hessian_min_eigenvalue = es.eigenvalues().minCoeff();
  report.passed = (rank == r);
  return report;
}

namespace {

Vector truncated_pseudoinverse_solve(const Matrix& hess, const Vector& rhs) {
  Eigen::JacobiSVD<Matrix> svd(hess, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  Vector coeff = svd.matrixU().transpose() * rhs;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    coeff(i) = (smax > 0.0 && sv(i) > 1e-10 * smax) ? coeff(i) / sv(i) : 0.0;
  return svd.matrixV() * coeff;
}

}  // namespace

Vector weight_rhs(const PhsSystem& sys, const ExtendedClf& clf, const ShiftSet& shifts,
                  const Vector& x, const Vector& w, AdaptationLog* log) {
  Vector grad = jw_gradient(sys, clf, shifts, x, w);
  switch (shifts.method) {
    case AdaptationMethod::kGradient:
      return -shifts.learning_rate * grad;
    case AdaptationMethod::kNewton: {
      Matrix hess = jw_hessian(sys, clf, shifts, x, w);
      Eigen::JacobiSVD<Matrix> svd(hess);
      const auto& sv = svd.singularValues();
      double smin = sv(sv.size() - 1), smax = sv(0);
      if (smin <= 0.0 || smax / smin > 1e12) {
        if (log) ++log->newton_fallbacks;
        return -shifts.learning_rate * truncated_pseudoinverse_solve(hess, grad);
      }
      return -shifts.learning_rate * hess.ldlt().solve(grad);
    }
    case AdaptationMethod::kNewtonPseudoinverse: {
      Matrix hess = jw_hessian(sys, clf, shifts, x, w);
      return -shifts.learning_rate * truncated_pseudoinverse_solve(hess, grad);
    }
  }
  return -shifts.learning_rate * grad;
}

}  // namespace phmoc
