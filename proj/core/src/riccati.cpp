#include "phmoc/riccati.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace phmoc {

namespace {

bool is_hurwitz(const Matrix& A) {
  Eigen::EigenSolver<Matrix> es(A);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (es.eigenvalues()(i).real() >= 0.0) return false;
  return true;
}

}  // namespace

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n)
    throw std::invalid_argument("solve_lyapunov: shape mismatch");
  // vec(AᵀP) = (I ⊗ Aᵀ) vec(P), vec(PA) = (Aᵀ ⊗ I) vec(P), column-major.
  Matrix lhs = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    lhs.block(i * n, i * n, n, n) += A.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      lhs.block(i * n, j * n, n, n) += A(j, i) * Matrix::Identity(n, n);
  Vector rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) rhs(j * n + i) = -Q(i, j);
  Eigen::PartialPivLU<Matrix> lu(lhs);
  Vector sol = lu.solve(rhs);
  if (!sol.allFinite())
    throw std::runtime_error("solve_lyapunov: singular equation (eigenvalue pair sums to 0)");
  Matrix P(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) P(i, j) = sol(j * n + i);
  return 0.5 * (P + P.transpose());
}

Vector riccati_weights(const Matrix& P, const Matrix& hamiltonian_quad) {
  if (P.rows() != 2 || P.cols() != 2 || hamiltonian_quad.rows() != 2 ||
      hamiltonian_quad.cols() != 2)
    throw std::invalid_argument("riccati_weights: mapping is defined for 2-d states");
  Matrix D = P - hamiltonian_quad;
  Vector w(3);
  w << 0.5 * D(0, 0), D(0, 1), 0.5 * D(1, 1);
  return w;
}

RiccatiSolution solve_riccati(const Matrix& A, const Matrix& B, const Matrix& Q_cost,
                              const Matrix& S, double tol) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q_cost.rows() != n || Q_cost.cols() != n ||
      S.rows() != m || S.cols() != m)
    throw std::invalid_argument("solve_riccati: shape mismatch");
  Eigen::LLT<Matrix> s_llt(S);
  if (s_llt.info() != Eigen::Success)
    throw std::invalid_argument("solve_riccati: S must be positive-definite");

  Matrix K = Matrix::Zero(m, n);
  if (!is_hurwitz(A - B * K))
    throw std::runtime_error(
        "solve_riccati: zero initial gain is not stabilizing (A not Hurwitz); "
        "pair may be non-stabilizable");

  Matrix P = Matrix::Zero(n, n);
  std::vector<double> history;
  const int max_iter = 60;
  int it = 0;
  for (; it < max_iter; ++it) {
    Matrix Acl = A - B * K;
    Matrix P_next = solve_lyapunov(Acl, Q_cost + K.transpose() * S * K);
    double step = (P_next - P).norm();
    P = P_next;
    K = s_llt.solve(B.transpose() * P);
    history.push_back(step);
    if (it > 0 && step <= tol * std::max(1.0, P.norm())) break;
  }

  Matrix residual_m =
      A.transpose() * P + P * A - P * B * s_llt.solve(B.transpose() * P) + Q_cost;
  double residual = residual_m.norm();
  if (it == max_iter || !(residual < 1e-8 * std::max(1.0, P.norm()))) {
    std::ostringstream os;
    os << "solve_riccati: iteration did not converge; step history:";
    for (double h : history) os << " " << h;
    throw std::runtime_error(os.str());
  }

  RiccatiSolution sol;
  sol.P = P;
  sol.iterations = it + 1;
  sol.residual = residual;
  if (n == 2) sol.w_star = riccati_weights(P, Matrix::Identity(2, 2));
  return sol;
}

double hjbe_residual(const PhsSystem& sys, const ExtendedClf& clf, const Vector& x,
                     const Vector& w) {
  MocScalars sc = moc_scalars(sys, clf, x, w);
  return 0.5 * sc.q_ups - 0.5 * sc.s_ups + sc.f_ups;
}

}  // namespace phmoc
