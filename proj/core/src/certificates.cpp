#include "phmoc/certificates.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace phmoc {

namespace {

std::string describe(const Vector& x) {
  std::ostringstream os;
  os << "x = [";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x(i);
  }
  os << "]";
  return os.str();
}

int numerical_rank(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

// Orthonormal kernel basis of m (columns), via full SVD.
Matrix kernel_basis(const Matrix& m, double tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) > tol * smax) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace

Certificate certify_rank_R(const PhsSystem& sys, std::span<const Vector> samples,
                           double tol) {
  if (samples.empty())
    throw std::invalid_argument("certify_rank_R: sample set must be nonempty");
  Certificate cert;
  cert.condition = "rank(R(x)) = n at all samples";
  cert.passed = true;
  for (const auto& x : samples) {
    Matrix R = sys.dissipation(x);
    int rank = numerical_rank(R, tol);
    if (rank < sys.dim_x()) {
      cert.passed = false;
      cert.witnesses.push_back("rank " + std::to_string(rank) + " at " + describe(x));
      if (cert.witnesses.size() >= 8) break;
    }
  }
  return cert;
}

Certificate certify_linear_kernel(const Matrix& J, const Matrix& R, const Matrix& G,
                                  const Matrix& Q) {
  const double tol = 1e-10;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("certify_linear_kernel: Q must be positive-definite");
  (void)J;  // the condition involves only R, G, Q

  Certificate cert;
  cert.condition = "ker(G^T Q) and ker(Q^T R Q) intersect trivially";

  Matrix kerGQ = kernel_basis(G.transpose() * Q, tol);
  Matrix kerQRQ = kernel_basis(Q.transpose() * R * Q, tol);
  if (kerGQ.cols() == 0 || kerQRQ.cols() == 0) {
    cert.passed = true;
    return cert;
  }
  // Common directions show up as singular values of kerGQᵀ·kerQRQ at 1
  // (principal angle zero).
  Eigen::JacobiSVD<Matrix> svd(kerGQ.transpose() * kerQRQ);
  double cos_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  cert.passed = cos_max < 1.0 - 1e-8;
  if (!cert.passed) {
    std::ostringstream os;
    os << "kernels share a direction (largest principal cosine " << cos_max
       << "); dim ker(G^T Q) = " << kerGQ.cols() << ", dim ker(Q^T R Q) = " << kerQRQ.cols();
    cert.witnesses.push_back(os.str());
  }
  return cert;
}

Certificate certify_zsd_sampled(const PhsSystem& sys, std::span<const Vector> samples,
                                double tol) {
  if (samples.empty())
    throw std::invalid_argument("certify_zsd_sampled: sample set must be nonempty");
  Certificate cert;
  cert.condition = "gradH^T R gradH > 0 on the near-kernel sample subset";
  cert.passed = true;
  int near_kernel = 0;
  for (const auto& x : samples) {
    if (x.norm() < 1e-12) continue;
    Vector g = sys.grad_hamiltonian(x);
    Vector y = sys.input_map(x).transpose() * g;
    // Membership threshold scales with the gradient: exact kernel hits
    // have measure zero under sampling.
    if (y.norm() > tol * (1.0 + g.norm())) continue;
    ++near_kernel;
    double dissipated = g.dot(sys.dissipation(x) * g);
    if (!(dissipated > 0.0)) {
      cert.passed = false;
      cert.witnesses.push_back("gradH^T R gradH = " + std::to_string(dissipated) + " at " +
                               describe(x));
      if (cert.witnesses.size() >= 8) break;
    }
  }
  if (near_kernel == 0)
    cert.witnesses.push_back("no sample fell in the near-kernel set; condition holds vacuously");
  return cert;
}

bool psd_kernel_membership(const Matrix& M, const Vector& x, double tol) {
  if (M.rows() != M.cols()) throw std::invalid_argument("psd_kernel_membership: M not square");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + M.norm()))
    throw std::invalid_argument("psd_kernel_membership: M not symmetric");
  if (x.size() != M.rows())
    throw std::invalid_argument("psd_kernel_membership: dimension mismatch");
  double scale = M.norm() * x.norm();
  if (scale == 0.0) return true;
  return (M * x).norm() <= tol * scale;
}

}  // namespace phmoc
