#include "phmoc/basis.hpp"
#include "phmoc/certificates.hpp"
#include "phmoc/fd_check.hpp"

#include <doctest.h>

#include <random>

using namespace phmoc;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("extended clf value") {
  PhsSystem lin = linear_example_system();
  ExtendedClf clf(lin, quadratic_2d_basis());

  // zero weights give back the Hamiltonian
  for (const auto& x : sample_box(2, -2.0, 2.0, 25, 2))
    CHECK(clf.value(x, Vector::Zero(3)) == lin.hamiltonian(x));

  CHECK(clf.value(vec2(1, 1), vec3(1, 1, 1)) == doctest::Approx(4.0));

  PhsSystem nl = nonlinear_example_system();
  ExtendedClf clf_nl(nl, quadratic_2d_basis());
  CHECK(clf_nl.value(vec2(1, 1), vec3(1.5, 0, 0.5)) == doctest::Approx(3.0));

  CHECK_THROWS_AS((void)clf.value(vec2(1, 1), Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("extended clf gradient") {
  PhsSystem lin = linear_example_system();
  ExtendedClf clf(lin, quadratic_2d_basis());

  Vector g = clf.gradient(vec2(1, 1), vec3(1, 0, 0));
  CHECK(g(0) == doctest::Approx(3.0));
  CHECK(g(1) == doctest::Approx(1.0));

  CHECK((clf.gradient(vec2(0.7, -0.3), Vector::Zero(3)) -
         lin.grad_hamiltonian(vec2(0.7, -0.3)))
            .norm() == doctest::Approx(0.0));

  // gradient matches central differences of the value
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    Vector x = vec2(dist(rng), dist(rng));
    Vector w = vec3(dist(rng), dist(rng), dist(rng));
    auto f = [&](const Vector& y) { return clf.value(y, w); };
    FdReport report = fd_check_gradient(f, clf.gradient(x, w), x, 1e-6 * (1.0 + x.norm()));
    CHECK(report.rel_error <= 1e-6);
  }
}

TEST_CASE("basis construction") {
  BasisSet q = quadratic_2d_basis();
  CHECK(q.dim_r == 3);
  CHECK(q.phi(vec2(0, 0)).norm() == 0.0);
  CHECK(q.phi(vec2(1, 1)).isApprox(vec3(1, 1, 1)));

  BasisSet w = quadratic_2d_wrong_basis();
  CHECK(w.phi(vec2(1, 2))(2) == doctest::Approx(16.0));
  CHECK(w.grad_phi(vec2(1, 2))(2, 1) == doctest::Approx(32.0));

  CHECK_THROWS_AS((void)monomial_basis({{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS((void)basis_by_name("no-such-basis"), std::invalid_argument);

  // grad_phi consistent with phi by finite differences
  BasisSet custom = monomial_basis({{3, 0}, {1, 2}});
  for (const auto& x : sample_box(2, -1.5, 1.5, 30, 13)) {
    auto f = [&](const Vector& y) { return custom.phi(y); };
    FdReport report = fd_check_jacobian(f, custom.grad_phi(x), x, 1e-6 * (1.0 + x.norm()));
    CHECK(report.rel_error <= 1e-5);
  }
}

TEST_CASE("rank certificate for the dissipation matrix") {
  auto samples = sample_box(2, -2.0, 2.0, 100, 21);
  CHECK(certify_rank_R(linear_example_system(), samples).passed);
  CHECK(certify_rank_R(nonlinear_example_system(), samples).passed);

  PhsSystem degenerate(
      2, 1, [](const Vector&) { return Matrix::Zero(2, 2); },
      [](const Vector&) { return (Matrix(2, 2) << 1, 0, 0, 0).finished(); },
      [](const Vector&) { return (Matrix(2, 1) << 1, 0).finished(); },
      [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [](const Vector& x) { return x; }, [](const Vector& x) { return x.squaredNorm(); },
      Matrix::Identity(1, 1));
  Certificate cert = certify_rank_R(degenerate, samples);
  CHECK_FALSE(cert.passed);
  CHECK_FALSE(cert.witnesses.empty());
}

TEST_CASE("linear kernel certificate") {
  Matrix I2 = Matrix::Identity(2, 2);
  Matrix G(2, 1);
  G << 1, 0;

  CHECK(certify_linear_kernel(Matrix::Zero(2, 2), I2, G, I2).passed);

  // R = 0: ker(Q^T R Q) is everything, ker(G^T Q) = span{[0,1]}
  Certificate lossless = certify_linear_kernel(Matrix::Zero(2, 2), Matrix::Zero(2, 2), G, I2);
  CHECK_FALSE(lossless.passed);

  // both kernels contain [1,0]
  Matrix Rd = (Matrix(2, 2) << 0, 0, 0, 1).finished();
  Matrix G2(2, 1);
  G2 << 0, 1;
  CHECK_FALSE(certify_linear_kernel(Matrix::Zero(2, 2), Rd, G2, I2).passed);

  CHECK_THROWS_AS((void)certify_linear_kernel(Matrix::Zero(2, 2), I2, G, Matrix::Zero(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("sampled zero-state detectability certificate") {
  auto samples = sample_box(2, -2.0, 2.0, 1000, 31);
  CHECK(certify_zsd_sampled(linear_example_system(), samples).passed);
  CHECK(certify_zsd_sampled(nonlinear_example_system(), samples).passed);

  // lossless system: output kernel carries no dissipation
  PhsSystem lossless(
      2, 1, [](const Vector&) { return (Matrix(2, 2) << 0, -1, 1, 0).finished(); },
      [](const Vector&) { return Matrix::Zero(2, 2); },
      [](const Vector&) { return (Matrix(2, 1) << 1, 0).finished(); },
      [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [](const Vector& x) { return x; }, [](const Vector& x) { return x.squaredNorm(); },
      Matrix::Identity(1, 1));
  std::vector<Vector> kernel_sample{vec2(0, 1)};
  Certificate cert = certify_zsd_sampled(lossless, kernel_sample);
  CHECK_FALSE(cert.passed);

  // no sample near the output kernel: vacuous pass
  std::vector<Vector> far{vec2(1, 0), vec2(2, 1)};
  CHECK(certify_zsd_sampled(lossless, far).passed);
}

TEST_CASE("full-rank dissipation implies the sampled detectability condition") {
  auto samples = sample_box(2, -2.0, 2.0, 400, 37);
  for (auto make : {linear_example_system, nonlinear_example_system}) {
    PhsSystem sys = make();
    if (certify_rank_R(sys, samples).passed) CHECK(certify_zsd_sampled(sys, samples).passed);
  }
}

TEST_CASE("psd kernel membership") {
  Matrix M = (Matrix(2, 2) << 1, 0, 0, 0).finished();
  CHECK(psd_kernel_membership(M, vec2(0, 1)));
  CHECK_FALSE(psd_kernel_membership(M, vec2(1, 1)));

  Matrix asym = (Matrix(2, 2) << 1, 1, 0, 1).finished();
  CHECK_THROWS_AS((void)psd_kernel_membership(asym, vec2(1, 0)), std::invalid_argument);
}

TEST_CASE("quadratic form vanishes exactly on the kernel") {
  // randomized check of the kernel lemma on rank-deficient PSD matrices
  std::mt19937_64 rng(43);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 5);  // dims 2..6
    int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    Matrix B(k, n);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
    Matrix M = B.transpose() * B;
    M /= M.norm();

    // a kernel vector via the eigendecomposition
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    int null_dim = 0;
    while (null_dim < n && es.eigenvalues()(null_dim) < 1e-12) ++null_dim;
    REQUIRE(null_dim > 0);
    Vector coeff(null_dim);
    for (int i = 0; i < null_dim; ++i) coeff(i) = gauss(rng);
    Vector xk = es.eigenvectors().leftCols(null_dim) * coeff;
    if (xk.norm() < 1e-9) continue;
    xk.normalize();

    bool quad_zero = std::abs(xk.dot(M * xk)) <= 1e-12;
    CHECK(quad_zero);
    CHECK(psd_kernel_membership(M, xk) == quad_zero);

    // a generic vector fails both sides
    Vector xg(n);
    for (int i = 0; i < n; ++i) xg(i) = gauss(rng);
    xg.normalize();
    if (std::abs(xg.dot(M * xg)) > 1e-6)  // stay away from the boundary zone
      CHECK_FALSE(psd_kernel_membership(M, xg));
  }
}
