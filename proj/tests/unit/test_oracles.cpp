#include "phmoc/adaptation.hpp"
#include "phmoc/fd_check.hpp"
#include "phmoc/riccati.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace phmoc;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("lyapunov solver") {
  Matrix A = (Matrix(2, 2) << -1, -1, 1, -1).finished();
  Matrix Q = (Matrix(2, 2) << 3, 1, 1, 2).finished();
  Matrix P = solve_lyapunov(A, Q);
  CHECK((A.transpose() * P + P * A + Q).norm() <= 1e-12);
  CHECK((P - P.transpose()).norm() <= 1e-13);
}

TEST_CASE("riccati solution of the linear example") {
  Matrix A = (Matrix(2, 2) << -1, -1, 1, -1).finished();
  Matrix B = (Matrix(2, 1) << 1, 0).finished();
  Matrix Q = (Matrix(2, 2) << 100, 0, 0, 1).finished();
  Matrix S = Matrix::Identity(1, 1);

  RiccatiSolution sol = solve_riccati(A, B, Q, S);
  CHECK(sol.P(0, 0) == doctest::Approx(8.97697).epsilon(1e-5));
  CHECK(sol.P(0, 1) == doctest::Approx(-0.730021).epsilon(1e-5));
  CHECK(sol.P(1, 0) == doctest::Approx(-0.730021).epsilon(1e-5));
  CHECK(sol.P(1, 1) == doctest::Approx(0.963556).epsilon(1e-5));

  CHECK(sol.w_star(0) == doctest::Approx(3.988485).epsilon(1e-5));
  CHECK(sol.w_star(1) == doctest::Approx(-0.730021).epsilon(1e-5));
  CHECK(sol.w_star(2) == doctest::Approx(-0.018222).epsilon(1e-4));

  CHECK(sol.residual <= 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sol.P);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // stationary under one further iteration
  Matrix K = S.llt().solve(B.transpose() * sol.P);
  Matrix P_next = solve_lyapunov(A - B * K, Q + K.transpose() * S * K);
  CHECK((P_next - sol.P).norm() <= 1e-12);
}

TEST_CASE("riccati degenerate and error cases") {
  // zero state cost with stable dynamics: P = 0
  RiccatiSolution zero =
      solve_riccati(-Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                    Matrix::Identity(2, 2));
  CHECK(zero.P.norm() <= 1e-14);

  // unstable A with no usable initial gain
  Matrix A1 = Matrix::Identity(1, 1);
  Matrix B0 = Matrix::Zero(1, 1);
  CHECK_THROWS_AS(
      (void)solve_riccati(A1, B0, Matrix::Identity(1, 1), Matrix::Identity(1, 1)),
      std::runtime_error);

  CHECK_THROWS_AS((void)solve_riccati(A1, B0, Matrix::Identity(1, 1), Matrix::Zero(1, 1)),
                  std::invalid_argument);
}

TEST_CASE("hjbe residual on the linear example") {
  PhsSystem lin = linear_example_system();
  ExtendedClf clf(lin, quadratic_2d_basis());
  const auto& ls = lin.linear_structure();
  Matrix q_cost = (Matrix(2, 2) << 100, 0, 0, 1).finished();
  RiccatiSolution ric = solve_riccati(ls->drift, ls->input, q_cost, lin.input_cost());

  CHECK(hjbe_residual(lin, clf, vec2(0, 0), ric.w_star) == 0.0);
  for (const auto& x : sample_box(2, -2.0, 2.0, 100, 53))
    CHECK(std::abs(hjbe_residual(lin, clf, x, ric.w_star)) <= 1e-8);

  // identity linking the quadric to the residual
  for (const auto& x : sample_box(2, -2.0, 2.0, 100, 59)) {
    double q = quadric_value(quadric_at(lin, clf, x), ric.w_star);
    CHECK(std::abs(q + 2.0 * hjbe_residual(lin, clf, x, ric.w_star)) <= 1e-10);
  }
}

TEST_CASE("hjbe residual on the nonlinear example") {
  // the known value function 2x1^2 + x2^2 solves the equation exactly,
  // which is what enables the strict terminal checks on that scenario
  PhsSystem nl = nonlinear_example_system();
  ExtendedClf clf(nl, quadratic_2d_basis());
  Vector w_star(3);
  w_star << 1.5, 0.0, 0.5;
  double worst = 0.0;
  for (const auto& x : sample_box(2, -2.0, 2.0, 200, 61))
    worst = std::max(worst, std::abs(hjbe_residual(nl, clf, x, w_star)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("finite-difference checker") {
  // linear maps are differenced exactly
  Matrix A = (Matrix(3, 3) << 1, 2, 0, 0, -1, 4, 2, 2, 2).finished();
  Vector b(3);
  b << 1, -1, 2;
  // for linear maps the central difference is exact up to rounding in
  // the quotient, about eps/h
  auto linear_scalar = [&](const Vector& x) { return b.dot(x); };
  Vector point = Vector::Constant(3, 0.5);
  FdReport grad_rep = fd_check_gradient(linear_scalar, b, point, 1e-5);
  CHECK(grad_rep.rel_error <= 1e-10);

  auto linear_map = [&](const Vector& x) -> Vector { return A * x; };
  FdReport jac_rep = fd_check_jacobian(linear_map, A, point, 1e-5);
  CHECK(jac_rep.rel_error <= 1e-10);

  CHECK(default_fd_step(point) == doctest::Approx(1e-5 * (1.0 + point.norm())));
  CHECK_THROWS_AS((void)fd_gradient(linear_scalar, point, 0.0), std::invalid_argument);

  // a detuned analytic gradient is flagged
  Vector wrong = b * 1.1;
  CHECK(fd_check_gradient(linear_scalar, wrong, point, 1e-5).rel_error > 1e-2);
}
