#include "phmoc/polynomial.hpp"

#include <doctest.h>

using namespace phmoc;

TEST_CASE("polynomial evaluation and derivatives") {
  // p = 3 x1^2 x2 - x2^3 + 5
  Polynomial p(2, {{3.0, {2, 1}}, {-1.0, {0, 3}}, {5.0, {0, 0}}});
  Vector x(2);
  x << 2.0, -1.0;
  CHECK(p.eval(x) == doctest::Approx(3 * 4 * -1 - (-1) + 5));
  CHECK(p.total_degree() == 3);

  Polynomial dx1 = p.derivative(0);  // 6 x1 x2
  CHECK(dx1.eval(x) == doctest::Approx(-12.0));
  Polynomial dx2 = p.derivative(1);  // 3 x1^2 - 3 x2^2
  CHECK(dx2.eval(x) == doctest::Approx(12.0 - 3.0));
  CHECK(p.derivative(0).derivative(1).eval(x) == doctest::Approx(12.0));
}

TEST_CASE("polynomial argument errors") {
  Polynomial p(2, {{1.0, {1, 0}}});
  Vector bad(3);
  bad.setZero();
  CHECK_THROWS_AS((void)p.eval(bad), std::invalid_argument);
  CHECK_THROWS_AS((void)p.derivative(2), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial(2, {{1.0, {1}}}), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial(2, {{1.0, {-1, 0}}}), std::invalid_argument);
}

TEST_CASE("polynomial matrix evaluation") {
  PolynomialMatrix m(2, 2, 2);
  m.at(0, 0) = Polynomial(2, {{1.0, {0, 0}}, {1.0, {0, 2}}});  // 1 + x2^2
  m.at(0, 1) = Polynomial::constant(2, 1.0);
  m.at(1, 0) = Polynomial::constant(2, 1.0);
  m.at(1, 1) = Polynomial::constant(2, 2.0);
  CHECK_FALSE(m.is_constant());
  Vector x(2);
  x << 0.0, 2.0;
  Matrix v = m.eval(x);
  CHECK(v(0, 0) == doctest::Approx(5.0));
  CHECK(v(1, 1) == doctest::Approx(2.0));

  PolynomialMatrix c(1, 1, 2);
  c.at(0, 0) = Polynomial::constant(2, 4.0);
  CHECK(c.is_constant());
}
