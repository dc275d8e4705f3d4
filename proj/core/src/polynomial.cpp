#include "phmoc/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace phmoc {

Polynomial::Polynomial(int n_vars, std::vector<Term> terms)
    : n_vars_(n_vars), terms_(std::move(terms)) {
  if (n_vars < 0) throw std::invalid_argument("polynomial: negative variable count");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exponents.size()) != n_vars)
      throw std::invalid_argument("polynomial: term exponent count does not match n_vars");
    for (int e : t.exponents)
      if (e < 0) throw std::invalid_argument("polynomial: negative exponent");
  }
}

Polynomial Polynomial::constant(int n_vars, double value) {
  if (value == 0.0) return Polynomial(n_vars, {});
  return Polynomial(n_vars, {Term{value, std::vector<int>(static_cast<std::size_t>(n_vars), 0)}});
}

Polynomial Polynomial::monomial(int n_vars, double coeff, std::vector<int> exponents) {
  return Polynomial(n_vars, {Term{coeff, std::move(exponents)}});
}

double Polynomial::eval(const Vector& x) const {
  if (x.size() != n_vars_)
    throw std::invalid_argument("polynomial: evaluation point has wrong dimension");
  double total = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < n_vars_; ++i) {
      for (int p = 0; p < t.exponents[static_cast<std::size_t>(i)]; ++p) v *= x(i);
    }
    total += v;
  }
  return total;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= n_vars_)
    throw std::invalid_argument("polynomial: derivative variable out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.exponents[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Term d = t;
    d.coeff = t.coeff * e;
    d.exponents[static_cast<std::size_t>(var)] = e - 1;
    out.push_back(std::move(d));
  }
  return Polynomial(n_vars_, std::move(out));
}

int Polynomial::total_degree() const {
  int deg = -1;
  for (const auto& t : terms_) {
    int d = 0;
    for (int e : t.exponents) d += e;
    if (d > deg) deg = d;
  }
  return deg;
}

PolynomialMatrix::PolynomialMatrix(int rows, int cols, int n_vars)
    : rows_(rows), cols_(cols), n_vars_(n_vars),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
               Polynomial(n_vars, {})) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("polynomial matrix: negative shape");
}

Matrix PolynomialMatrix::eval(const Vector& x) const {
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).eval(x);
  return m;
}

bool PolynomialMatrix::is_constant() const {
  for (const auto& p : entries_)
    if (p.total_degree() > 0) return false;
  return true;
}

}  // namespace phmoc
