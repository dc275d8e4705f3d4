#pragma once

#include "phmoc/types.hpp"

#include <vector>

namespace phmoc {

/// Multivariate polynomial as a flat list of monomial terms
/// c · x₁^e₁ ⋯ x_n^e_n. Used for scenario-defined systems and bases;
/// derivatives are exact, so gradients never fall back to differencing.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> exponents;  // one entry per variable
  };

  Polynomial() = default;
  Polynomial(int n_vars, std::vector<Term> terms);

  static Polynomial constant(int n_vars, double value);
  static Polynomial monomial(int n_vars, double coeff, std::vector<int> exponents);

  [[nodiscard]] double eval(const Vector& x) const;
  [[nodiscard]] Polynomial derivative(int var) const;
  [[nodiscard]] int n_vars() const { return n_vars_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  /// Highest total degree over all terms; -1 for the zero polynomial.
  [[nodiscard]] int total_degree() const;

 private:
  int n_vars_ = 0;
  std::vector<Term> terms_;
};

/// Dense matrix of polynomials, evaluable entrywise at a state.
class PolynomialMatrix {
 public:
  PolynomialMatrix() = default;
  PolynomialMatrix(int rows, int cols, int n_vars);

  Polynomial& at(int i, int j) { return entries_[idx(i, j)]; }
  [[nodiscard]] const Polynomial& at(int i, int j) const { return entries_[idx(i, j)]; }
  [[nodiscard]] Matrix eval(const Vector& x) const;
  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] int n_vars() const { return n_vars_; }
  [[nodiscard]] bool is_constant() const;

 private:
  [[nodiscard]] std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }
  int rows_ = 0, cols_ = 0, n_vars_ = 0;
  std::vector<Polynomial> entries_;
};

}  // namespace phmoc
