#include "phmoc/basis.hpp"

#include "phmoc/polynomial.hpp"

#include <stdexcept>
#include <utility>

namespace phmoc {

BasisSet monomial_basis(std::vector<std::vector<int>> exponents, std::string name) {
  if (exponents.empty()) throw std::invalid_argument("basis: needs at least one monomial");
  const int n = static_cast<int>(exponents.front().size());
  const int r = static_cast<int>(exponents.size());
  std::vector<Polynomial> components;
  std::vector<std::vector<Polynomial>> grads;
  components.reserve(static_cast<std::size_t>(r));
  grads.reserve(static_cast<std::size_t>(r));
  for (const auto& e : exponents) {
    if (static_cast<int>(e.size()) != n)
      throw std::invalid_argument("basis: inconsistent exponent tuple lengths");
    int deg = 0;
    for (int k : e) {
      if (k < 0) throw std::invalid_argument("basis: negative exponent");
      deg += k;
    }
    if (deg == 0) throw std::invalid_argument("basis: constant monomial makes phi(0) nonzero");
    Polynomial p = Polynomial::monomial(n, 1.0, e);
    std::vector<Polynomial> g;
    g.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.push_back(p.derivative(i));
    components.push_back(std::move(p));
    grads.push_back(std::move(g));
  }

  BasisSet basis;
  basis.dim_r = r;
  basis.dim_x = n;
  basis.exponents = std::move(exponents);
  basis.name = std::move(name);
  basis.phi = [components, r](const Vector& x) {
    Vector v(r);
    for (int i = 0; i < r; ++i) v(i) = components[static_cast<std::size_t>(i)].eval(x);
    return v;
  };
  basis.grad_phi = [grads, r, n](const Vector& x) {
    Matrix m(r, n);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = grads[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
    return m;
  };
  return basis;
}

BasisSet quadratic_2d_basis() {
  return monomial_basis({{2, 0}, {1, 1}, {0, 2}}, "quadratic-2d");
}

BasisSet quadratic_2d_wrong_basis() {
  return monomial_basis({{2, 0}, {1, 1}, {0, 4}}, "quadratic-2d-wrong");
}

BasisSet basis_by_name(const std::string& name) {
  if (name == "quadratic-2d") return quadratic_2d_basis();
  if (name == "quadratic-2d-wrong") return quadratic_2d_wrong_basis();
  throw std::invalid_argument("unknown basis name: " + name);
}

ExtendedClf::ExtendedClf(const PhsSystem& sys, BasisSet basis)
    : hamiltonian_(sys.hamiltonian_fn()),
      grad_hamiltonian_(sys.grad_hamiltonian_fn()),
      basis_(std::move(basis)),
      dim_x_(sys.dim_x()) {
  if (basis_.dim_x != dim_x_)
    throw std::invalid_argument("clf: basis dimension does not match system state dimension");
  if (basis_.dim_r <= 0) throw std::invalid_argument("clf: basis is empty");
}

void ExtendedClf::require_dims(const Vector& x, const Vector& w) const {
  if (x.size() != dim_x_) throw std::invalid_argument("clf: state has wrong dimension");
  if (w.size() != basis_.dim_r)
    throw std::invalid_argument("clf: weight vector has wrong dimension");
}

double ExtendedClf::value(const Vector& x, const Vector& w) const {
  require_dims(x, w);
  return hamiltonian_(x) + w.dot(basis_.phi(x));
}

Vector ExtendedClf::gradient(const Vector& x, const Vector& w) const {
  require_dims(x, w);
  return grad_hamiltonian_(x) + basis_.grad_phi(x).transpose() * w;
}

}  // namespace phmoc
