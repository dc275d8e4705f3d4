#include "phmoc/phs_system.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace phmoc {

namespace {

std::string brief(const Vector& x) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x(i);
  }
  os << "]";
  return os.str();
}

}  // namespace

PhsSystem::PhsSystem(int dim_x, int dim_u, MatrixFn interconnection, MatrixFn dissipation,
                     MatrixFn input_map, ScalarFn hamiltonian, VectorFn grad_hamiltonian,
                     ScalarFn state_cost, Matrix input_cost, std::string name)
    : dim_x_(dim_x),
      dim_u_(dim_u),
      interconnection_(std::move(interconnection)),
      dissipation_(std::move(dissipation)),
      input_map_(std::move(input_map)),
      hamiltonian_(std::move(hamiltonian)),
      grad_hamiltonian_(std::move(grad_hamiltonian)),
      state_cost_(std::move(state_cost)),
      input_cost_(std::move(input_cost)),
      name_(std::move(name)) {
  if (dim_x_ <= 0 || dim_u_ <= 0)
    throw std::invalid_argument("phs system: dimensions must be positive");
  if (input_cost_.rows() != dim_u_ || input_cost_.cols() != dim_u_)
    throw std::invalid_argument("phs system: input cost must be dim_u x dim_u");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (input_cost_ + input_cost_.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("phs system: input cost S must be positive-definite");
  input_cost_inv_ = input_cost_.llt().solve(Matrix::Identity(dim_u_, dim_u_));
}

void PhsSystem::require_state(const Vector& x) const {
  if (x.size() != dim_x_)
    throw std::invalid_argument("phs system: state has wrong dimension");
}

Matrix PhsSystem::interconnection(const Vector& x) const {
  require_state(x);
  return interconnection_(x);
}

Matrix PhsSystem::dissipation(const Vector& x) const {
  require_state(x);
  return dissipation_(x);
}

Matrix PhsSystem::input_map(const Vector& x) const {
  require_state(x);
  return input_map_(x);
}

double PhsSystem::hamiltonian(const Vector& x) const {
  require_state(x);
  return hamiltonian_(x);
}

Vector PhsSystem::grad_hamiltonian(const Vector& x) const {
  require_state(x);
  return grad_hamiltonian_(x);
}

double PhsSystem::state_cost(const Vector& x) const {
  require_state(x);
  return state_cost_(x);
}

Vector PhsSystem::dynamics(const Vector& x, const Vector& u) const {
  require_state(x);
  if (u.size() != dim_u_)
    throw std::invalid_argument("phs system: input has wrong dimension");
  return drift(x) + input_map_(x) * u;
}

Vector PhsSystem::passive_output(const Vector& x) const {
  require_state(x);
  return input_map_(x).transpose() * grad_hamiltonian_(x);
}

Vector PhsSystem::drift(const Vector& x) const {
  require_state(x);
  return (interconnection_(x) - dissipation_(x)) * grad_hamiltonian_(x);
}

ValidationReport validate_structure(const PhsSystem& sys, std::span<const Vector> samples,
                                    double tol) {
  ValidationReport report;
  if (samples.empty())
    throw std::invalid_argument("validate_structure: sample set must be nonempty");

  auto add = [&report](std::string check, bool ok, std::string detail) {
    report.checks.push_back({std::move(check), ok, std::move(detail)});
  };

  // J skew-symmetric at every sample.
  {
    bool ok = true;
    std::string detail;
    for (const auto& x : samples) {
      Matrix J = sys.interconnection(x);
      double dev = (J + J.transpose()).cwiseAbs().maxCoeff();
      if (dev > tol * (1.0 + J.norm())) {
        ok = false;
        detail = "J + J^T deviation " + std::to_string(dev) + " at x = " + brief(x);
        break;
      }
    }
    add("interconnection skew-symmetric", ok, ok ? "" : detail);
  }

  // R positive-semidefinite at every sample (eigensolver-noise tolerance).
  {
    bool ok = true;
    std::string detail;
    for (const auto& x : samples) {
      Matrix R = sys.dissipation(x);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (R + R.transpose()));
      double lo = es.eigenvalues().minCoeff();
      if (lo < -1e-10 * (1.0 + R.norm())) {
        ok = false;
        detail = "min eigenvalue " + std::to_string(lo) + " at x = " + brief(x);
        break;
      }
    }
    add("dissipation positive-semidefinite", ok, ok ? "" : detail);
  }

  // S positive-definite (constant, checked once more for the report).
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        0.5 * (sys.input_cost() + sys.input_cost().transpose()));
    double lo = es.eigenvalues().minCoeff();
    add("input cost positive-definite", lo > 0.0,
        lo > 0.0 ? "" : "min eigenvalue " + std::to_string(lo));
  }

  // r(x) > 0 off the origin at every sample.
  {
    bool ok = true;
    std::string detail;
    for (const auto& x : samples) {
      if (x.norm() < 1e-12) continue;
      double r = sys.state_cost(x);
      if (!(r > 0.0)) {
        ok = false;
        detail = "r = " + std::to_string(r) + " at x = " + brief(x);
        break;
      }
    }
    add("state cost positive off origin", ok, ok ? "" : detail);
  }

  // H(0) = 0 and grad H(0) = 0.
  {
    Vector origin = Vector::Zero(sys.dim_x());
    double h0 = sys.hamiltonian(origin);
    double g0 = sys.grad_hamiltonian(origin).norm();
    bool ok = std::abs(h0) <= tol && g0 <= tol;
    add("hamiltonian vanishes at origin", ok,
        ok ? "" : "H(0) = " + std::to_string(h0) + ", |gradH(0)| = " + std::to_string(g0));
  }

  // grad H consistent with H by central differences.
  {
    bool ok = true;
    std::string detail;
    for (const auto& x : samples) {
      Vector g = sys.grad_hamiltonian(x);
      Vector fd(sys.dim_x());
      double h = 1e-5 * (1.0 + x.norm());
      for (int i = 0; i < sys.dim_x(); ++i) {
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        fd(i) = (sys.hamiltonian(xp) - sys.hamiltonian(xm)) / (2.0 * h);
      }
      double rel = (fd - g).norm() / std::max(1.0, g.norm());
      if (rel > 1e-5) {
        ok = false;
        detail = "relative error " + std::to_string(rel) + " at x = " + brief(x);
        break;
      }
    }
    add("hamiltonian gradient consistent", ok, ok ? "" : detail);
  }

  return report;
}

PhsSystem make_polynomial_system(const PolynomialMatrix& J, const PolynomialMatrix& R,
                                 const PolynomialMatrix& G, const Polynomial& H,
                                 const Polynomial& r, Matrix S, std::string name) {
  const int n = J.rows();
  const int m = G.cols();
  if (J.cols() != n || R.rows() != n || R.cols() != n || G.rows() != n)
    throw std::invalid_argument("polynomial system: inconsistent matrix shapes");
  if (H.n_vars() != n || r.n_vars() != n || J.n_vars() != n || R.n_vars() != n ||
      G.n_vars() != n)
    throw std::invalid_argument("polynomial system: variable count mismatch");

  std::vector<Polynomial> grad;
  grad.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grad.push_back(H.derivative(i));

  VectorFn grad_fn = [grad, n](const Vector& x) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g(i) = grad[static_cast<std::size_t>(i)].eval(x);
    return g;
  };

  PhsSystem sys(n, m, [J](const Vector& x) { return J.eval(x); },
                [R](const Vector& x) { return R.eval(x); },
                [G](const Vector& x) { return G.eval(x); },
                [H](const Vector& x) { return H.eval(x); }, grad_fn,
                [r](const Vector& x) { return r.eval(x); }, std::move(S), std::move(name));

  // Constant J, R, G with homogeneous quadratic H exposes the linear form
  // used by the Riccati oracle and the kernel certificate.
  if (J.is_constant() && R.is_constant() && G.is_constant() && H.total_degree() <= 2) {
    bool quadratic = true;
    for (const auto& t : H.terms()) {
      int d = 0;
      for (int e : t.exponents) d += e;
      if (d != 2) quadratic = false;
    }
    if (quadratic) {
      Vector zero = Vector::Zero(n);
      Matrix Q(n, n);
      // Q_ij = ∂²H/∂x_i∂x_j, exact for polynomial H.
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          Q(i, j) = grad[static_cast<std::size_t>(i)].derivative(j).eval(zero);
      LinearStructure lin;
      lin.interconnection = J.eval(zero);
      lin.dissipation = R.eval(zero);
      lin.input = G.eval(zero);
      lin.quad = Q;
      lin.drift = (lin.interconnection - lin.dissipation) * Q;

      bool cost_quadratic = r.total_degree() <= 2;
      for (const auto& t : r.terms()) {
        int d = 0;
        for (int e : t.exponents) d += e;
        if (d != 2) cost_quadratic = false;
      }
      if (cost_quadratic) {
        Matrix Qc(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) Qc(i, j) = 0.5 * r.derivative(i).derivative(j).eval(zero);
        lin.cost_quad = Qc;
      }
      sys.set_linear_structure(std::move(lin));
    }
  }
  return sys;
}

PhsSystem linear_example_system() {
  const int n = 2;
  PolynomialMatrix J(n, n, n), R(n, n, n), G(n, 1, n);
  J.at(0, 1) = Polynomial::constant(n, -1.0);
  J.at(1, 0) = Polynomial::constant(n, 1.0);
  R.at(0, 0) = Polynomial::constant(n, 1.0);
  R.at(1, 1) = Polynomial::constant(n, 1.0);
  G.at(0, 0) = Polynomial::constant(n, 1.0);
  Polynomial H(n, {{0.5, {2, 0}}, {0.5, {0, 2}}});
  Polynomial r(n, {{100.0, {2, 0}}, {1.0, {0, 2}}});
  Matrix S = Matrix::Identity(1, 1);
  return make_polynomial_system(J, R, G, H, r, S, "linear-example");
}

PhsSystem nonlinear_example_system() {
  const int n = 2;
  PolynomialMatrix J(n, n, n), R(n, n, n), G(n, 1, n);
  J.at(0, 1) = Polynomial::constant(n, 3.0);
  J.at(1, 0) = Polynomial::constant(n, -3.0);
  R.at(0, 0) = Polynomial(n, {{1.0, {0, 0}}, {1.0, {0, 2}}});  // 1 + x2^2
  R.at(0, 1) = Polynomial::constant(n, 1.0);
  R.at(1, 0) = Polynomial::constant(n, 1.0);
  R.at(1, 1) = Polynomial::constant(n, 2.0);
  G.at(0, 0) = Polynomial::monomial(n, 1.0, {0, 1});  // x2
  Polynomial H(n, {{0.5, {2, 0}}, {0.5, {0, 2}}});
  Polynomial r(n, {{8.0, {2, 0}}, {24.0, {2, 2}}, {8.0, {0, 2}}});
  Matrix S = Matrix::Identity(1, 1);
  return make_polynomial_system(J, R, G, H, r, S, "nonlinear-example");
}

}  // namespace phmoc
