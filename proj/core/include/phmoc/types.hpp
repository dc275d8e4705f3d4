#pragma once

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace phmoc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;
using MatrixFn = std::function<Matrix(const Vector&)>;

/// Thrown when the control law is evaluated at a state where the CLF
/// condition genuinely fails (Gᵀ∂V/∂x = 0 with nonnegative drift power
/// and nonzero state cost): the multiplier has no positive value there.
class ClfViolationError : public std::runtime_error {
 public:
  ClfViolationError(std::string message, Vector state)
      : std::runtime_error(std::move(message)), state(std::move(state)) {}
  Vector state;
};

/// Thrown when a closed-loop integration cannot continue (non-finite
/// state, CLF violation at a specific time, negative state cost).
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::string message, double time)
      : std::runtime_error(std::move(message)), time(time) {}
  double time;
};

/// Outcome of one named check; reports aggregate these.
struct CheckResult {
  std::string check;
  bool passed = false;
  std::string detail;
};

/// Uniform samples in the box [lo, hi]^dim, deterministic per seed.
inline std::vector<Vector> sample_box(int dim, double lo, double hi, int count,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Vector> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x(i) = dist(rng);
    samples.push_back(std::move(x));
  }
  return samples;
}

}  // namespace phmoc
