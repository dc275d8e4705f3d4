#pragma once

#include "phmoc/adaptation.hpp"
#include "phmoc/basis.hpp"
#include "phmoc/moc.hpp"
#include "phmoc/phs_system.hpp"
#include "phmoc/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phmoc {

/// Reference controller used for dashed-line comparisons: either the
/// Riccati solution of the system's linear structure or explicit
/// frozen weights.
struct OracleSpec {
  enum class Kind { kNone, kRiccati, kFixedWeights };
  Kind kind = Kind::kNone;
  Vector weights;          // used by kFixedWeights
  std::string basis_name;  // reference law basis when it differs from the scenario's
};

/// Complete experiment description for one closed-loop run.
struct Scenario {
  std::string name;
  PhsSystem system;
  BasisSet basis;
  ShiftSet shifts;
  Vector x0;
  Vector w0;                       // defaults to zeros(r)
  double horizon = 12.0;           // seconds
  double step = 1e-3;              // seconds, fixed RK4 step
  int record_every = 1;            // recorder decimation
  std::vector<DisturbanceImpulse> disturbances;
  OracleSpec oracle;
  double box_lo = -2.0, box_hi = 2.0;  // sampling box for validation/certificates
  std::uint64_t seed = 24601;

  /// Dimension checks, shift-set validity, impulse times inside the
  /// horizon. Throws std::invalid_argument on violations.
  void validate() const;
};

/// Time series of the closed loop: state, weights, input, multiplier,
/// CLF value, closed-form CLF rate and accumulated cost per sample.
struct Trajectory {
  int dim_x = 0, dim_u = 0, dim_r = 0;
  std::vector<double> time;
  std::vector<Vector> state;
  std::vector<Vector> weights;
  std::vector<Vector> input;
  std::vector<double> upsilon;
  std::vector<double> clf_value;
  std::vector<double> vdot_closed;
  std::vector<double> cost_accum;

  [[nodiscard]] std::size_t size() const { return time.size(); }
  /// Index of the recorded sample at time t (grid-exact within half a step).
  [[nodiscard]] std::size_t index_at(double t) const;
};

/// Integrates the coupled (x, w) closed loop with fixed-step classical
/// RK4: ẋ = (J−R)∂H/∂x + G u*(x, w), ẇ = weight_rhs(x, w). Impulses
/// apply between steps, after the sample at their grid time has been
/// recorded, so recorded rows at an impulse time hold the pre-jump
/// state. Cost accumulates ½(r(x) + uᵀSu) by trapezoid on the recorded
/// grid. Aborts with SimulationError on CLF violations, non-finite
/// states, or negative state cost.
[[nodiscard]] Trajectory simulate(const Scenario& scenario);

/// Same integration and recording with the non-adaptive law
/// u = −S⁻¹Gᵀ∂V/∂x at frozen weights (multiplier column records 1).
[[nodiscard]] Trajectory simulate_reference(const Scenario& scenario,
                                            const Vector& fixed_weights);

/// Sup-norm and L2 state differences over [t_from, end], worst
/// deviation of the multiplier from 1, and terminal weight distance.
struct ComparisonReport {
  double sup_state_diff = 0.0;
  double l2_state_diff = 0.0;
  double max_upsilon_dev = 0.0;   // of the first trajectory
  double terminal_weight_diff = 0.0;
};

[[nodiscard]] ComparisonReport compare(const Trajectory& a, const Trajectory& b,
                                       double t_from);

/// Runtime invariants of a recorded closed-loop trajectory: V > 0 off
/// the origin, closed-form V̇ ≤ 0, Υ > 0, nondecreasing cost, finite
/// entries.
struct TrajectoryCheckReport {
  std::vector<CheckResult> checks;
  [[nodiscard]] bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

[[nodiscard]] TrajectoryCheckReport check_trajectory_invariants(const Trajectory& traj);

/// Largest peak-to-trough movement of the multiplier within [t_lo, t_hi]:
/// the best min(rise-before, fall-after) over interior samples. Zero for
/// monotone signals.
[[nodiscard]] double upsilon_oscillation_amplitude(const Trajectory& traj, double t_lo,
                                                   double t_hi);

}  // namespace phmoc
