#include "phmoc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phmoc {

void Scenario::validate() const {
  if (x0.size() != system.dim_x())
    throw std::invalid_argument("scenario: x0 has wrong dimension");
  if (basis.dim_x != system.dim_x())
    throw std::invalid_argument("scenario: basis dimension mismatch");
  if (w0.size() != 0 && w0.size() != basis.dim_r)
    throw std::invalid_argument("scenario: w0 length must equal the basis size");
  if (!(step > 0.0)) throw std::invalid_argument("scenario: step must be positive");
  if (!(horizon > step)) throw std::invalid_argument("scenario: step must be below horizon");
  if (record_every < 1) throw std::invalid_argument("scenario: record_every must be >= 1");
  validate_shift_set(shifts, basis.dim_r, system.dim_x());
  for (const auto& d : disturbances) {
    if (d.time < 0.0 || d.time > horizon)
      throw std::invalid_argument("scenario: impulse time outside the horizon");
    if (d.jump.size() != system.dim_x())
      throw std::invalid_argument("scenario: impulse jump has wrong dimension");
  }
  if (box_lo >= box_hi) throw std::invalid_argument("scenario: empty sampling box");
}

std::size_t Trajectory::index_at(double t) const {
  if (time.empty()) throw std::out_of_range("trajectory: empty");
  auto it = std::lower_bound(time.begin(), time.end(), t - 1e-12);
  std::size_t k = static_cast<std::size_t>(std::distance(time.begin(), it));
  if (k == time.size() || std::abs(time[k] - t) > 1e-9 * (1.0 + std::abs(t)))
    throw std::out_of_range("trajectory: time not on the recorded grid");
  return k;
}

namespace {

struct ImpulsePlan {
  // step index -> accumulated jump applied after that step's sample
  std::vector<std::pair<long, Vector>> jumps;
};

ImpulsePlan plan_impulses(const Scenario& scn, long n_steps) {
  ImpulsePlan plan;
  for (const auto& d : scn.disturbances) {
    long k = std::lround(d.time / scn.step);
    k = std::clamp(k, 0L, n_steps);
    bool merged = false;
    for (auto& [idx, jump] : plan.jumps)
      if (idx == k) {
        jump += d.jump;
        merged = true;
      }
    if (!merged) plan.jumps.emplace_back(k, d.jump);
  }
  return plan;
}

class Recorder {
 public:
  Recorder(Trajectory& traj, const Scenario& scn) : traj_(traj), scn_(scn) {}

  void record(double t, const Vector& x, const Vector& w, const Vector& u, double ups,
              double value, double vdot) {
    double integrand = 0.5 * (scn_.system.state_cost(x) + u.dot(scn_.system.input_cost() * u));
    if (has_prev_) cost_ += 0.5 * (integrand + prev_integrand_) * (t - prev_time_);
    prev_integrand_ = integrand;
    prev_time_ = t;
    has_prev_ = true;
    traj_.time.push_back(t);
    traj_.state.push_back(x);
    traj_.weights.push_back(w);
    traj_.input.push_back(u);
    traj_.upsilon.push_back(ups);
    traj_.clf_value.push_back(value);
    traj_.vdot_closed.push_back(vdot);
    traj_.cost_accum.push_back(cost_);
  }

  /// Restart the trapezoid from the post-jump integrand at the same time,
  /// so the interval after an impulse is charged at the new state.
  void prime(double t, double integrand) {
    prev_integrand_ = integrand;
    prev_time_ = t;
    has_prev_ = true;
  }

 private:
  Trajectory& traj_;
  const Scenario& scn_;
  double cost_ = 0.0;
  double prev_integrand_ = 0.0;
  double prev_time_ = 0.0;
  bool has_prev_ = false;
};

template <typename Rhs, typename Observe, typename Integrand>
Trajectory integrate(const Scenario& scn, const Rhs& rhs, const Observe& observe,
                     const Integrand& integrand, int dim_r) {
  const long n_steps = std::lround(scn.horizon / scn.step);
  ImpulsePlan plan = plan_impulses(scn, n_steps);

  Trajectory traj;
  traj.dim_x = scn.system.dim_x();
  traj.dim_u = scn.system.dim_u();
  traj.dim_r = dim_r;
  Recorder recorder(traj, scn);

  Vector z(scn.system.dim_x() + dim_r);
  z.head(scn.system.dim_x()) = scn.x0;
  z.tail(dim_r) = scn.w0.size() ? scn.w0 : Vector::Zero(dim_r);

  const double h = scn.step;
  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    if (!z.allFinite())
      throw SimulationError("simulation aborted: non-finite state at t = " + std::to_string(t),
                            t);
    if (k % scn.record_every == 0 || k == n_steps) observe(t, z, recorder);
    for (const auto& [idx, jump] : plan.jumps)
      if (idx == k) {
        z.head(scn.system.dim_x()) += jump;
        try {
          recorder.prime(t, integrand(z));
        } catch (const ClfViolationError& e) {
          throw SimulationError(
              "simulation aborted at t = " + std::to_string(t) + ": " + e.what(), t);
        }
      }
    if (k == n_steps) break;
    try {
      Vector k1 = rhs(z);
      Vector k2 = rhs(z + 0.5 * h * k1);
      Vector k3 = rhs(z + 0.5 * h * k2);
      Vector k4 = rhs(z + h * k3);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const ClfViolationError& e) {
      std::ostringstream os;
      os << "simulation aborted at t = " << t << ": " << e.what();
      throw SimulationError(os.str(), t);
    }
  }
  return traj;
}

}  // namespace

Trajectory simulate(const Scenario& scn) {
  scn.validate();
  const PhsSystem& sys = scn.system;
  ExtendedClf clf(sys, scn.basis);
  const int n = sys.dim_x(), r = clf.dim_r();

  auto rhs = [&](const Vector& z) -> Vector {
    Vector x = z.head(n), w = z.tail(r);
    if (sys.state_cost(x) < 0.0)
      throw ClfViolationError("state cost became negative (problem assumptions violated)", x);
    Vector u = control(sys, clf, x, w);
    Vector out(n + r);
    out.head(n) = sys.drift(x) + sys.input_map(x) * u;
    out.tail(r) = weight_rhs(sys, clf, scn.shifts, x, w);
    return out;
  };

  auto observe = [&](double t, const Vector& z, Recorder& rec) {
    Vector x = z.head(n), w = z.tail(r);
    MocScalars sc = moc_scalars(sys, clf, x, w);
    double ups;
    Vector u;
    try {
      ups = upsilon(sc, degenerate_threshold(sys, clf.gradient(x, w)));
      u = control(sys, clf, x, w);
    } catch (const ClfViolationError& e) {
      throw SimulationError("simulation aborted at t = " + std::to_string(t) + ": " + e.what(),
                            t);
    }
    rec.record(t, x, w, u, ups, clf.value(x, w), vdot_closed_form(sc));
  };

  auto integrand = [&](const Vector& z) {
    Vector x = z.head(n), w = z.tail(r);
    Vector u = control(sys, clf, x, w);
    return 0.5 * (sys.state_cost(x) + u.dot(sys.input_cost() * u));
  };

  return integrate(scn, rhs, observe, integrand, r);
}

Trajectory simulate_reference(const Scenario& scn, const Vector& fixed_weights) {
  scn.validate();
  const PhsSystem& sys = scn.system;
  ExtendedClf clf(sys, scn.basis);
  const int n = sys.dim_x(), r = clf.dim_r();
  if (fixed_weights.size() != r)
    throw std::invalid_argument("simulate_reference: fixed weights have wrong dimension");

  auto law = [&](const Vector& x) -> Vector {
    Vector grad_v = clf.gradient(x, fixed_weights);
    return -(sys.input_cost_inverse() * (sys.input_map(x).transpose() * grad_v));
  };

  auto rhs = [&](const Vector& z) -> Vector {
    Vector x = z.head(n);
    Vector out = Vector::Zero(n + r);
    out.head(n) = sys.drift(x) + sys.input_map(x) * law(x);
    return out;
  };

  auto observe = [&](double t, const Vector& z, Recorder& rec) {
    (void)t;
    Vector x = z.head(n);
    MocScalars sc = moc_scalars(sys, clf, x, fixed_weights);
    rec.record(t, x, fixed_weights, law(x), 1.0, clf.value(x, fixed_weights),
               vdot_closed_form(sc));
  };

  auto integrand = [&](const Vector& z) {
    Vector x = z.head(n);
    Vector u = law(x);
    return 0.5 * (sys.state_cost(x) + u.dot(sys.input_cost() * u));
  };

  Scenario ref = scn;
  ref.w0 = fixed_weights;
  return integrate(ref, rhs, observe, integrand, r);
}

ComparisonReport compare(const Trajectory& a, const Trajectory& b, double t_from) {
  if (a.size() != b.size())
    throw std::invalid_argument("compare: trajectories have different lengths");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.time[i] - b.time[i]) > 1e-12)
      throw std::invalid_argument("compare: sampling grids differ");

  ComparisonReport report;
  double l2 = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.time[i] + 1e-12 < t_from) continue;
    double d = (a.state[i] - b.state[i]).lpNorm<Eigen::Infinity>();
    report.sup_state_diff = std::max(report.sup_state_diff, d);
    l2 += (a.state[i] - b.state[i]).squaredNorm();
    report.max_upsilon_dev = std::max(report.max_upsilon_dev, std::abs(a.upsilon[i] - 1.0));
    ++count;
  }
  double dt = a.size() > 1 ? a.time[1] - a.time[0] : 0.0;
  report.l2_state_diff = std::sqrt(l2 * dt);
  report.terminal_weight_diff =
      a.dim_r == b.dim_r ? (a.weights.back() - b.weights.back()).norm()
                         : std::numeric_limits<double>::quiet_NaN();
  (void)count;
  return report;
}

TrajectoryCheckReport check_trajectory_invariants(const Trajectory& traj) {
  TrajectoryCheckReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  bool v_pos = true, vdot_ok = true, ups_pos = true, cost_ok = true, finite = true;
  std::string v_detail, vdot_detail, ups_detail, cost_detail, finite_detail;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (!traj.state[i].allFinite() || !traj.weights[i].allFinite() ||
        !std::isfinite(traj.upsilon[i]) || !std::isfinite(traj.clf_value[i])) {
      finite = false;
      finite_detail = "non-finite entry at t = " + std::to_string(traj.time[i]);
      break;
    }
    if (traj.state[i].norm() > 1e-9 && !(traj.clf_value[i] > 0.0) && v_pos) {
      v_pos = false;
      v_detail = "V = " + std::to_string(traj.clf_value[i]) +
                 " at t = " + std::to_string(traj.time[i]);
    }
    if (traj.vdot_closed[i] > 0.0 && vdot_ok) {
      vdot_ok = false;
      vdot_detail = "vdot = " + std::to_string(traj.vdot_closed[i]) +
                    " at t = " + std::to_string(traj.time[i]);
    }
    if (!(traj.upsilon[i] > 0.0) && ups_pos) {
      ups_pos = false;
      ups_detail = "upsilon = " + std::to_string(traj.upsilon[i]) +
                   " at t = " + std::to_string(traj.time[i]);
    }
    if (i > 0 && traj.cost_accum[i] < traj.cost_accum[i - 1] - 1e-12 && cost_ok) {
      cost_ok = false;
      cost_detail = "cost decreased at t = " + std::to_string(traj.time[i]);
    }
  }
  add("all samples finite", finite, finite_detail);
  add("V positive off the origin", v_pos, v_detail);
  add("closed-form Vdot nonpositive", vdot_ok, vdot_detail);
  add("upsilon positive", ups_pos, ups_detail);
  add("accumulated cost nondecreasing", cost_ok, cost_detail);
  return report;
}

double upsilon_oscillation_amplitude(const Trajectory& traj, double t_lo, double t_hi) {
  std::vector<double> ups;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj.time[i] >= t_lo - 1e-12 && traj.time[i] <= t_hi + 1e-12)
      ups.push_back(traj.upsilon[i]);
  if (ups.size() < 3) return 0.0;

  // Peak amplitude: rise from the lowest point before, fall to the lowest
  // point after (and the mirrored trough version).
  double best = 0.0;
  double min_before = ups.front(), max_before = ups.front();
  std::vector<double> min_after(ups.size()), max_after(ups.size());
  min_after.back() = max_after.back() = ups.back();
  for (std::size_t i = ups.size() - 1; i-- > 0;) {
    min_after[i] = std::min(ups[i], min_after[i + 1]);
    max_after[i] = std::max(ups[i], max_after[i + 1]);
  }
  for (std::size_t j = 1; j + 1 < ups.size(); ++j) {
    min_before = std::min(min_before, ups[j - 1]);
    max_before = std::max(max_before, ups[j - 1]);
    best = std::max(best, std::min(ups[j] - min_before, ups[j] - min_after[j + 1]));
    best = std::max(best, std::min(max_before - ups[j], max_after[j + 1] - ups[j]));
  }
  return best;
}

}  // namespace phmoc
