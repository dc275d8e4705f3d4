// Command-line front end: loads or selects a scenario, runs structural
// validation, the CLF certificates and the closed-loop simulation, and
// writes trajectory CSVs plus machine-readable reports.
//
// Exit codes: 0 success, 2 parse/configuration error, 3 certification
// failure, 4 simulation abort.

#include "phmoc/certificates.hpp"
#include "phmoc/csv.hpp"
#include "phmoc/riccati.hpp"
#include "phmoc/scenario_io.hpp"
#include "phmoc/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace phmoc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitCertification = 3;
constexpr int kExitSimulation = 4;

struct Overrides {
  std::optional<double> step;
  std::optional<double> horizon;
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
};

ScenarioDoc resolve_scenario(const std::string& ref, const Overrides& ov) {
  ScenarioDoc doc = is_builtin_scenario(ref) ? builtin_scenario(ref) : load_scenario_file(ref);
  if (ov.step) doc.step = *ov.step;
  if (ov.method) doc.method = *ov.method;
  if (ov.seed) doc.seed = *ov.seed;
  if (ov.horizon) {
    doc.horizon = *ov.horizon;
    // a shortened horizon drops impulses that no longer fit
    std::erase_if(doc.disturbances,
                  [&](const ScenarioDoc::Impulse& d) { return d.time > doc.horizon; });
  }
  return doc;
}

json check_list_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"check", c.check}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

json certificate_json(const Certificate& cert, bool gating) {
  return {{"condition", cert.condition},
          {"passed", cert.passed},
          {"gating", gating},
          {"witnesses", cert.witnesses}};
}

struct CertificationResult {
  json report;
  bool gates_passed = true;
  std::vector<std::string> warnings;
};

CertificationResult run_certification(const Scenario& scn) {
  CertificationResult out;
  auto samples = sample_box(scn.system.dim_x(), scn.box_lo, scn.box_hi, 100, scn.seed);
  auto zsd_samples = sample_box(scn.system.dim_x(), scn.box_lo, scn.box_hi, 1000, scn.seed + 1);

  ValidationReport validation = validate_structure(scn.system, samples);
  out.report["validation"] = check_list_json(validation.checks);
  if (!validation.all_passed()) out.gates_passed = false;

  json certs = json::array();

  // sufficient condition, informational: full-rank dissipation
  Certificate rank_cert = certify_rank_R(scn.system, samples);
  certs.push_back(certificate_json(rank_cert, false));

  // sampled necessary-and-sufficient condition, gating
  Certificate zsd_cert = certify_zsd_sampled(scn.system, zsd_samples);
  certs.push_back(certificate_json(zsd_cert, true));
  if (!zsd_cert.passed) out.gates_passed = false;

  if (scn.system.linear_structure().has_value()) {
    const auto& ls = *scn.system.linear_structure();
    Certificate kernel_cert =
        certify_linear_kernel(ls.interconnection, ls.dissipation, ls.input, ls.quad);
    certs.push_back(certificate_json(kernel_cert, true));
    if (!kernel_cert.passed) out.gates_passed = false;
  }
  out.report["certificates"] = std::move(certs);

  ExtendedClf clf(scn.system, scn.basis);
  Vector w0 = scn.w0.size() ? scn.w0 : Vector::Zero(scn.basis.dim_r);
  ConvexityReport convexity = convexity_diagnostic(scn.system, clf, scn.shifts, scn.x0, w0);
  out.report["convexity"] = {{"rank", convexity.rank},
                             {"required_rank", convexity.required_rank},
                             {"hessian_min_eigenvalue", convexity.hessian_min_eigenvalue},
                             {"passed", convexity.passed}};
  if (!convexity.passed)
    out.warnings.push_back(
        "convexity diagnostic at (x0, w0): rank " + std::to_string(convexity.rank) + " of " +
        std::to_string(convexity.required_rank) +
        " (strict convexity not certified; continuing)");
  return out;
}

std::optional<Vector> resolve_reference_weights(const Scenario& scn, std::string& label) {
  switch (scn.oracle.kind) {
    case OracleSpec::Kind::kNone:
      return std::nullopt;
    case OracleSpec::Kind::kFixedWeights:
      label = "fixed-weights";
      return scn.oracle.weights;
    case OracleSpec::Kind::kRiccati: {
      const auto& ls = scn.system.linear_structure();
      if (!ls.has_value() || !ls->cost_quad.has_value())
        throw ScenarioParseError(
            "riccati oracle needs constant J, R, G with quadratic H and r");
      RiccatiSolution sol =
          solve_riccati(ls->drift, ls->input, *ls->cost_quad, scn.system.input_cost());
      label = "riccati";
      return sol.w_star;
    }
  }
  return std::nullopt;
}

double post_impulse_drift(const Trajectory& traj, double t_imp, bool max_over_window) {
  std::size_t i0 = traj.index_at(t_imp);
  double terminal = (traj.weights.back() - traj.weights[i0]).norm();
  if (!max_over_window) return terminal;
  double worst = 0.0;
  for (std::size_t i = i0; i < traj.size(); ++i)
    worst = std::max(worst, (traj.weights[i] - traj.weights[i0]).norm());
  return worst;
}

int run_one(const std::string& ref, const Overrides& ov, const fs::path& out_root) {
  ScenarioDoc doc;
  Scenario scn = [&] {
    doc = resolve_scenario(ref, ov);
    return build_scenario(doc);
  }();

  fs::path out_dir = out_root / scn.name;
  fs::create_directories(out_dir);

  json report;
  report["scenario"] = scn.name;
  report["seed"] = scn.seed;

  CertificationResult cert = run_certification(scn);
  report.update(cert.report);
  for (const auto& w : cert.warnings) std::cout << "warning: " << w << "\n";
  if (!cert.gates_passed) {
    std::ofstream(out_dir / doc.outputs.report) << report.dump(2) << "\n";
    std::cout << scn.name << ": certification FAILED (see "
              << (out_dir / doc.outputs.report).string() << ")\n";
    return kExitCertification;
  }

  std::string oracle_label;
  std::optional<Vector> ref_weights = resolve_reference_weights(scn, oracle_label);

  Trajectory traj = simulate(scn);

  std::optional<Trajectory> reference;
  if (ref_weights) {
    Scenario ref_scn = scn;
    if (!scn.oracle.basis_name.empty()) ref_scn.basis = basis_by_name(scn.oracle.basis_name);
    reference = simulate_reference(ref_scn, *ref_weights);
  }

  TrajectoryCheckReport invariants = check_trajectory_invariants(traj);
  report["invariants"] = check_list_json(invariants.checks);

  double t_imp = scn.disturbances.empty() ? 0.0 : scn.disturbances.back().time;
  json summary;
  summary["terminal_upsilon"] = traj.upsilon.back();
  summary["total_cost"] = traj.cost_accum.back();
  summary["terminal_state_norm"] = traj.state.back().norm();
  summary["upsilon_oscillation_amplitude"] =
      upsilon_oscillation_amplitude(traj, 0.0, scn.horizon);
  if (!scn.disturbances.empty()) {
    summary["post_impulse_weight_drift"] = post_impulse_drift(traj, t_imp, false);
    summary["max_post_impulse_weight_deviation"] = post_impulse_drift(traj, t_imp, true);
  }
  if (ref_weights) {
    summary["oracle"] = oracle_label;
    summary["terminal_weight_error"] = (traj.weights.back() - *ref_weights).norm();
    ComparisonReport cmp = compare(traj, *reference, t_imp);
    report["comparison"] = {{"from_time", t_imp},
                            {"sup_state_diff", cmp.sup_state_diff},
                            {"l2_state_diff", cmp.l2_state_diff},
                            {"max_upsilon_dev", cmp.max_upsilon_dev},
                            {"terminal_weight_diff", cmp.terminal_weight_diff}};
  }
  report["summary"] = summary;

  write_trajectory_csv_file((out_dir / doc.outputs.trajectory).string(), traj);
  if (reference)
    write_trajectory_csv_file((out_dir / doc.outputs.reference).string(), *reference);
  std::ofstream(out_dir / doc.outputs.report) << report.dump(2) << "\n";

  std::ostringstream text;
  text << "scenario: " << scn.name << "\n";
  text << "  terminal upsilon:        " << traj.upsilon.back() << "\n";
  if (ref_weights)
    text << "  terminal |w - w_ref|:    " << summary["terminal_weight_error"].get<double>()
         << "  (" << oracle_label << ")\n";
  text << "  total cost:              " << traj.cost_accum.back() << "\n";
  text << "  upsilon oscillation:     " << summary["upsilon_oscillation_amplitude"].get<double>()
       << "\n";
  if (!scn.disturbances.empty())
    text << "  post-impulse w drift:    " << summary["post_impulse_weight_drift"].get<double>()
         << "  (max deviation " << summary["max_post_impulse_weight_deviation"].get<double>()
         << ")\n";
  if (ref_weights)
    text << "  sup |x - x_ref| (t>=" << t_imp
         << "): " << report["comparison"]["sup_state_diff"].get<double>() << "\n";
  text << "  invariants:\n";
  for (const auto& c : invariants.checks)
    text << "    [" << (c.passed ? "PASS" : "FAIL") << "] " << c.check
         << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  std::ofstream(out_dir / doc.outputs.summary) << text.str();
  std::cout << text.str();

  return invariants.all_passed() ? kExitOk : kExitCertification;
}

int certify_one(const std::string& ref, const Overrides& ov, const std::string& out_file) {
  ScenarioDoc doc = resolve_scenario(ref, ov);
  Scenario scn = build_scenario(doc);
  CertificationResult cert = run_certification(scn);
  cert.report["scenario"] = scn.name;
  cert.report["seed"] = scn.seed;
  for (const auto& w : cert.warnings) std::cout << "warning: " << w << "\n";
  std::string text = cert.report.dump(2) + "\n";
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    out << text;
  }
  std::cout << text;
  return cert.gates_passed ? kExitOk : kExitCertification;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SimulationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}

int run_many(const std::vector<std::string>& refs, const Overrides& ov,
             const fs::path& out_root, int jobs) {
  if (refs.size() == 1 || jobs <= 1) {
    int worst = kExitOk;
    for (const auto& ref : refs)
      worst = std::max(worst, guarded([&] { return run_one(ref, ov, out_root); }));
    return worst;
  }

  // one process per scenario, at most `jobs` in flight
  std::vector<pid_t> active;
  int worst = kExitOk;
  auto reap_one = [&worst, &active] {
    int status = 0;
    pid_t done = waitpid(-1, &status, 0);
    if (done > 0) {
      std::erase(active, done);
      worst = std::max(worst, WIFEXITED(status) ? WEXITSTATUS(status) : kExitSimulation);
    }
  };
  for (const auto& ref : refs) {
    while (static_cast<int>(active.size()) >= jobs) reap_one();
    pid_t pid = fork();
    if (pid == 0) {
      int code = guarded([&] { return run_one(ref, ov, out_root); });
      std::cout.flush();
      std::cerr.flush();
      _exit(code);
    }
    if (pid < 0) {
      std::cerr << "error: fork failed\n";
      return kExitSimulation;
    }
    active.push_back(pid);
  }
  while (!active.empty()) reap_one();
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive optimal control of port-Hamiltonian systems"};
  app.require_subcommand(1);

  Overrides ov;
  std::vector<std::string> scenario_refs;
  std::string out_dir = "phmoc-out";
  std::string certify_out;
  int jobs = 1;

  double step_val = 0.0, horizon_val = 0.0;
  std::uint64_t seed_val = 0;
  std::string method_val;

  CLI::App* run = app.add_subcommand("run", "validate, certify and simulate scenarios");
  run->add_option("scenario", scenario_refs,
                  "builtin name (linear-example, nonlinear-example, nonlinear-wrong-basis) "
                  "or scenario file path")
      ->required();
  run->add_option("--out", out_dir, "output directory (one subdirectory per scenario)");
  auto* run_seed = run->add_option("--seed", seed_val, "sampling seed for certificates");
  auto* run_step = run->add_option("--step", step_val, "integration step override [s]");
  auto* run_horizon = run->add_option("--horizon", horizon_val, "horizon override [s]");
  auto* run_method = run->add_option("--method", method_val, "adaptation method override")
                         ->check(CLI::IsMember({"gradient", "newton", "newton-pseudoinverse"}));
  run->add_option("--jobs", jobs, "run scenarios in up to K parallel processes")
      ->check(CLI::PositiveNumber);

  CLI::App* certify = app.add_subcommand("certify", "run the CLF certificates only");
  certify->add_option("scenario", scenario_refs, "builtin name or scenario file path")
      ->required();
  certify->add_option("--out", certify_out, "write the certification report to this file");
  auto* cert_seed = certify->add_option("--seed", seed_val, "sampling seed for certificates");

  CLI11_PARSE(app, argc, argv);

  if (run_step->count()) ov.step = step_val;
  if (run_horizon->count()) ov.horizon = horizon_val;
  if (run_method->count()) ov.method = method_val;
  if (run_seed->count() || cert_seed->count()) ov.seed = seed_val;

  if (app.got_subcommand(run)) return run_many(scenario_refs, ov, out_dir, jobs);
  int worst = kExitOk;
  for (const auto& ref : scenario_refs)
    worst = std::max(worst, guarded([&] { return certify_one(ref, ov, certify_out); }));
  return worst;
}
