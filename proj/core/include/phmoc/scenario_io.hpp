#pragma once

#include "phmoc/simulate.hpp"

#include <string>
#include <variant>
#include <vector>

namespace phmoc {

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain-data mirror of a scenario file. Polynomials are term tables:
/// one row per monomial, [coefficient, e1, ..., en] with integer
/// exponents. Field-wise comparable so serialize/parse round-trips can
/// be tested exactly.
struct ScenarioDoc {
  using PolyTable = std::vector<std::vector<double>>;

  struct SystemTables {
    int dim_x = 0;
    int dim_u = 0;
    std::vector<std::vector<PolyTable>> J, R;  // dim_x x dim_x entries
    std::vector<std::vector<PolyTable>> G;     // dim_x x dim_u entries
    PolyTable H, r;
    std::vector<std::vector<double>> S;        // dim_u x dim_u
    bool operator==(const SystemTables&) const = default;
  };

  struct Impulse {
    double time = 0.0;
    std::vector<double> jump;
    bool operator==(const Impulse&) const = default;
  };

  struct Outputs {
    std::string trajectory = "trajectory.csv";
    std::string reference = "reference.csv";
    std::string report = "report.json";
    std::string summary = "summary.txt";
    bool operator==(const Outputs&) const = default;
  };

  std::string name = "scenario";
  std::variant<std::string, SystemTables> system;            // builtin name or tables
  std::variant<std::string, std::vector<std::vector<int>>> basis;  // name or exponents
  std::vector<std::vector<double>> shifts;
  double alpha = 0.01;
  std::string method = "gradient";
  std::vector<double> x0;
  std::vector<double> w0;  // empty means zeros(r)
  double horizon = 12.0;
  double step = 1e-3;
  int record_every = 1;
  std::vector<Impulse> disturbances;
  std::string oracle_kind = "none";  // none | riccati | fixed-weights
  std::vector<double> oracle_weights;
  std::string oracle_basis;          // optional basis name for the reference law
  double box_lo = -2.0;
  double box_hi = 2.0;
  std::uint64_t seed = 24601;
  Outputs outputs;

  bool operator==(const ScenarioDoc&) const = default;
};

/// Parses a scenario document. Unknown keys (at any level) and
/// non-finite numbers are rejected with ScenarioParseError.
[[nodiscard]] ScenarioDoc scenario_doc_from_json(const std::string& text);

/// Deterministic serialization; parse(serialize(doc)) == doc.
[[nodiscard]] std::string scenario_doc_to_json(const ScenarioDoc& doc);

[[nodiscard]] ScenarioDoc load_scenario_file(const std::string& path);

/// Compiles the document into a runnable Scenario (builds the system,
/// basis and shift set, checks dimensions).
[[nodiscard]] Scenario build_scenario(const ScenarioDoc& doc);

[[nodiscard]] std::vector<std::string> builtin_scenario_names();
[[nodiscard]] bool is_builtin_scenario(const std::string& name);
/// The three worked scenarios; throws ScenarioParseError for other names.
[[nodiscard]] ScenarioDoc builtin_scenario(const std::string& name);

}  // namespace phmoc
