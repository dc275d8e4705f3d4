#include "phmoc/scenario_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace phmoc {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ScenarioParseError("unknown key '" + key + "' in " + where);
  }
}

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioParseError(where + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioParseError(where + ": non-finite number");
  return v;
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(finite_number(e, where));
  return out;
}

ScenarioDoc::PolyTable poly_table(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioParseError(where + ": expected a polynomial term table");
  ScenarioDoc::PolyTable table;
  for (const auto& term : j) {
    auto row = number_list(term, where + " term");
    if (row.size() < 2)
      throw ScenarioParseError(where + ": a term needs [coeff, e1, ..., en]");
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i] < 0.0 || row[i] != std::floor(row[i]))
        throw ScenarioParseError(where + ": exponents must be nonnegative integers");
    }
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<std::vector<ScenarioDoc::PolyTable>> poly_matrix(const json& j, int rows, int cols,
                                                             const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ScenarioParseError(where + ": expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<ScenarioDoc::PolyTable>> out;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ScenarioParseError(where + ": expected " + std::to_string(cols) + " columns");
    std::vector<ScenarioDoc::PolyTable> r;
    for (const auto& entry : row) r.push_back(poly_table(entry, where));
    out.push_back(std::move(r));
  }
  return out;
}

json poly_table_to_json(const ScenarioDoc::PolyTable& table) {
  json arr = json::array();
  for (const auto& row : table) arr.push_back(row);
  return arr;
}

json poly_matrix_to_json(const std::vector<std::vector<ScenarioDoc::PolyTable>>& m) {
  json arr = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& entry : row) r.push_back(poly_table_to_json(entry));
    arr.push_back(std::move(r));
  }
  return arr;
}

Polynomial table_to_polynomial(const ScenarioDoc::PolyTable& table, int n_vars,
                               const std::string& where) {
  std::vector<Polynomial::Term> terms;
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n_vars + 1)
      throw ScenarioParseError(where + ": term length must be 1 + dim_x");
    Polynomial::Term t;
    t.coeff = row[0];
    for (int i = 0; i < n_vars; ++i) t.exponents.push_back(static_cast<int>(row[1 + static_cast<std::size_t>(i)]));
    terms.push_back(std::move(t));
  }
  return Polynomial(n_vars, std::move(terms));
}

PolynomialMatrix tables_to_matrix(const std::vector<std::vector<ScenarioDoc::PolyTable>>& m,
                                  int rows, int cols, int n_vars, const std::string& where) {
  PolynomialMatrix out(rows, cols, n_vars);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.at(i, j) = table_to_polynomial(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], n_vars, where);
  return out;
}

}  // namespace

ScenarioDoc scenario_doc_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ScenarioParseError("scenario file must be a JSON object");
  reject_unknown_keys(root,
                      {"name", "system", "basis", "shifts", "alpha", "method", "x0", "w0",
                       "horizon", "step", "record_every", "disturbances", "oracle", "seed",
                       "box", "outputs"},
                      "scenario");

  ScenarioDoc doc;
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ScenarioParseError("name: expected a string");
    doc.name = root["name"].get<std::string>();
  }

  if (!root.contains("system")) throw ScenarioParseError("missing key 'system'");
  const json& sys = root["system"];
  if (sys.is_string()) {
    doc.system = sys.get<std::string>();
  } else if (sys.is_object()) {
    reject_unknown_keys(sys, {"dim_x", "dim_u", "J", "R", "G", "H", "r", "S"}, "system");
    ScenarioDoc::SystemTables tables;
    for (const char* key : {"dim_x", "dim_u", "J", "R", "G", "H", "r", "S"})
      if (!sys.contains(key))
        throw ScenarioParseError(std::string("system: missing key '") + key + "'");
    tables.dim_x = static_cast<int>(finite_number(sys["dim_x"], "system.dim_x"));
    tables.dim_u = static_cast<int>(finite_number(sys["dim_u"], "system.dim_u"));
    if (tables.dim_x <= 0 || tables.dim_u <= 0)
      throw ScenarioParseError("system: dimensions must be positive");
    tables.J = poly_matrix(sys["J"], tables.dim_x, tables.dim_x, "system.J");
    tables.R = poly_matrix(sys["R"], tables.dim_x, tables.dim_x, "system.R");
    tables.G = poly_matrix(sys["G"], tables.dim_x, tables.dim_u, "system.G");
    tables.H = poly_table(sys["H"], "system.H");
    tables.r = poly_table(sys["r"], "system.r");
    if (!sys["S"].is_array() || static_cast<int>(sys["S"].size()) != tables.dim_u)
      throw ScenarioParseError("system.S: expected dim_u rows");
    for (const auto& row : sys["S"]) {
      auto r = number_list(row, "system.S");
      if (static_cast<int>(r.size()) != tables.dim_u)
        throw ScenarioParseError("system.S: expected dim_u columns");
      tables.S.push_back(std::move(r));
    }
    doc.system = std::move(tables);
  } else {
    throw ScenarioParseError("system: expected a builtin name or coefficient tables");
  }

  if (!root.contains("basis")) throw ScenarioParseError("missing key 'basis'");
  const json& basis = root["basis"];
  if (basis.is_string()) {
    doc.basis = basis.get<std::string>();
  } else if (basis.is_array()) {
    std::vector<std::vector<int>> exps;
    for (const auto& tuple : basis) {
      auto row = number_list(tuple, "basis tuple");
      std::vector<int> e;
      for (double v : row) {
        if (v < 0.0 || v != std::floor(v))
          throw ScenarioParseError("basis: exponents must be nonnegative integers");
        e.push_back(static_cast<int>(v));
      }
      exps.push_back(std::move(e));
    }
    doc.basis = std::move(exps);
  } else {
    throw ScenarioParseError("basis: expected a name or a list of exponent tuples");
  }

  if (!root.contains("shifts")) throw ScenarioParseError("missing key 'shifts'");
  for (const auto& c : root["shifts"]) doc.shifts.push_back(number_list(c, "shift"));

  if (root.contains("alpha")) doc.alpha = finite_number(root["alpha"], "alpha");
  if (root.contains("method")) {
    if (!root["method"].is_string()) throw ScenarioParseError("method: expected a string");
    doc.method = root["method"].get<std::string>();
    try {
      (void)adaptation_method_from_string(doc.method);
    } catch (const std::invalid_argument& e) {
      throw ScenarioParseError(e.what());
    }
  }

  if (!root.contains("x0")) throw ScenarioParseError("missing key 'x0'");
  doc.x0 = number_list(root["x0"], "x0");
  if (root.contains("w0")) doc.w0 = number_list(root["w0"], "w0");
  if (root.contains("horizon")) doc.horizon = finite_number(root["horizon"], "horizon");
  if (root.contains("step")) doc.step = finite_number(root["step"], "step");
  if (root.contains("record_every")) {
    double v = finite_number(root["record_every"], "record_every");
    if (v < 1.0 || v != std::floor(v))
      throw ScenarioParseError("record_every: expected a positive integer");
    doc.record_every = static_cast<int>(v);
  }

  if (root.contains("disturbances")) {
    if (!root["disturbances"].is_array())
      throw ScenarioParseError("disturbances: expected an array");
    for (const auto& d : root["disturbances"]) {
      if (!d.is_object()) throw ScenarioParseError("disturbance: expected an object");
      reject_unknown_keys(d, {"time", "jump"}, "disturbance");
      if (!d.contains("time") || !d.contains("jump"))
        throw ScenarioParseError("disturbance: needs 'time' and 'jump'");
      ScenarioDoc::Impulse imp;
      imp.time = finite_number(d["time"], "disturbance.time");
      imp.jump = number_list(d["jump"], "disturbance.jump");
      doc.disturbances.push_back(std::move(imp));
    }
  }

  if (root.contains("oracle")) {
    const json& oracle = root["oracle"];
    if (oracle.is_string()) {
      if (oracle.get<std::string>() != "riccati")
        throw ScenarioParseError("oracle: the only named oracle is 'riccati'");
      doc.oracle_kind = "riccati";
    } else if (oracle.is_object()) {
      reject_unknown_keys(oracle, {"weights", "basis"}, "oracle");
      if (!oracle.contains("weights"))
        throw ScenarioParseError("oracle: fixed-weights oracle needs 'weights'");
      doc.oracle_kind = "fixed-weights";
      doc.oracle_weights = number_list(oracle["weights"], "oracle.weights");
      if (oracle.contains("basis")) {
        if (!oracle["basis"].is_string())
          throw ScenarioParseError("oracle.basis: expected a basis name");
        doc.oracle_basis = oracle["basis"].get<std::string>();
      }
    } else {
      throw ScenarioParseError("oracle: expected 'riccati' or {weights: [...]}");
    }
  }

  if (root.contains("seed")) {
    double v = finite_number(root["seed"], "seed");
    if (v < 0.0 || v != std::floor(v)) throw ScenarioParseError("seed: expected a nonnegative integer");
    doc.seed = static_cast<std::uint64_t>(v);
  }
  if (root.contains("box")) {
    auto b = number_list(root["box"], "box");
    if (b.size() != 2) throw ScenarioParseError("box: expected [lo, hi]");
    doc.box_lo = b[0];
    doc.box_hi = b[1];
  }
  if (root.contains("outputs")) {
    const json& outs = root["outputs"];
    if (!outs.is_object()) throw ScenarioParseError("outputs: expected an object");
    reject_unknown_keys(outs, {"trajectory", "reference", "report", "summary"}, "outputs");
    auto str = [&](const char* key, std::string& into) {
      if (outs.contains(key)) {
        if (!outs[key].is_string())
          throw ScenarioParseError(std::string("outputs.") + key + ": expected a string");
        into = outs[key].get<std::string>();
      }
    };
    str("trajectory", doc.outputs.trajectory);
    str("reference", doc.outputs.reference);
    str("report", doc.outputs.report);
    str("summary", doc.outputs.summary);
  }
  return doc;
}

std::string scenario_doc_to_json(const ScenarioDoc& doc) {
  json root;
  root["name"] = doc.name;
  if (std::holds_alternative<std::string>(doc.system)) {
    root["system"] = std::get<std::string>(doc.system);
  } else {
    const auto& t = std::get<ScenarioDoc::SystemTables>(doc.system);
    json sys;
    sys["dim_x"] = t.dim_x;
    sys["dim_u"] = t.dim_u;
    sys["J"] = poly_matrix_to_json(t.J);
    sys["R"] = poly_matrix_to_json(t.R);
    sys["G"] = poly_matrix_to_json(t.G);
    sys["H"] = poly_table_to_json(t.H);
    sys["r"] = poly_table_to_json(t.r);
    sys["S"] = t.S;
    root["system"] = std::move(sys);
  }
  if (std::holds_alternative<std::string>(doc.basis))
    root["basis"] = std::get<std::string>(doc.basis);
  else
    root["basis"] = std::get<std::vector<std::vector<int>>>(doc.basis);
  root["shifts"] = doc.shifts;
  root["alpha"] = doc.alpha;
  root["method"] = doc.method;
  root["x0"] = doc.x0;
  if (!doc.w0.empty()) root["w0"] = doc.w0;
  root["horizon"] = doc.horizon;
  root["step"] = doc.step;
  if (doc.record_every != 1) root["record_every"] = doc.record_every;
  if (!doc.disturbances.empty()) {
    json arr = json::array();
    for (const auto& d : doc.disturbances) arr.push_back({{"time", d.time}, {"jump", d.jump}});
    root["disturbances"] = std::move(arr);
  }
  if (doc.oracle_kind == "riccati") {
    root["oracle"] = "riccati";
  } else if (doc.oracle_kind == "fixed-weights") {
    json oracle;
    oracle["weights"] = doc.oracle_weights;
    if (!doc.oracle_basis.empty()) oracle["basis"] = doc.oracle_basis;
    root["oracle"] = std::move(oracle);
  }
  root["seed"] = doc.seed;
  root["box"] = {doc.box_lo, doc.box_hi};
  root["outputs"] = {{"trajectory", doc.outputs.trajectory},
                     {"reference", doc.outputs.reference},
                     {"report", doc.outputs.report},
                     {"summary", doc.outputs.summary}};
  return root.dump(2) + "\n";
}

ScenarioDoc load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioParseError("cannot read scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_doc_from_json(buffer.str());
}

Scenario build_scenario(const ScenarioDoc& doc) {
  PhsSystem system = [&]() -> PhsSystem {
    if (std::holds_alternative<std::string>(doc.system)) {
      const std::string& name = std::get<std::string>(doc.system);
      if (name == "linear-example") return linear_example_system();
      if (name == "nonlinear-example") return nonlinear_example_system();
      throw ScenarioParseError("unknown builtin system: " + name);
    }
    const auto& t = std::get<ScenarioDoc::SystemTables>(doc.system);
    Matrix S(t.dim_u, t.dim_u);
    for (int i = 0; i < t.dim_u; ++i)
      for (int j = 0; j < t.dim_u; ++j)
        S(i, j) = t.S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    try {
      return make_polynomial_system(
          tables_to_matrix(t.J, t.dim_x, t.dim_x, t.dim_x, "system.J"),
          tables_to_matrix(t.R, t.dim_x, t.dim_x, t.dim_x, "system.R"),
          tables_to_matrix(t.G, t.dim_x, t.dim_u, t.dim_x, "system.G"),
          table_to_polynomial(t.H, t.dim_x, "system.H"),
          table_to_polynomial(t.r, t.dim_x, "system.r"), S, doc.name);
    } catch (const std::invalid_argument& e) {
      throw ScenarioParseError(std::string("system tables: ") + e.what());
    }
  }();

  BasisSet basis = [&]() -> BasisSet {
    try {
      if (std::holds_alternative<std::string>(doc.basis))
        return basis_by_name(std::get<std::string>(doc.basis));
      return monomial_basis(std::get<std::vector<std::vector<int>>>(doc.basis), "monomials");
    } catch (const std::invalid_argument& e) {
      throw ScenarioParseError(std::string("basis: ") + e.what());
    }
  }();

  Scenario scn{.name = doc.name, .system = std::move(system), .basis = std::move(basis)};
  scn.shifts.learning_rate = doc.alpha;
  try {
    scn.shifts.method = adaptation_method_from_string(doc.method);
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(e.what());
  }
  for (const auto& c : doc.shifts)
    scn.shifts.shifts.push_back(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
  scn.x0 = Eigen::Map<const Vector>(doc.x0.data(), static_cast<Eigen::Index>(doc.x0.size()));
  if (!doc.w0.empty())
    scn.w0 = Eigen::Map<const Vector>(doc.w0.data(), static_cast<Eigen::Index>(doc.w0.size()));
  scn.horizon = doc.horizon;
  scn.step = doc.step;
  scn.record_every = doc.record_every;
  for (const auto& d : doc.disturbances)
    scn.disturbances.push_back(
        {d.time, Eigen::Map<const Vector>(d.jump.data(), static_cast<Eigen::Index>(d.jump.size()))});
  if (doc.oracle_kind == "riccati") {
    scn.oracle.kind = OracleSpec::Kind::kRiccati;
  } else if (doc.oracle_kind == "fixed-weights") {
    scn.oracle.kind = OracleSpec::Kind::kFixedWeights;
    scn.oracle.weights = Eigen::Map<const Vector>(
        doc.oracle_weights.data(), static_cast<Eigen::Index>(doc.oracle_weights.size()));
    scn.oracle.basis_name = doc.oracle_basis;
  }
  scn.box_lo = doc.box_lo;
  scn.box_hi = doc.box_hi;
  scn.seed = doc.seed;
  try {
    scn.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(e.what());
  }
  return scn;
}

std::vector<std::string> builtin_scenario_names() {
  return {"linear-example", "nonlinear-example", "nonlinear-wrong-basis"};
}

bool is_builtin_scenario(const std::string& name) {
  for (const auto& n : builtin_scenario_names())
    if (n == name) return true;
  return false;
}

ScenarioDoc builtin_scenario(const std::string& name) {
  ScenarioDoc doc;
  doc.name = name;
  doc.x0 = {1.0, 1.0};
  doc.horizon = 12.0;
  doc.step = 1e-3;
  doc.disturbances = {{6.0, {1.0, 1.0}}};
  if (name == "linear-example") {
    doc.system = std::string("linear-example");
    doc.basis = std::string("quadratic-2d");
    doc.shifts = {{0, 0}, {1, 0}, {0, 1}, {1, -1}};
    doc.alpha = 0.01;
    doc.oracle_kind = "riccati";
    return doc;
  }
  if (name == "nonlinear-example" || name == "nonlinear-wrong-basis") {
    doc.system = std::string("nonlinear-example");
    doc.basis = std::string(name == "nonlinear-example" ? "quadratic-2d" : "quadratic-2d-wrong");
    doc.shifts = {{0, 0}, {-1, 0}, {0, -1}, {1, -1}};
    doc.alpha = 0.02;
    doc.oracle_kind = "fixed-weights";
    doc.oracle_weights = {1.5, 0.0, 0.5};
    if (name == "nonlinear-wrong-basis") doc.oracle_basis = "quadratic-2d";
    return doc;
  }
  throw ScenarioParseError("unknown builtin scenario: " + name);
}

}  // namespace phmoc
