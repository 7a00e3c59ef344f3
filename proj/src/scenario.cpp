// Copyright 2026 The quasiprob Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qp/report.hpp"

namespace qp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Complex complex_at(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  fail(path, "expected a number or an [re, im] pair");
}

Matrix matrix_at(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected a " + std::to_string(dim) + "-row matrix");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(path + "/" + std::to_string(r),
           "expected " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = complex_at(row[c],
                           path + "/" + std::to_string(r) + "/" +
                               std::to_string(c));
  }
  return m;
}

MultiIndex parse_exponents(const std::string& key, const std::string& path) {
  MultiIndex idx;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      idx.push_back(std::stoi(part));
    } catch (const std::exception&) {
      fail(path, "bad exponent key '" + key + "'");
    }
    if (idx.back() < 0) fail(path, "negative exponent in '" + key + "'");
  }
  if (idx.empty()) fail(path, "empty exponent key");
  return idx;
}

std::string exponent_key(const MultiIndex& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s;
}

Polynomial parse_polynomial(const json& j, int variables,
                            const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of exponent -> coeff");
  Polynomial p;
  for (const auto& [key, value] : j.items()) {
    MultiIndex idx = parse_exponents(key, path + "/" + key);
    if (static_cast<int>(idx.size()) != variables)
      fail(path + "/" + key, "expected " + std::to_string(variables) +
                                 " exponents");
    p[idx] = number_at(value, path + "/" + key);
  }
  return p;
}

NoiseKind kind_from_string(const std::string& s, const std::string& path) {
  if (s == "gaussian") return NoiseKind::GaussianProduct;
  if (s == "laplace") return NoiseKind::LaplaceProduct;
  if (s == "delta_groups") return NoiseKind::DeltaCorrelatedGroups;
  fail(path, "unknown noise kind '" + s + "'");
}

NoiseModel parse_noise(const json& j, int variables, const std::string& path) {
  const std::string kind =
      field(j, "kind", path).is_string()
          ? field(j, "kind", path).get<std::string>()
          : (fail(path + "/kind", "expected a string"), "");
  const NoiseKind k = kind_from_string(kind, path + "/kind");
  if (k != NoiseKind::DeltaCorrelatedGroups) {
    const json& params = field(j, "params", path);
    if (!params.is_array()) fail(path + "/params", "expected an array");
    std::vector<double> p;
    for (std::size_t i = 0; i < params.size(); ++i)
      p.push_back(number_at(params[i],
                            path + "/params/" + std::to_string(i)));
    if (variables > 0 && static_cast<int>(p.size()) == 1)
      p.assign(variables, p[0]);  // one parameter replicates per variable
    return k == NoiseKind::GaussianProduct
               ? NoiseModel::gaussian_product(std::move(p))
               : NoiseModel::laplace_product(std::move(p));
  }
  const json& groups = field(j, "groups", path);
  if (!groups.is_array()) fail(path + "/groups", "expected an array");
  std::vector<NoiseGroup> gs;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::string gpath = path + "/groups/" + std::to_string(i);
    const json& g = groups[i];
    NoiseGroup ng;
    const json& members = field(g, "members", gpath);
    if (!members.is_array()) fail(gpath + "/members", "expected an array");
    for (std::size_t m = 0; m < members.size(); ++m)
      ng.members.push_back(
          int_at(members[m], gpath + "/members/" + std::to_string(m)));
    ng.kind = kind_from_string(
        field(g, "kind", gpath).get<std::string>(), gpath + "/kind");
    ng.param = number_at(field(g, "param", gpath), gpath + "/param");
    gs.push_back(std::move(ng));
  }
  return NoiseModel::delta_correlated(variables, std::move(gs));
}

}  // namespace

Schedule Scenario::schedule() const {
  Schedule s;
  std::map<std::string, int> index;
  for (const auto& [name, obs] : observables) {
    index[name] = static_cast<int>(s.registry.size());
    s.registry.push_back(obs);
  }
  if (s.registry.empty())
    throw ValidationError("/observables: scenario defines none");
  s.hamiltonian = hamiltonian;
  for (const auto& [name, time] : schedule_entries) {
    auto it = index.find(name);
    if (it == index.end())
      throw ValidationError("/schedule: unknown observable '" + name + "'");
    s.steps.push_back({it->second, time});
  }
  s.validate();
  return s;
}

const DensityState& Scenario::state_or_throw() const {
  if (!initial_state)
    throw ValidationError("/initial_state: required by this task");
  return *initial_state;
}

const NoiseModel& Scenario::noise_or_throw() const {
  if (!noise) throw ValidationError("/noise: required by this task");
  return *noise;
}

const TaskSpec* Scenario::find_task(const std::string& name) const {
  for (const TaskSpec& t : tasks)
    if (t.name == name) return &t;
  return nullptr;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ValidationError("/: scenario must be an object");
  Scenario sc;
  sc.dimension = int_at(field(j, "dimension", ""), "/dimension");
  if (sc.dimension < 1 || sc.dimension > kMaxDim)
    fail("/dimension", "outside supported range [1," +
                           std::to_string(kMaxDim) + "]");

  const json& obs = field(j, "observables", "");
  if (!obs.is_object()) fail("/observables", "expected an object");
  for (const auto& [name, mj] : obs.items()) {
    Matrix m = matrix_at(mj, sc.dimension, "/observables/" + name);
    try {
      sc.observables.emplace_back(name, HermitianObservable(std::move(m)));
    } catch (const ValidationError& e) {
      fail("/observables/" + name, e.what());
    }
  }

  if (j.contains("hamiltonian") && !j["hamiltonian"].is_null()) {
    Matrix m = matrix_at(j["hamiltonian"], sc.dimension, "/hamiltonian");
    try {
      sc.hamiltonian = HermitianObservable(std::move(m));
    } catch (const ValidationError& e) {
      fail("/hamiltonian", e.what());
    }
  }

  if (j.contains("initial_state") && !j["initial_state"].is_null()) {
    const json& st = j["initial_state"];
    if (st.contains("pure")) {
      const json& v = st["pure"];
      if (!v.is_array() || static_cast<int>(v.size()) != sc.dimension)
        fail("/initial_state/pure",
             "expected " + std::to_string(sc.dimension) + " amplitudes");
      CVector psi(sc.dimension);
      for (int i = 0; i < sc.dimension; ++i)
        psi(i) = complex_at(v[i], "/initial_state/pure/" + std::to_string(i));
      sc.initial_state = DensityState::pure(psi);
    } else if (st.contains("density")) {
      sc.initial_state = DensityState(
          matrix_at(st["density"], sc.dimension, "/initial_state/density"));
    } else {
      fail("/initial_state", "expected a 'pure' or 'density' field");
    }
  }

  if (j.contains("schedule") && !j["schedule"].is_null()) {
    const json& sch = j["schedule"];
    if (!sch.is_array()) fail("/schedule", "expected an array");
    for (std::size_t i = 0; i < sch.size(); ++i) {
      const std::string path = "/schedule/" + std::to_string(i);
      const json& e = sch[i];
      const json& name = field(e, "observable", path);
      if (!name.is_string()) fail(path + "/observable", "expected a string");
      sc.schedule_entries.emplace_back(
          name.get<std::string>(),
          number_at(field(e, "time", path), path + "/time"));
    }
  }

  if (j.contains("noise") && !j["noise"].is_null())
    sc.noise = parse_noise(j["noise"],
                           static_cast<int>(sc.schedule_entries.size()),
                           "/noise");

  if (j.contains("kernel") && !j["kernel"].is_null()) {
    const json& k = j["kernel"];
    MemoryKernel kernel;
    if (k.contains("sym")) {
      kernel.sym.clear();
      for (const auto& [lag, w] : k["sym"].items())
        kernel.sym[std::stoi(lag)] = number_at(w, "/kernel/sym/" + lag);
    }
    if (k.contains("comm"))
      for (const auto& [lag, w] : k["comm"].items())
        kernel.comm[std::stoi(lag)] = number_at(w, "/kernel/comm/" + lag);
    kernel.validate();
    sc.kernel = std::move(kernel);
  }

  if (j.contains("tasks") && !j["tasks"].is_null()) {
    const json& tasks = j["tasks"];
    if (!tasks.is_array()) fail("/tasks", "expected an array");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::string path = "/tasks/" + std::to_string(i);
      const json& t = tasks[i];
      const json& name = field(t, "task", path);
      if (!name.is_string()) fail(path + "/task", "expected a string");
      sc.tasks.push_back({name.get<std::string>(), t});
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario parse error: " + std::string(e.what()));
  }
  return parse_scenario(j);
}

Scenario table1_scenario() {
  json j = {
      {"dimension", 2},
      {"observables",
       {{"A", {{0, 1}, {1, 0}}}, {"B", {{1, 0}, {0, -1}}}}},
      {"initial_state", {{"pure", {1, 0}}}},
      {"schedule",
       {{{"observable", "A"}, {"time", 0.0}},
        {{"observable", "B"}, {"time", 1.0}}}},
  };
  return parse_scenario(j);
}

namespace {

std::string fmt(double v) { return Report::format_double(v, 12); }

struct TaskContext {
  const Scenario& sc;
  const TaskSpec* spec;  // may be null (no matching entry in tasks)
  const RunOptions& run;

  json option(const char* key) const {
    if (spec && spec->options.contains(key)) return spec->options[key];
    return json();
  }
  double num_option(const char* key, double fallback) const {
    json o = option(key);
    if (o.is_null()) return fallback;
    return number_at(o, std::string("/tasks/") + key);
  }
  int int_option(const char* key, int fallback) const {
    json o = option(key);
    if (o.is_null()) return fallback;
    return int_at(o, std::string("/tasks/") + key);
  }
};

Report quasi_report(const QuasiDistribution& q) {
  Report r = Report::object();
  r.set("steps", q.step_count());
  Report support = Report::array();
  for (const auto& vals : q.support()) support.push_back(
      Report::array_of(vals));
  r.set("support", std::move(support));
  Report atoms = Report::array();
  for (const auto& [key, w] : q.atoms()) {
    Report a = Report::object();
    a.set("outcomes", Report::array_of(q.outcomes(key)));
    a.set("weight", w);
    atoms.push_back(std::move(a));
  }
  r.set("atoms", std::move(atoms));
  r.set("total_weight", q.total_weight());
  return r;
}

std::string quasi_csv(const QuasiDistribution& q) {
  std::ostringstream os;
  for (int t = 0; t < q.step_count(); ++t) os << "outcome_" << t << ",";
  os << "weight\n";
  for (const auto& [key, w] : q.atoms()) {
    for (double o : q.outcomes(key)) os << fmt(o) << ",";
    os << fmt(w) << "\n";
  }
  return os.str();
}

std::string keyvalue_csv(
    const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : rows) os << k << "," << csv_escape(v) << "\n";
  return os.str();
}

std::string run_quasi(const TaskContext& ctx) {
  QuasiDistribution q = quasi_distribution(ctx.sc.state_or_throw(),
                                           ctx.sc.schedule(), ctx.run.limits);
  if (ctx.run.format == OutputFormat::Csv) return quasi_csv(q);
  Report r = quasi_report(q);
  return r.dump();
}

std::string run_table1_demo(const TaskContext& ctx) {
  Scenario fixture = table1_scenario();
  QuasiDistribution q = quasi_distribution(fixture.state_or_throw(),
                                           fixture.schedule(),
                                           ctx.run.limits);
  if (ctx.run.format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "a,b,weight\n";
    for (const auto& [key, w] : q.atoms()) {
      const auto o = q.outcomes(key);
      os << fmt(o[0]) << "," << fmt(o[1]) << "," << fmt(w) << "\n";
    }
    return os.str();
  }
  return quasi_report(q).dump();
}

std::string run_convolve_eval(const TaskContext& ctx) {
  ConvolvedDensity p{quasi_distribution(ctx.sc.state_or_throw(),
                                        ctx.sc.schedule(), ctx.run.limits),
                     ctx.sc.noise_or_throw()};
  json pts = ctx.option("points");
  if (!pts.is_array() || pts.empty())
    throw ValidationError(
        "/tasks/convolve-eval/points: expected a non-empty array of points");
  std::vector<std::vector<double>> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string path = "/tasks/convolve-eval/points/" +
                             std::to_string(i);
    if (!pts[i].is_array()) fail(path, "expected an array");
    std::vector<double> x;
    for (std::size_t c = 0; c < pts[i].size(); ++c)
      x.push_back(number_at(pts[i][c], path + "/" + std::to_string(c)));
    points.push_back(std::move(x));
  }
  if (ctx.run.format == OutputFormat::Csv) {
    std::ostringstream os;
    const int n = p.q.step_count();
    for (int c = 0; c < n; ++c) os << "x_" << c << ",";
    os << "value,log_scale,off_support\n";
    for (const auto& x : points) {
      DensityValue v = density_eval(p, x);
      for (double c : x) os << fmt(c) << ",";
      os << fmt(v.value) << "," << fmt(v.log_scale) << ","
         << (v.off_support ? 1 : 0) << "\n";
    }
    return os.str();
  }
  Report rows = Report::array();
  for (const auto& x : points) {
    DensityValue v = density_eval(p, x);
    Report row = Report::object();
    row.set("point", Report::array_of(x));
    row.set("value", v.value);
    row.set("log_scale", v.log_scale);
    row.set("off_support", v.off_support);
    rows.push_back(std::move(row));
  }
  Report r = Report::object();
  r.set("evaluations", std::move(rows));
  return r.dump();
}

std::string run_positivity(const TaskContext& ctx) {
  ConvolvedDensity p{quasi_distribution(ctx.sc.state_or_throw(),
                                        ctx.sc.schedule(), ctx.run.limits),
                     ctx.sc.noise_or_throw()};
  const double margin = ctx.num_option("box_margin", 0.0);
  const double step = ctx.num_option("grid_step", 0.0);
  PositivityReport rep = positivity_decide(p, margin, step, ctx.run.threads);
  if (ctx.run.format == OutputFormat::Csv) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("verdict", rep.verdict_name());
    std::ostringstream w;
    for (std::size_t i = 0; i < rep.witness.size(); ++i)
      w << (i ? " " : "") << fmt(rep.witness[i]);
    rows.emplace_back("witness", w.str());
    rows.emplace_back("witness_value", fmt(rep.witness_value));
    rows.emplace_back("eval_tolerance", fmt(rep.eval_tolerance));
    rows.emplace_back("min_value", fmt(rep.min_value));
    rows.emplace_back("regions_checked", rep.regions_checked);
    return keyvalue_csv(rows);
  }
  Report r = Report::object();
  r.set("verdict", rep.verdict_name());
  if (!rep.witness.empty()) {
    r.set("witness", Report::array_of(rep.witness));
    r.set("witness_value", rep.witness_value);
    r.set("witness_log_scale", rep.witness_log_scale);
  }
  r.set("eval_tolerance", rep.eval_tolerance);
  r.set("min_point", Report::array_of(rep.min_point));
  r.set("min_value", rep.min_value);
  r.set("regions_checked", rep.regions_checked);
  Report warn = Report::array();
  for (const auto& wmsg : rep.warnings) warn.push_back(wmsg);
  r.set("warnings", std::move(warn));
  return r.dump();
}

std::string run_long_sequence(const TaskContext& ctx) {
  json variant = ctx.option("variant");
  const std::string v = variant.is_string() ? variant.get<std::string>()
                                            : "independent";
  if (v == "delta-correlated") {
    CVector psi(2);
    psi << Complex(1, 0), Complex(0, 0);
    DensityState rho = ctx.sc.initial_state ? *ctx.sc.initial_state
                                            : DensityState::pure(psi);
    DeltaCorrelatedResult res = delta_correlated_failure(
        rho, NoiseKind::LaplaceProduct, ctx.num_option("a_param", 0.5),
        ctx.num_option("b_param", 0.5));
    if (ctx.run.format == OutputFormat::Csv) {
      std::vector<std::pair<std::string, std::string>> rows;
      rows.emplace_back("negative", res.negative ? "1" : "0");
      std::ostringstream w;
      for (std::size_t i = 0; i < res.witness.size(); ++i)
        w << (i ? " " : "") << fmt(res.witness[i]);
      rows.emplace_back("witness", w.str());
      rows.emplace_back("value", fmt(res.value));
      return keyvalue_csv(rows);
    }
    Report r = Report::object();
    r.set("variant", "delta-correlated");
    r.set("negative", res.negative);
    r.set("witness", Report::array_of(res.witness));
    r.set("value", res.value);
    r.set("log_scale", res.log_scale);
    return r.dump();
  }

  const int n_max = ctx.int_option("n_max", 64);
  json kindj = ctx.option("kind");
  const std::string kind =
      kindj.is_string() ? kindj.get<std::string>() : "laplace";
  const double param = ctx.num_option("param", 0.5);
  NoiseModel per_step =
      kind == "gaussian" ? NoiseModel::gaussian_product({param})
                         : NoiseModel::laplace_product({param});
  LongSequenceResult res = long_sequence_failure(n_max, per_step,
                                                 ctx.run.limits);
  if (ctx.run.format == OutputFormat::Csv) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("n_fail",
                      res.n_fail ? std::to_string(*res.n_fail) : "none");
    std::ostringstream w;
    for (std::size_t i = 0; i < res.witness.size(); ++i)
      w << (i ? " " : "") << fmt(res.witness[i]);
    rows.emplace_back("witness", w.str());
    rows.emplace_back("value", fmt(res.value));
    return keyvalue_csv(rows);
  }
  Report r = Report::object();
  r.set("variant", "independent");
  if (res.n_fail)
    r.set("n_fail", *res.n_fail);
  else
    r.set("n_fail", Report());
  r.set("witness", Report::array_of(res.witness));
  r.set("value", res.value);
  r.set("log_scale", res.log_scale);
  return r.dump();
}

std::string run_moments(const TaskContext& ctx) {
  const int degree = ctx.int_option("max_degree", 6);
  QuasiDistribution q = quasi_distribution(ctx.sc.state_or_throw(),
                                           ctx.sc.schedule(), ctx.run.limits);
  MomentTable m = moments_of_quasi(q, degree);
  CumulantTable c = moments_to_cumulants(m);
  if (ctx.run.format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "exponents,moment,cumulant\n";
    for (const MultiIndex& a : multi_indices(m.variables, m.max_degree))
      os << csv_escape(exponent_key(a)) << "," << fmt(m.at(a)) << ","
         << fmt(c.at(a)) << "\n";
    return os.str();
  }
  Report r = Report::object();
  r.set("variables", m.variables);
  r.set("max_degree", m.max_degree);
  Report mj = Report::object(), cj = Report::object();
  for (const MultiIndex& a : multi_indices(m.variables, m.max_degree)) {
    mj.set(exponent_key(a), m.at(a));
    cj.set(exponent_key(a), c.at(a));
  }
  r.set("moments", std::move(mj));
  r.set("cumulants", std::move(cj));
  return r.dump();
}

std::string run_calibrate(const TaskContext& ctx) {
  const int degree = ctx.int_option("degree", 3);
  const double width = ctx.num_option("bracket_width", 1e-8);
  QuasiDistribution q = quasi_distribution(ctx.sc.state_or_throw(),
                                           ctx.sc.schedule(), ctx.run.limits);
  MomentTable m = moments_of_quasi(q, 2 * degree);
  std::vector<double> direction;
  json dirj = ctx.option("direction");
  if (dirj.is_array())
    for (std::size_t i = 0; i < dirj.size(); ++i)
      direction.push_back(
          number_at(dirj[i], "/tasks/calibrate/direction/" +
                                 std::to_string(i)));
  CalibrationResult res = calibrate_gaussian_noise(m, degree, width,
                                                   direction);
  if (ctx.run.format == OutputFormat::Csv) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("variance", fmt(res.variance));
    rows.emplace_back("bracket_lo", fmt(res.lo));
    rows.emplace_back("bracket_hi", fmt(res.hi));
    rows.emplace_back("min_eigenvalue_at_variance",
                      fmt(res.min_eigenvalue_at_variance));
    rows.emplace_back("scan_used", res.scan_used ? "1" : "0");
    return keyvalue_csv(rows);
  }
  Report r = Report::object();
  r.set("variance", res.variance);
  r.set("bracket_lo", res.lo);
  r.set("bracket_hi", res.hi);
  r.set("min_eigenvalue_at_variance", res.min_eigenvalue_at_variance);
  r.set("scan_used", res.scan_used);
  return r.dump();
}

std::string run_cs_check(const TaskContext& ctx) {
  QuasiDistribution q = quasi_distribution(ctx.sc.state_or_throw(),
                                           ctx.sc.schedule(), ctx.run.limits);
  const int vars = q.step_count();
  json uj = ctx.option("u"), vj = ctx.option("v");
  if (uj.is_null() || vj.is_null())
    throw ValidationError("/tasks/cs-check: 'u' and 'v' polynomials are "
                          "required");
  Polynomial u = parse_polynomial(uj, vars, "/tasks/cs-check/u");
  Polynomial v = parse_polynomial(vj, vars, "/tasks/cs-check/v");
  const int need = 2 * std::max(poly_degree(u), poly_degree(v));
  MomentTable m = moments_of_quasi(q, need);
  const double added = ctx.num_option("added_variance", 0.0);
  if (added > 0.0) {
    CumulantTable cq = moments_to_cumulants(m);
    CumulantTable cn = gaussian_cumulants(
        vars, std::vector<double>(vars, added), need);
    m = cumulants_to_moments(combine_independent(cq, cn));
  }
  CauchySchwarzReport rep = cauchy_schwarz_check(m, u, v);
  if (ctx.run.format == OutputFormat::Csv) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("lhs", fmt(rep.lhs));
    rows.emplace_back("rhs", fmt(rep.rhs));
    rows.emplace_back("violated", rep.violated ? "1" : "0");
    rows.emplace_back("added_variance", fmt(added));
    return keyvalue_csv(rows);
  }
  Report r = Report::object();
  r.set("lhs", rep.lhs);
  r.set("rhs", rep.rhs);
  r.set("violated", rep.violated);
  r.set("added_variance", added);
  return r.dump();
}

std::string run_weak_limit(const TaskContext& ctx) {
  Schedule sched = ctx.sc.schedule();
  std::vector<double> etas = kDefaultEtaList;
  json ej = ctx.option("etas");
  if (ej.is_array()) {
    etas.clear();
    for (std::size_t i = 0; i < ej.size(); ++i)
      etas.push_back(number_at(ej[i], "/tasks/weak-limit/etas/" +
                                          std::to_string(i)));
  }
  std::vector<int> selection;
  json sj = ctx.option("selection");
  if (sj.is_array()) {
    for (std::size_t i = 0; i < sj.size(); ++i)
      selection.push_back(int_at(sj[i], "/tasks/weak-limit/selection/" +
                                            std::to_string(i)));
  } else {
    for (int t = 0; t < sched.step_count(); ++t) selection.push_back(t);
  }
  ExtrapolationReport rep = weak_limit(ctx.sc.state_or_throw(), sched,
                                       selection, etas);
  if (ctx.run.format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "eta,value\n";
    for (std::size_t i = 0; i < rep.etas.size(); ++i)
      os << fmt(rep.etas[i]) << "," << fmt(rep.values[i]) << "\n";
    os << "extrapolated," << fmt(rep.extrapolated) << "\n";
    os << "reference," << fmt(rep.reference) << "\n";
    os << "discrepancy," << fmt(rep.discrepancy) << "\n";
    os << "fitted_order," << fmt(rep.fitted_order) << "\n";
    os << "converged," << (rep.converged ? 1 : 0) << "\n";
    return os.str();
  }
  Report r = Report::object();
  r.set("etas", Report::array_of(rep.etas));
  r.set("values", Report::array_of(rep.values));
  r.set("extrapolated", rep.extrapolated);
  r.set("reference", rep.reference);
  r.set("discrepancy", rep.discrepancy);
  r.set("fitted_order", rep.fitted_order);
  r.set("converged", rep.converged);
  Report notes = Report::array();
  for (const auto& n : rep.notes) notes.push_back(n);
  r.set("notes", std::move(notes));
  return r.dump();
}

std::string run_noise_floor(const TaskContext& ctx) {
  NoiseFloorEstimate e = noise_floor_estimate(
      ctx.num_option("particles", 1e20), ctx.num_option("box_side_m", 1e-3),
      ctx.num_option("duration_s", 0.1),
      ctx.num_option("micro_length_m", 1e-10),
      ctx.num_option("micro_time_m", 1e-7));
  if (ctx.run.format == OutputFormat::Csv) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("particle_count", fmt(e.particle_count));
    rows.emplace_back("box_side_m", fmt(e.box_side));
    rows.emplace_back("duration_m", fmt(e.duration));
    rows.emplace_back("micro_length_m", fmt(e.micro_length));
    rows.emplace_back("micro_time_m", fmt(e.micro_time));
    rows.emplace_back("n_macro", fmt(e.n_macro));
    rows.emplace_back("n_micro", fmt(e.n_micro));
    return keyvalue_csv(rows);
  }
  Report r = Report::object();
  r.set("particle_count", e.particle_count);
  r.set("box_side_m", e.box_side);
  r.set("duration_m", e.duration);
  r.set("micro_length_m", e.micro_length);
  r.set("micro_time_m", e.micro_time);
  r.set("n_macro", e.n_macro);
  r.set("n_micro", e.n_micro);
  return r.dump();
}

}  // namespace

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks = {
      "quasi",      "convolve-eval", "positivity",  "long-sequence",
      "moments",    "calibrate",     "cs-check",    "weak-limit",
      "noise-floor", "table1-demo"};
  return tasks;
}

std::string run_task(const Scenario& scenario, const std::string& task,
                     const RunOptions& options) {
  const auto& tasks = known_tasks();
  if (std::find(tasks.begin(), tasks.end(), task) == tasks.end())
    throw ValidationError("unknown task '" + task + "'");
  TaskContext ctx{scenario, scenario.find_task(task), options};
  if (task == "quasi") return run_quasi(ctx);
  if (task == "convolve-eval") return run_convolve_eval(ctx);
  if (task == "positivity") return run_positivity(ctx);
  if (task == "long-sequence") return run_long_sequence(ctx);
  if (task == "moments") return run_moments(ctx);
  if (task == "calibrate") return run_calibrate(ctx);
  if (task == "cs-check") return run_cs_check(ctx);
  if (task == "weak-limit") return run_weak_limit(ctx);
  if (task == "noise-floor") return run_noise_floor(ctx);
  return run_table1_demo(ctx);
}

}  // namespace qp
