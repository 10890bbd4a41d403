// Copyright 2026 The weakcollapse Authors
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

#include "weakcollapse/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "weakcollapse/asc.hpp"
#include "weakcollapse/behavior.hpp"
#include "weakcollapse/energy.hpp"
#include "weakcollapse/errors.hpp"
#include "weakcollapse/ks.hpp"
#include "weakcollapse/policy.hpp"
#include "weakcollapse/sat.hpp"
#include "weakcollapse/signaling.hpp"
#include "weakcollapse/text.hpp"

namespace weakcollapse::experiment {
namespace {

// ---------------------------------------------------------------------------
// Schema

const std::map<std::string, std::vector<KeySpec>>& schemas() {
  static const std::map<std::string, std::vector<KeySpec>> s = {
      {"ks",
       {{"table", "", "ray-table file; empty selects the builtin table"},
        {"export_table", "", "write the table in ray-table format to this path"}}},
      {"fwt",
       {{"policy", "born", "Alice's collapse policy"},
        {"context", "random", "Alice's context 1..9, or 'random'"},
        {"bob_ray", "in-context", "'in-context', 'any', or a ray such as (1,-1,0,0)"},
        {"table", "", "ray-table file; empty selects the builtin table"}}},
      {"signal",
       {{"state", "bell", "shared state: bell, product or twin"},
        {"basis0", "z", "Alice's basis for setting 0: z or x"},
        {"basis1", "z", "Alice's basis for setting 1: z or x"},
        {"policy0", "born", "Alice's policy for setting 0"},
        {"policy1", "born", "Alice's policy for setting 1"},
        {"bob_basis", "z", "Bob's basis: z or x"},
        {"mode", "analytic", "analytic or empirical"}}},
      {"energy",
       {{"energies", "1,-1", "diagonal Hamiltonian"},
        {"hamiltonian", "", "dense Hamiltonian, rows separated by ';', entries re or re:im"},
        {"state", "1,1", "pure state amplitudes, entries re or re:im"},
        {"measurement", "computational", "computational, fourier or hamiltonian"},
        {"eigenvalues", "index", "measurement eigenvalues, or 'index' for 0,1,..."},
        {"weights", "born", "'born' or an outcome weight list"}}},
      {"sat",
       {{"truth_table", "", "truth-table file"},
        {"cnf", "", "DIMACS CNF file"},
        {"n", "8", "input bits for random instances (<= 12)"},
        {"density", "auto", "probability that f(j) = 1 for random instances; auto = 2^-n"}}},
      {"asc",
       {{"labels", "tap,dont_tap", "alternative labels"},
        {"priorities", "0.36,0.64", "attention priorities"},
        {"norm", "0,1", "norm value per label"},
        {"lambda", "1", "argmax weight in [0,1]; 0 is plain Born sampling"}}},
      {"behavior",
       {{"mode", "evaluate", "evaluate, generate or classify"},
        {"kind", "pareto", "generator: exponential or pareto"},
        {"rate", "1", "exponential rate"},
        {"alpha", "1.5", "pareto tail index"},
        {"xmin", "1", "pareto scale"},
        {"length", "10000", "sequence length"},
        {"input", "", "interval file to classify"},
        {"levy_threshold", "2.5", "levy-like below this tail exponent"},
        {"noise_threshold", "3.5", "noise-like above this tail exponent"}}},
  };
  return s;
}

const std::map<std::string, std::string>& default_trials() {
  static const std::map<std::string, std::string> t = {
      {"ks", "1"},      {"fwt", "10000"}, {"signal", "100000"}, {"energy", "1"},
      {"sat", "1000"},  {"asc", "10000"}, {"behavior", "200"},
  };
  return t;
}

using Check = std::function<void(const std::string&)>;

void check_uint(const std::string& v) { parse_uint(v, "value"); }
void check_double(const std::string& v) { parse_double(v, "value"); }

void check_one_of(const std::string& v, std::initializer_list<std::string_view> options) {
  for (auto o : options) {
    if (v == o) return;
  }
  std::string list;
  for (auto o : options) list += (list.empty() ? "" : ", ") + std::string(o);
  throw ConfigError("must be one of: " + list);
}

void check_file(const std::string& v) {
  if (!v.empty() && !std::filesystem::is_regular_file(v)) throw ConfigError("no such file '" + v + "'");
}

Complex parse_complex(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse_double(parts[0], "entry"), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0], "entry"), parse_double(parts[1], "entry")};
  throw ParseError("bad complex entry '" + std::string(s) + "'");
}

std::vector<Complex> parse_complex_list(std::string_view s) {
  std::vector<Complex> out;
  for (auto part : split(s, ',')) out.push_back(parse_complex(part));
  return out;
}

Matrix parse_matrix(std::string_view s) {
  std::vector<std::vector<Complex>> rows;
  for (auto row : split(s, ';')) rows.push_back(parse_complex_list(row));
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw ParseError("Hamiltonian must be square");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

std::vector<std::string> parse_labels(std::string_view s) {
  std::vector<std::string> out;
  for (auto part : split(s, ',')) {
    const auto t = trim(part);
    if (t.empty()) throw ParseError("empty label");
    out.emplace_back(t);
  }
  return out;
}

// Per-key value checks; a key without an entry accepts any string.
const std::map<std::string, Check>& value_checks() {
  static const std::map<std::string, Check> c = {
      {"seed", check_uint},
      {"trials", check_uint},
      {"format", [](const std::string& v) { check_one_of(v, {"json-lines", "csv"}); }},
      {"records", [](const std::string& v) { check_one_of(v, {"true", "false"}); }},
      {"table", check_file},
      {"policy", [](const std::string& v) { parse_policy(v); }},
      {"policy0", [](const std::string& v) { parse_policy(v); }},
      {"policy1", [](const std::string& v) { parse_policy(v); }},
      {"context",
       [](const std::string& v) {
         if (v == "random") return;
         const auto c = parse_uint(v, "context");
         if (c < 1) throw ConfigError("context is 1-based");
       }},
      {"bob_ray",
       [](const std::string& v) {
         if (v == "in-context" || v == "any") return;
         ks::parse_ray(v);
       }},
      {"state", [](const std::string&) {}},
      {"basis0", [](const std::string& v) { check_one_of(v, {"z", "x"}); }},
      {"basis1", [](const std::string& v) { check_one_of(v, {"z", "x"}); }},
      {"bob_basis", [](const std::string& v) { check_one_of(v, {"z", "x"}); }},
      {"energies", [](const std::string& v) { parse_double_list(v, "energies"); }},
      {"hamiltonian",
       [](const std::string& v) {
         if (!v.empty()) Hamiltonian(parse_matrix(v));
       }},
      {"measurement", [](const std::string& v) { check_one_of(v, {"computational", "fourier", "hamiltonian"}); }},
      {"eigenvalues",
       [](const std::string& v) {
         if (v != "index") parse_double_list(v, "eigenvalues");
       }},
      {"weights",
       [](const std::string& v) {
         if (v != "born") ProbabilityDistribution(parse_double_list(v, "weights"));
       }},
      {"truth_table", check_file},
      {"cnf", check_file},
      {"input", check_file},
      {"n",
       [](const std::string& v) {
         const auto n = parse_uint(v, "n");
         if (n < 1 || n > sat::kMaxVariables) throw ConfigError("n must satisfy 1 <= n <= 12 (simulation cap)");
       }},
      {"density",
       [](const std::string& v) {
         if (v == "auto") return;
         const double d = parse_double(v, "density");
         if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("density must be in [0, 1]");
       }},
      {"labels", [](const std::string& v) { parse_labels(v); }},
      {"priorities", [](const std::string& v) { parse_double_list(v, "priorities"); }},
      {"norm", [](const std::string& v) { parse_double_list(v, "norm"); }},
      {"lambda",
       [](const std::string& v) {
         const double l = parse_double(v, "lambda");
         if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("lambda must be in [0, 1]");
       }},
      {"kind", [](const std::string& v) { check_one_of(v, {"exponential", "pareto"}); }},
      {"rate", check_double},
      {"alpha", check_double},
      {"xmin", check_double},
      {"length", check_uint},
      {"levy_threshold", check_double},
      {"noise_threshold", check_double},
  };
  return c;
}

// Experiment-level checks that involve several keys; runs on a resolved map.
void cross_checks(const std::string& experiment, const Config& c, std::vector<Violation>& out) {
  auto get = [&](const std::string& k) { return c.at(k); };
  if (experiment == "sat" && !get("truth_table").empty() && !get("cnf").empty()) {
    out.push_back({"cnf", "set either truth_table or cnf, not both"});
  }
  if (experiment == "signal" && c.at("state") != "bell" && c.at("state") != "product" &&
      c.at("state") != "twin") {
    out.push_back({"state", "must be one of: bell, product, twin"});
  }
  if (experiment == "signal" && get("mode") != "analytic" && get("mode") != "empirical") {
    out.push_back({"mode", "must be one of: analytic, empirical"});
  }
  if (experiment == "signal" && get("mode") == "empirical" && get("trials") == "0") {
    out.push_back({"trials", "empirical mode needs at least one trial"});
  }
  if (experiment == "fwt" && get("context") != "random") {
    const auto ctx = parse_uint(get("context"), "context");
    if (get("table").empty() && ctx > 9) out.push_back({"context", "builtin table has contexts 1..9"});
  }
  if (experiment == "asc") {
    const auto labels = parse_labels(get("labels"));
    if (parse_double_list(get("priorities"), "priorities").size() != labels.size()) {
      out.push_back({"priorities", "needs one priority per label"});
    }
    if (parse_double_list(get("norm"), "norm").size() != labels.size()) {
      out.push_back({"norm", "needs one norm value per label"});
    }
    if (get("trials") == "0") out.push_back({"trials", "needs at least one trial"});
  }
  if (experiment == "behavior") {
    const auto mode = get("mode");
    if (mode != "evaluate" && mode != "generate" && mode != "classify") {
      out.push_back({"mode", "must be one of: evaluate, generate, classify"});
    }
    if (mode == "classify" && get("input").empty()) out.push_back({"input", "classify mode needs an input file"});
    if (parse_double(get("levy_threshold"), "levy_threshold") >
        parse_double(get("noise_threshold"), "noise_threshold")) {
      out.push_back({"levy_threshold", "must not exceed noise_threshold"});
    }
    if (parse_uint(get("length"), "length") < behavior::kMinAnalysisLength) {
      out.push_back({"length", "must be at least 100"});
    }
    if (mode == "evaluate" && get("trials") == "0") out.push_back({"trials", "needs at least one seed"});
  }
  if (experiment == "energy") {
    const std::size_t dim = get("hamiltonian").empty()
                                ? parse_double_list(get("energies"), "energies").size()
                                : static_cast<std::size_t>(parse_matrix(get("hamiltonian")).rows());
    if (parse_complex_list(get("state")).size() != dim) {
      out.push_back({"state", "needs " + std::to_string(dim) + " amplitudes"});
    }
    if (get("eigenvalues") != "index" && parse_double_list(get("eigenvalues"), "eigenvalues").size() != dim) {
      out.push_back({"eigenvalues", "needs " + std::to_string(dim) + " eigenvalues"});
    }
    if (get("weights") != "born" && parse_double_list(get("weights"), "weights").size() != dim) {
      out.push_back({"weights", "needs " + std::to_string(dim) + " weights"});
    }
  }
}

// ---------------------------------------------------------------------------
// Parameter access on a resolved config

class Params {
 public:
  explicit Params(const Config& c) : c_(c) {}
  const std::string& str(const std::string& k) const { return c_.at(k); }
  std::uint64_t u64(const std::string& k) const { return parse_uint(c_.at(k), k); }
  double num(const std::string& k) const { return parse_double(c_.at(k), k); }
  std::vector<double> list(const std::string& k) const { return parse_double_list(c_.at(k), k); }
  bool flag(const std::string& k) const { return c_.at(k) == "true"; }

 private:
  const Config& c_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json distribution_json(const ProbabilityDistribution& p) {
  Json a = Json::array();
  for (double x : p.probs()) a.push_back(x);
  return a;
}

ProjectiveMeasurement named_basis(const std::string& name, std::size_t dim) {
  if (name == "z") return ProjectiveMeasurement::computational(dim);
  std::vector<Vector> basis;
  for (std::size_t k = 0; k < dim; ++k) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(dim);
      v[static_cast<Eigen::Index>(j)] = std::polar(1.0, phase);
    }
    basis.push_back(v);
  }
  return ProjectiveMeasurement::from_basis(basis);
}

// ---------------------------------------------------------------------------
// Harnesses

ks::KSTable load_table(const Params& p) {
  return p.str("table").empty() ? ks::builtin_ks_table() : ks::parse_table(read_file(p.str("table")));
}

void run_ks(const Params& p, Report& r) {
  const ks::KSTable table = load_table(p);
  if (!p.str("export_table").empty()) {
    std::ofstream out(p.str("export_table"), std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.str("export_table") + "'");
    out << ks::format_table(table);
  }
  Json violations = Json::array();
  for (const auto& v : ks::validate_table(table)) violations.push_back(v.message);
  const auto coloring = ks::ks_coloring_search(table);
  r.aggregate["contexts"] = table.contexts().size();
  r.aggregate["distinct_rays"] = table.distinct_rays();
  r.aggregate["violations"] = violations;
  r.aggregate["colorable"] = coloring.colorable;
  r.aggregate["assignments_found"] = coloring.assignments_found;
  r.aggregate["search_space_size"] = coloring.search_space_size;
  r.aggregate["parity_certificate"] = ks::parity_certificate(table);
}

void run_fwt(const Params& p, Report& r) {
  const ks::FwtProtocol protocol(load_table(p));
  ks::FwtSettings settings;
  if (p.str("context") != "random") {
    settings.context = p.u64("context") - 1;
    if (*settings.context >= protocol.table().contexts().size()) throw BadParameter("context out of range");
  }
  if (p.str("bob_ray") == "any") {
    settings.selection = ks::RaySelection::Any;
  } else if (p.str("bob_ray") != "in-context") {
    const auto id = protocol.ray_id(ks::parse_ray(p.str("bob_ray")));
    if (!id) throw BadParameter("ray " + p.str("bob_ray") + " is not in the table");
    settings.bob_ray = *id;
  }
  const auto summary =
      ks::fwt_experiment(protocol, settings, parse_policy(p.str("policy")), p.u64("trials"), p.u64("seed"));
  if (p.flag("records")) {
    for (std::size_t i = 0; i < summary.trials.size(); ++i) {
      const auto& t = summary.trials[i];
      Json rec;
      rec["record"] = "trial";
      rec["trial"] = i;
      rec["context"] = t.alice_context + 1;
      rec["bob_ray"] = protocol.rays()[t.bob_ray].to_string();
      rec["alice_outcome"] = protocol.table().contexts()[t.alice_context].rays[t.alice_outcome].to_string();
      rec["alice_value"] = t.alice_value == ks::AliceValue::NotInContext
                               ? Json("not-in-context")
                               : Json(t.alice_value == ks::AliceValue::One ? 1 : 0);
      rec["bob_value"] = t.bob_value;
      r.records.push_back(std::move(rec));
    }
  }
  r.aggregate["trials"] = summary.trials.size();
  r.aggregate["in_context"] = summary.in_context;
  r.aggregate["agreements"] = summary.agreements;
  r.aggregate["agreement_rate"] =
      summary.in_context ? static_cast<double>(summary.agreements) / static_cast<double>(summary.in_context)
                         : 0.0;
  r.aggregate["out_of_context"] = summary.out_of_context;
  r.aggregate["out_of_context_detections"] = summary.out_of_context_detections;
  r.aggregate["out_of_context_expected"] = summary.out_of_context_expected;
  r.aggregate["out_of_context_z"] =
      summary.out_of_context_variance > 0.0
          ? (static_cast<double>(summary.out_of_context_detections) - summary.out_of_context_expected) /
                std::sqrt(summary.out_of_context_variance)
          : 0.0;
  r.aggregate["forbidden_attempts"] = summary.forbidden_attempts;
}

void run_signal(const Params& p, Report& r) {
  StateVector shared = StateVector::basis(1, 0);
  Subsystems dims{2, 2};
  if (p.str("state") == "bell") {
    shared = make_state({1.0, 0.0, 0.0, 1.0});
  } else if (p.str("state") == "product") {
    shared = tensor(make_state({1.0, 1.0}), make_state({1.0, 0.0}));
  } else {
    shared = ks::twin_state();
    dims = {4, 4};
  }
  std::vector<AliceSetting> settings;
  for (int s = 0; s < 2; ++s) {
    const std::string idx = std::to_string(s);
    settings.push_back({idx, named_basis(p.str("basis" + idx), dims.a), parse_policy(p.str("policy" + idx))});
  }
  const bool empirical = p.str("mode") == "empirical";
  const auto report = signaling_experiment(shared, dims, named_basis(p.str("bob_basis"), dims.b), settings,
                                           empirical ? p.u64("trials") : 0, p.u64("seed"));
  Json marginals = Json::object();
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    marginals[report.labels[i]] = distribution_json(report.bob_marginals[i]);
  }
  r.aggregate["settings"] = {{"0", {{"basis", p.str("basis0")}, {"policy", p.str("policy0")}}},
                             {"1", {{"basis", p.str("basis1")}, {"policy", p.str("policy1")}}}};
  r.aggregate["bob_marginals"] = marginals;
  r.aggregate["max_tv"] = report.max_tv;
  r.aggregate["channel_bits"] = report.channel_bits;
  r.aggregate["mode"] = empirical ? "empirical" : "analytic";
  r.aggregate["trials_per_setting"] = report.trials_per_setting;
  r.aggregate["seed"] = p.u64("seed");
}

void run_energy(const Params& p, Report& r) {
  const Hamiltonian h = p.str("hamiltonian").empty() ? Hamiltonian::diagonal(p.list("energies"))
                                                     : Hamiltonian(parse_matrix(p.str("hamiltonian")));
  const auto amps = parse_complex_list(p.str("state"));
  const DensityOperator rho = DensityOperator::pure(make_state(amps));
  const std::size_t dim = h.dim();
  std::optional<ProjectiveMeasurement> m;
  if (p.str("measurement") == "computational") {
    m = ProjectiveMeasurement::computational(dim);
  } else if (p.str("measurement") == "fourier") {
    m = named_basis("x", dim);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    std::vector<Vector> basis;
    for (Eigen::Index c = 0; c < solver.eigenvectors().cols(); ++c) basis.emplace_back(solver.eigenvectors().col(c));
    m = ProjectiveMeasurement::from_basis(basis);
  }
  std::vector<double> eigenvalues;
  if (p.str("eigenvalues") == "index") {
    for (std::size_t j = 0; j < dim; ++j) eigenvalues.push_back(static_cast<double>(j));
  } else {
    eigenvalues = p.list("eigenvalues");
  }
  std::optional<ProbabilityDistribution> weights;
  if (p.str("weights") != "born") weights = ProbabilityDistribution(p.list("weights"));
  const EnergyAudit audit = audit_measurement(rho, *m, eigenvalues, h, weights);
  r.aggregate["e_before"] = audit.e_before;
  r.aggregate["e_after"] = audit.e_after;
  r.aggregate["delta"] = audit.delta;
  r.aggregate["commutes"] = audit.commutes;
  r.aggregate["weights_were_born"] = audit.weights_were_born;
}

Json witness_json(const sat::SatResult& s) { return s.witness ? Json(*s.witness) : Json(nullptr); }

void run_sat(const Params& p, Report& r) {
  std::optional<sat::OracleFunction> single;
  if (!p.str("truth_table").empty()) single = sat::parse_truth_table(read_file(p.str("truth_table")));
  if (!p.str("cnf").empty()) single = sat::compile_cnf(sat::parse_dimacs(read_file(p.str("cnf"))));
  if (single) {
    Rng rng = trial_rng(p.u64("seed"), 0);
    const auto decided = sat::decide_sat(*single, rng);
    const auto brute = sat::classical_brute_force(*single);
    r.aggregate["n"] = single->n();
    r.aggregate["satisfiable"] = decided.satisfiable;
    r.aggregate["witness"] = witness_json(decided);
    r.aggregate["queries_quantum"] = decided.queries_quantum;
    r.aggregate["queries_classical_oracle"] = decided.queries_classical_oracle;
    r.aggregate["brute_force_satisfiable"] = brute.satisfiable;
    r.aggregate["brute_force_witness"] = witness_json(brute);
    r.aggregate["agree"] = decided.satisfiable == brute.satisfiable;
    return;
  }
  const auto n = static_cast<unsigned>(p.u64("n"));
  const double density = p.str("density") == "auto" ? std::ldexp(1.0, -static_cast<int>(n)) : p.num("density");
  struct Instance {
    std::uint64_t satisfying = 0;
    sat::SatResult decided, brute;
  };
  const auto instances = run_trials(p.u64("trials"), p.u64("seed"), [&](std::uint64_t, Rng& rng) {
    const auto f = sat::random_oracle(n, density, rng);
    Instance inst;
    inst.satisfying = f.count_satisfying();
    inst.decided = sat::decide_sat(f, rng);
    inst.brute = sat::classical_brute_force(f);
    return inst;
  });
  std::uint64_t agreements = 0, satisfiable = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (inst.decided.satisfiable == inst.brute.satisfiable) ++agreements;
    if (inst.brute.satisfiable) ++satisfiable;
    if (p.flag("records")) {
      Json rec;
      rec["record"] = "trial";
      rec["instance"] = i;
      rec["satisfying_inputs"] = inst.satisfying;
      rec["satisfiable"] = inst.decided.satisfiable;
      rec["witness"] = witness_json(inst.decided);
      rec["brute_force_satisfiable"] = inst.brute.satisfiable;
      r.records.push_back(std::move(rec));
    }
  }
  r.aggregate["n"] = n;
  r.aggregate["density"] = density;
  r.aggregate["instances"] = instances.size();
  r.aggregate["satisfiable_instances"] = satisfiable;
  r.aggregate["agreements"] = agreements;
  r.aggregate["all_agree"] = agreements == instances.size();
}

void run_asc(const Params& p, Report& r) {
  const auto labels = parse_labels(p.str("labels"));
  const auto norms = p.list("norm");
  std::map<std::string, double> values;
  for (std::size_t i = 0; i < labels.size(); ++i) values[labels[i]] = norms[i];
  const asc::AlternativeSet alts(labels, p.list("priorities"));
  const asc::NormFunction norm(std::move(values));
  const auto summary = asc::asc_experiment(alts, norm, p.num("lambda"), p.u64("trials"), p.u64("seed"));
  if (p.flag("records")) {
    for (std::size_t i = 0; i < summary.traces.size(); ++i) {
      const auto& sel = std::get<asc::SelectionStage>(summary.traces[i].stages[1].record);
      Json rec;
      rec["record"] = "trial";
      rec["trial"] = i;
      rec["ticks"] = {1, 2, 3};
      rec["selected"] = labels[sel.chosen];
      rec["tie_broken"] = sel.tie_broken;
      rec["outcome"] = labels[summary.traces[i].final_outcome()];
      r.records.push_back(std::move(rec));
    }
  }
  Json counts = Json::object(), empirical = Json::object(), born = Json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    counts[labels[i]] = summary.counts[i];
    empirical[labels[i]] = static_cast<double>(summary.counts[i]) / static_cast<double>(summary.traces.size());
    born[labels[i]] = summary.born[i];
  }
  r.aggregate["counts"] = counts;
  r.aggregate["empirical"] = empirical;
  r.aggregate["born"] = born;
  r.aggregate["tv"] = summary.deviation.tv;
  r.aggregate["chi2"] = summary.deviation.chi2;
  r.aggregate["chi2_p_value"] = summary.chi2_p_value;
  r.aggregate["nr_outcome"] = labels[summary.nr_outcome];
  r.aggregate["objectively_identical"] = summary.cgp_vs_nr.objectively_identical;
  r.aggregate["structurally_distinct"] = summary.cgp_vs_nr.structurally_distinct;
}

behavior::SequenceKind sequence_kind(const Params& p, const std::string& kind) {
  if (kind == "exponential") return behavior::ExponentialKind{p.num("rate")};
  return behavior::ParetoKind{p.num("alpha"), p.num("xmin")};
}

void run_behavior(const Params& p, Report& r) {
  const behavior::Thresholds thresholds{p.num("levy_threshold"), p.num("noise_threshold")};
  const auto length = static_cast<std::size_t>(p.u64("length"));
  const std::string mode = p.str("mode");
  if (mode == "generate") {
    Rng rng = trial_rng(p.u64("seed"), 0);
    r.payload = behavior::format_sequence(behavior::generate_sequence(sequence_kind(p, p.str("kind")), length, rng));
    return;
  }
  if (mode == "classify") {
    const auto report = behavior::classify(behavior::parse_sequence(read_file(p.str("input"))), thresholds);
    r.aggregate["tail_exponent"] = report.tail_exponent;
    r.aggregate["classification"] = behavior::to_string(report.classification);
    r.aggregate["sample_size"] = report.sample_size;
    r.aggregate["k"] = report.k;
    return;
  }
  // evaluate: classifier accuracy on both generators over `trials` seeds.
  const std::uint64_t seeds = p.u64("trials");
  for (const std::string kind : {"pareto", "exponential"}) {
    const auto expected = kind == "pareto" ? behavior::Pattern::LevyLike : behavior::Pattern::NoiseLike;
    const auto kind_seed = derive_seed(p.u64("seed"), kind == "pareto" ? 1 : 2);
    const auto reports = run_trials(seeds, kind_seed, [&](std::uint64_t, Rng& rng) {
      return behavior::classify(behavior::generate_sequence(sequence_kind(p, kind), length, rng), thresholds);
    });
    std::uint64_t correct = 0;
    double mean = 0.0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (reports[i].classification == expected) ++correct;
      mean += reports[i].tail_exponent;
      if (p.flag("records")) {
        Json rec;
        rec["record"] = "trial";
        rec["kind"] = kind;
        rec["seed_index"] = i;
        rec["tail_exponent"] = reports[i].tail_exponent;
        rec["classification"] = behavior::to_string(reports[i].classification);
        r.records.push_back(std::move(rec));
      }
    }
    r.aggregate[kind] = {{"runs", seeds},
                         {"correct", correct},
                         {"correct_rate", static_cast<double>(correct) / static_cast<double>(seeds)},
                         {"mean_tail_exponent", mean / static_cast<double>(seeds)}};
  }
}

const std::map<std::string, void (*)(const Params&, Report&)>& harnesses() {
  static const std::map<std::string, void (*)(const Params&, Report&)> h = {
      {"ks", run_ks},   {"fwt", run_fwt}, {"signal", run_signal},     {"energy", run_energy},
      {"sat", run_sat}, {"asc", run_asc}, {"behavior", run_behavior},
  };
  return h;
}

Json config_json(const Config& c) {
  Json j;
  j["record"] = "config";
  for (const auto& [k, v] : c) j[k] = v;
  return j;
}

void flatten_csv(const std::string& prefix, const Json& value, std::string& out) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) flatten_csv(prefix.empty() ? k : prefix + "." + k, v, out);
    return;
  }
  std::string text;
  if (value.is_array()) {
    for (const auto& v : value) text += (text.empty() ? "" : ";") + (v.is_string() ? v.get<std::string>() : v.dump());
  } else {
    text = value.is_string() ? value.get<std::string>() : value.dump();
  }
  if (text.find_first_of(",\"") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : text) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    text = quoted + "\"";
  }
  out += prefix + "," + text + "\n";
}

std::string render_body(const Report& report) {
  if (report.payload) return *report.payload;
  std::string out;
  if (report.config.at("format") == "csv") {
    out += "key,value\n";
    flatten_csv("", report.aggregate, out);
    return out;
  }
  out += config_json(report.config).dump() + "\n";
  for (const auto& rec : report.records) out += rec.dump() + "\n";
  Json agg;
  agg["record"] = "aggregate";
  agg["experiment"] = report.config.at("experiment");
  for (const auto& [k, v] : report.aggregate.items()) agg[k] = v;
  out += agg.dump() + "\n";
  return out;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"ks", "fwt", "signal", "energy", "sat", "asc", "behavior"};
  return names;
}

const std::vector<KeySpec>& common_keys() {
  static const std::vector<KeySpec> keys = {
      {"experiment", "", "experiment name"},
      {"seed", "0", "master seed"},
      {"trials", "", "trial count (experiment-specific default)"},
      {"format", "json-lines", "json-lines or csv"},
      {"records", "false", "emit per-trial records (json-lines only)"},
  };
  return keys;
}

const std::vector<KeySpec>& experiment_keys(const std::string& experiment) {
  const auto it = schemas().find(experiment);
  if (it == schemas().end()) throw ConfigError("unknown experiment '" + experiment + "'");
  return it->second;
}

std::vector<Violation> validate(const Config& config) {
  const auto exp = config.find("experiment");
  if (exp == config.end()) return {{"experiment", "missing"}};
  if (!schemas().contains(exp->second)) return {{"experiment", "unknown experiment '" + exp->second + "'"}};

  std::vector<Violation> out;
  std::set<std::string> allowed;
  for (const auto& k : common_keys()) allowed.insert(k.name);
  for (const auto& k : experiment_keys(exp->second)) allowed.insert(k.name);
  for (const auto& [key, value] : config) {
    if (!allowed.contains(key)) {
      out.push_back({key, "unknown key for experiment '" + exp->second + "'"});
      continue;
    }
    const auto check = value_checks().find(key);
    if (check == value_checks().end()) continue;
    try {
      check->second(value);
    } catch (const std::exception& e) {
      out.push_back({key, e.what()});
    }
  }
  if (!out.empty()) return out;

  Config resolved = config;
  for (const auto& k : common_keys()) resolved.try_emplace(k.name, k.default_value);
  for (const auto& k : experiment_keys(exp->second)) resolved.try_emplace(k.name, k.default_value);
  if (resolved["trials"].empty()) resolved["trials"] = default_trials().at(exp->second);
  try {
    cross_checks(exp->second, resolved, out);
  } catch (const std::exception& e) {
    out.push_back({"experiment", e.what()});
  }
  return out;
}

Config resolve(const Config& config) {
  const auto violations = validate(config);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v.key + ": " + v.message;
    throw ConfigError(msg);
  }
  Config resolved = config;
  const std::string& exp = config.at("experiment");
  for (const auto& k : common_keys()) resolved.try_emplace(k.name, k.default_value);
  for (const auto& k : experiment_keys(exp)) resolved.try_emplace(k.name, k.default_value);
  if (resolved["trials"].empty()) resolved["trials"] = default_trials().at(exp);
  return resolved;
}

Config parse_config_text(std::string_view text) {
  Config config;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!config.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' repeated");
    }
  }
  return config;
}

Report run(const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.config = resolve(config);
  report.aggregate = Json::object();
  const std::string& exp = report.config.at("experiment");
  try {
    harnesses().at(exp)(Params(report.config), report);
  } catch (const Error& e) {
    throw Error(e.kind(), exp + ": " + e.message());
  }
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string render_without_duration(const Report& report) { return render_body(report); }

std::string render(const Report& report) {
  std::string out = render_body(report);
  if (report.payload) return out;
  if (report.config.at("format") == "csv") {
    out += "duration_seconds," + format_double(report.duration_seconds) + "\n";
  } else {
    Json timing;
    timing["record"] = "timing";
    timing["duration_seconds"] = report.duration_seconds;
    out += timing.dump() + "\n";
  }
  return out;
}

}  // namespace weakcollapse::experiment
