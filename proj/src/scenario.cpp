#include "crackline/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "crackline/errors.hpp"

namespace crackline {
namespace {

using nlohmann::json;

constexpr const char* kScenarioFormat = "crackline-scenario/1";

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::config_error, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(ErrorCode::config_error, "unknown key '" + it.key() + "' in " + where);
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(ErrorCode::config_error, where + " is missing '" + key + "'");
  if (!j.at(key).is_number()) fail(ErrorCode::config_error, where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::config_error, where + "." + key + " has the wrong type");
  }
}

MaterialSpec parse_material(const json& j, const std::string& where) {
  MaterialSpec m;
  if (j.is_string()) {
    m.kind = MaterialSpec::Kind::preset;
    m.preset = j.get<std::string>();
    return m;
  }
  check_keys(j, {"preset", "mu23", "mu13", "e1", "e2", "e3", "mu12", "s11", "s12", "s22", "s66", "s44", "s55"}, where);
  if (j.contains("preset")) {
    m.kind = MaterialSpec::Kind::preset;
    m.preset = get_or<std::string>(j, "preset", "", where);
  } else if (j.contains("mu23") || j.contains("mu13")) {
    m.kind = MaterialSpec::Kind::shear_moduli;
    m.mu23 = get_number(j, "mu23", where);
    m.mu13 = get_number(j, "mu13", where);
  } else if (j.contains("e1")) {
    m.kind = MaterialSpec::Kind::incompressible;
    m.incompressible = {get_number(j, "e1", where), get_number(j, "e2", where), get_number(j, "e3", where),
                        get_number(j, "mu12", where)};
  } else {
    m.kind = MaterialSpec::Kind::compliance;
    if (j.contains("s11") || j.contains("s22") || j.contains("s12") || j.contains("s66")) {
      m.in_plane = InPlaneCompliance{get_number(j, "s11", where), get_number(j, "s12", where),
                                     get_number(j, "s22", where), get_number(j, "s66", where)};
    }
    if (j.contains("s44") || j.contains("s55")) {
      m.out_of_plane = OutOfPlaneCompliance{get_number(j, "s44", where), get_number(j, "s55", where)};
    }
  }
  return m;
}

json material_json(const MaterialSpec& m) {
  switch (m.kind) {
    case MaterialSpec::Kind::preset: return m.preset;
    case MaterialSpec::Kind::shear_moduli: return {{"mu23", m.mu23}, {"mu13", m.mu13}};
    case MaterialSpec::Kind::incompressible:
      return {{"e1", m.incompressible.e1},
              {"e2", m.incompressible.e2},
              {"e3", m.incompressible.e3},
              {"mu12", m.incompressible.mu12}};
    case MaterialSpec::Kind::compliance: {
      json j = json::object();
      if (m.in_plane) {
        j["s11"] = m.in_plane->s11;
        j["s12"] = m.in_plane->s12;
        j["s22"] = m.in_plane->s22;
        j["s66"] = m.in_plane->s66;
      }
      if (m.out_of_plane) {
        j["s44"] = m.out_of_plane->s44;
        j["s55"] = m.out_of_plane->s55;
      }
      return j;
    }
  }
  return json();
}

Face parse_face(const std::string& s) {
  if (s == "upper") return Face::upper;
  if (s == "lower") return Face::lower;
  fail(ErrorCode::config_error, "face must be 'upper' or 'lower' (got '" + s + "')");
}

ComponentLoad parse_component_load(const json& j, const std::string& where) {
  check_keys(j, {"component", "terms", "table"}, where);
  ComponentLoad c;
  c.component = get_or<int>(j, "component", 3, where);
  if (j.contains("terms")) {
    if (!j.at("terms").is_array()) fail(ErrorCode::config_error, where + ".terms must be an array");
    int k = 0;
    for (const auto& t : j.at("terms")) {
      const std::string w = where + ".terms[" + std::to_string(k++) + "]";
      check_keys(t, {"face", "amplitude", "length", "power"}, w);
      LoadTerm term;
      term.face = parse_face(get_or<std::string>(t, "face", "", w));
      term.amplitude = get_number(t, "amplitude", w);
      term.length = get_number(t, "length", w);
      term.power = get_or<int>(t, "power", 0, w);
      c.terms.push_back(term);
    }
  }
  if (j.contains("table")) {
    const json& t = j.at("table");
    check_keys(t, {"x", "upper", "lower"}, where + ".table");
    TabulatedLoad tab;
    tab.x = get_or<std::vector<double>>(t, "x", {}, where + ".table");
    tab.upper = get_or<std::vector<double>>(t, "upper", {}, where + ".table");
    tab.lower = get_or<std::vector<double>>(t, "lower", {}, where + ".table");
    c.table = tab;
  }
  if (c.table && !c.terms.empty()) fail(ErrorCode::config_error, where + " mixes terms and a table");
  return c;
}

json component_load_json(const ComponentLoad& c) {
  json j;
  j["component"] = c.component;
  if (c.table) {
    j["table"] = {{"x", c.table->x}, {"upper", c.table->upper}, {"lower", c.table->lower}};
  } else {
    json terms = json::array();
    for (const auto& t : c.terms) {
      terms.push_back({{"face", t.face == Face::upper ? "upper" : "lower"},
                       {"amplitude", t.amplitude},
                       {"length", t.length},
                       {"power", t.power}});
    }
    j["terms"] = terms;
  }
  return j;
}

json scenario_json(const Scenario& s) {
  json j;
  j["format"] = kScenarioFormat;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["mode"] = to_string(s.mode);
  j["materials"] = {{"I", material_json(s.material_I)}, {"II", material_json(s.material_II)}};
  json iface = json::object();
  if (s.mode == ProblemMode::iii) {
    if (s.interface.kappa) iface["kappa"] = *s.interface.kappa;
    if (s.interface.kappa_star) iface["kappa_star"] = *s.interface.kappa_star;
  } else {
    iface["k11"] = s.interface.k11;
    iface["k12"] = s.interface.k12;
    iface["k22"] = s.interface.k22;
  }
  j["interface"] = iface;
  json loads = json::array();
  for (const auto& c : s.loading) loads.push_back(component_load_json(c));
  j["loading"] = loads;
  j["normalization"] = {{"F", s.F}, {"l", s.l}};
  json g = {{"n_neg", s.grid.n_neg}, {"n_pos", s.grid.n_pos}, {"q", s.grid.q},
            {"truncation_factor", s.grid.truncation_factor}};
  if (s.grid.L_neg) g["L_neg"] = *s.grid.L_neg;
  if (s.grid.L_pos) g["L_pos"] = *s.grid.L_pos;
  j["grid"] = g;
  json solver = {{"fixed_point", s.solver.fixed_point},
                 {"relaxation", s.solver.relaxation},
                 {"max_iterations", s.solver.max_iterations},
                 {"tolerance", s.solver.tolerance},
                 {"load_refinement", s.load_refinement}};
  if (!s.formulation.empty()) solver["formulation"] = s.formulation;
  j["solver"] = solver;
  json oracle = {{"window", s.oracle_window}};
  if (s.oracle_threshold) oracle["threshold"] = *s.oracle_threshold;
  if (s.oracle_max_iterations) oracle["max_iterations"] = *s.oracle_max_iterations;
  j["oracle"] = oracle;
  return j;
}

Scenario scenario_from_json(const json& j) {
  check_keys(j, {"format", "name", "description", "mode", "materials", "interface", "loading", "normalization", "grid",
                 "solver", "oracle"},
             "scenario");
  const std::string format = get_or<std::string>(j, "format", kScenarioFormat, "scenario");
  if (format != kScenarioFormat) fail(ErrorCode::config_error, "unsupported scenario format '" + format + "'");
  Scenario s;
  s.name = get_or<std::string>(j, "name", "", "scenario");
  if (s.name.empty()) fail(ErrorCode::config_error, "scenario needs a non-empty 'name'");
  s.description = get_or<std::string>(j, "description", "", "scenario");
  const std::string mode = get_or<std::string>(j, "mode", "iii", "scenario");
  if (mode == "iii") {
    s.mode = ProblemMode::iii;
  } else if (mode == "i-ii") {
    s.mode = ProblemMode::i_ii;
  } else {
    fail(ErrorCode::config_error, "mode must be 'iii' or 'i-ii' (got '" + mode + "')");
  }
  if (!j.contains("materials")) fail(ErrorCode::config_error, "scenario is missing 'materials'");
  const json& mats = j.at("materials");
  check_keys(mats, {"I", "II"}, "materials");
  if (!mats.contains("I") || !mats.contains("II")) fail(ErrorCode::config_error, "materials need 'I' and 'II'");
  s.material_I = parse_material(mats.at("I"), "materials.I");
  s.material_II = parse_material(mats.at("II"), "materials.II");

  if (!j.contains("interface")) fail(ErrorCode::config_error, "scenario is missing 'interface'");
  const json& iface = j.at("interface");
  if (s.mode == ProblemMode::iii) {
    check_keys(iface, {"kappa", "kappa_star"}, "interface");
    if (iface.contains("kappa")) s.interface.kappa = get_number(iface, "kappa", "interface");
    if (iface.contains("kappa_star")) s.interface.kappa_star = get_number(iface, "kappa_star", "interface");
    if (s.interface.kappa.has_value() == s.interface.kappa_star.has_value()) {
      fail(ErrorCode::config_error, "interface needs exactly one of 'kappa' and 'kappa_star'");
    }
  } else {
    check_keys(iface, {"k11", "k12", "k22"}, "interface");
    s.interface.k11 = get_number(iface, "k11", "interface");
    s.interface.k12 = get_or<double>(iface, "k12", 0.0, "interface");
    s.interface.k22 = get_number(iface, "k22", "interface");
  }

  if (j.contains("loading")) {
    if (!j.at("loading").is_array()) fail(ErrorCode::config_error, "loading must be an array");
    int k = 0;
    for (const auto& c : j.at("loading")) {
      s.loading.push_back(parse_component_load(c, "loading[" + std::to_string(k++) + "]"));
    }
  }
  for (const auto& c : s.loading) {
    const bool ok = s.mode == ProblemMode::iii ? c.component == 3 : (c.component == 1 || c.component == 2);
    if (!ok) fail(ErrorCode::config_error, "loading component " + std::to_string(c.component) + " does not fit mode " + mode);
  }

  if (j.contains("normalization")) {
    const json& n = j.at("normalization");
    check_keys(n, {"F", "l"}, "normalization");
    s.F = get_or<double>(n, "F", 1.0, "normalization");
    s.l = get_or<double>(n, "l", 1.0, "normalization");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"n_neg", "n_pos", "q", "truncation_factor", "L_neg", "L_pos"}, "grid");
    s.grid.n_neg = get_or<int>(g, "n_neg", s.grid.n_neg, "grid");
    s.grid.n_pos = get_or<int>(g, "n_pos", s.grid.n_pos, "grid");
    s.grid.q = get_or<double>(g, "q", s.grid.q, "grid");
    s.grid.truncation_factor = get_or<double>(g, "truncation_factor", s.grid.truncation_factor, "grid");
    if (g.contains("L_neg")) s.grid.L_neg = get_number(g, "L_neg", "grid");
    if (g.contains("L_pos")) s.grid.L_pos = get_number(g, "L_pos", "grid");
  }
  if (j.contains("solver")) {
    const json& v = j.at("solver");
    check_keys(v, {"formulation", "fixed_point", "relaxation", "max_iterations", "tolerance", "load_refinement"},
               "solver");
    s.formulation = get_or<std::string>(v, "formulation", "", "solver");
    s.solver.fixed_point = get_or<bool>(v, "fixed_point", false, "solver");
    s.solver.relaxation = get_or<double>(v, "relaxation", s.solver.relaxation, "solver");
    s.solver.max_iterations = get_or<int>(v, "max_iterations", s.solver.max_iterations, "solver");
    s.solver.tolerance = get_or<double>(v, "tolerance", s.solver.tolerance, "solver");
    s.load_refinement = get_or<int>(v, "load_refinement", s.load_refinement, "solver");
  }
  if (!s.formulation.empty()) {
    if (s.mode == ProblemMode::iii) {
      parse_mode3_formulation(s.formulation);
    } else {
      parse_mode12_form(s.formulation);
    }
  }
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    check_keys(o, {"window", "threshold", "max_iterations"}, "oracle");
    s.oracle_window = get_or<double>(o, "window", s.oracle_window, "oracle");
    if (o.contains("threshold")) s.oracle_threshold = get_number(o, "threshold", "oracle");
    if (o.contains("max_iterations")) s.oracle_max_iterations = get_or<int>(o, "max_iterations", 0, "oracle");
  }
  return s;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Resolved inputs shared by run and oracle_check.
struct Mode3Setup {
  OrthotropicCompliance matI;
  BimaterialConstants constants;
  double kappa;
  Mode3Problem problem;
};

struct Mode12Setup {
  OrthotropicCompliance matI;
  BimaterialConstants constants;
  InterfaceLaw law;
  Mode12Problem problem;
};

Loading mode3_loading(const Scenario& s) {
  if (s.loading.size() > 1) fail(ErrorCode::config_error, "mode III takes a single loading component");
  return s.loading.empty() ? Loading{} : s.loading.front().loading();
}

InPlaneLoading mode12_loading(const Scenario& s) {
  InPlaneLoading out;
  bool seen[2] = {false, false};
  for (const auto& c : s.loading) {
    const int k = c.component - 1;
    if (seen[k]) fail(ErrorCode::config_error, "loading component " + std::to_string(c.component) + " given twice");
    seen[k] = true;
    out[k] = c.loading();
  }
  return out;
}

Mode3Setup setup_mode3(const Scenario& s) {
  const OrthotropicCompliance matI = s.material_I.resolve();
  const OrthotropicCompliance matII = s.material_II.resolve();
  const BimaterialConstants constants = bimaterial_constants(matI, matII);
  const double kappa = s.interface.kappa ? *s.interface.kappa
                                         : *s.interface.kappa_star * s.l * matI.out_of_plane_root();
  const Loading load = mode3_loading(s);
  const Grid grid = default_mode3_grid(constants, kappa, load, s.grid);
  Mode3Problem::Options opt;
  if (!s.formulation.empty()) opt.formulation = parse_mode3_formulation(s.formulation);
  opt.load_refinement = s.load_refinement;
  return {matI, constants, kappa, Mode3Problem::create(constants, kappa, load, grid, opt)};
}

Mode12Setup setup_mode12(const Scenario& s) {
  const OrthotropicCompliance matI = s.material_I.resolve();
  const OrthotropicCompliance matII = s.material_II.resolve();
  const BimaterialConstants constants = bimaterial_constants(matI, matII);
  const InterfaceLaw law = InterfaceLaw::in_plane(s.interface.k11, s.interface.k12, s.interface.k22);
  const InPlaneLoading load = mode12_loading(s);
  const Grid grid = default_mode12_grid(constants, law, load, s.grid);
  Mode12Problem::Options opt;
  opt.load_refinement = s.load_refinement;
  return {matI, constants, law, Mode12Problem::create(constants, law, load, grid, opt)};
}

json grid_json(const Grid& g) {
  return {{"L_neg", g.L_neg}, {"L_pos", g.L_pos}, {"n_neg", g.n_neg},
          {"n_pos", g.n_pos}, {"q", g.q},         {"min_spacing", g.min_spacing()}};
}

json diagnostics_json(const SolveDiagnostics& d) {
  return {{"method", d.method}, {"residual", d.residual}, {"rcond", d.rcond}, {"iterations", d.iterations}};
}

json comparison_json(const ComparisonReport& r) {
  auto region = [](const RegionDifference& d) {
    return json{{"max_relative", d.max_relative}, {"mean_relative", d.mean_relative}, {"samples", d.samples}};
  };
  return {{"window", r.window},
          {"max_relative", r.max_relative},
          {"crack", region(r.crack)},
          {"interface", region(r.interface)}};
}

json spectral_json(const SpectralSolution& sp) {
  return {{"n_xi", sp.config.n_xi},         {"dx", sp.config.dx},
          {"xi_max", sp.config.xi_max},     {"tolerance", sp.config.tolerance},
          {"iterations", sp.iterations},    {"residual", sp.residual}};
}

SpectralConfig spectral_config(SpectralConfig cfg, const Scenario& s) {
  if (s.oracle_max_iterations) cfg.max_iterations = *s.oracle_max_iterations;
  return cfg;
}

}  // namespace

std::string to_string(ProblemMode m) { return m == ProblemMode::iii ? "iii" : "i-ii"; }

OrthotropicCompliance MaterialSpec::resolve() const {
  switch (kind) {
    case Kind::preset: return material_preset(preset);
    case Kind::shear_moduli: return compliance_from_shear_moduli(mu23, mu13);
    case Kind::incompressible: return compliance_from_incompressible(incompressible);
    case Kind::compliance: return OrthotropicCompliance(in_plane, out_of_plane);
  }
  fail(ErrorCode::config_error, "unknown material kind");
}

Loading ComponentLoad::loading() const { return table ? Loading(*table) : Loading(terms); }

double Scenario::threshold() const {
  if (oracle_threshold) return *oracle_threshold;
  return mode == ProblemMode::iii ? 0.005 : 0.01;
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config_error, std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

std::string serialize_scenario(const Scenario& s) { return scenario_json(s).dump(2) + "\n"; }

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_error, "cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<std::string> bundled_scenario_names() {
  return {"fig2-AA-kappa5", "fig2-AA-kappa20", "fig2-AB-kappa5", "fig2-AB-kappa20", "fig2-AC-kappa5",
          "fig2-AC-kappa20", "fig3-asymmetric", "fig6-inplane",  "table1-A",       "table1-B",
          "table1-C",       "table2-I",        "table2-II"};
}

Scenario bundled_scenario(const std::string& name) {
  auto preset = [](const std::string& p) {
    MaterialSpec m;
    m.kind = MaterialSpec::Kind::preset;
    m.preset = p;
    return m;
  };
  auto mode3_load = [](const Loading& l) {
    ComponentLoad c;
    c.component = 3;
    c.terms = l.terms();
    return c;
  };
  auto mode3 = [&](const std::string& n, const std::string& desc, const std::string& I, const std::string& II,
                   double kstar, const Loading& load) {
    Scenario s;
    s.name = n;
    s.description = desc;
    s.mode = ProblemMode::iii;
    s.material_I = preset(I);
    s.material_II = preset(II);
    s.interface.kappa_star = kstar;
    s.loading = {mode3_load(load)};
    return s;
  };
  auto inplane = [&](const std::string& n, const std::string& desc, const std::string& I, const std::string& II) {
    Scenario s;
    s.name = n;
    s.description = desc;
    s.mode = ProblemMode::i_ii;
    s.material_I = preset(I);
    s.material_II = preset(II);
    s.interface.k11 = 10.0;
    s.interface.k12 = 2.0;
    s.interface.k22 = 3.0;
    ComponentLoad c;
    c.component = 2;
    c.terms = asymmetric_exponential_loading(1.0, 1.0).terms();
    s.loading = {c};
    return s;
  };
  const Loading sym = symmetric_exponential_loading(1.0, 1.0);
  for (const char* II : {"A", "B", "C"}) {
    for (int k : {5, 20}) {
      const std::string n = std::string("fig2-A") + II + "-kappa" + std::to_string(k);
      if (name == n) {
        return mode3(n, std::string("Mode III, orientation A over ") + II + ", kappa* = " + std::to_string(k) +
                            ", symmetric exponential loading",
                     "A", II, k, sym);
      }
    }
  }
  if (name == "fig3-asymmetric") {
    return mode3(name, "Mode III, orientation A over C, kappa* = 5, asymmetric exponential loading", "A", "C", 5.0,
                 asymmetric_exponential_loading(1.0, 1.0));
  }
  if (name == "fig6-inplane") {
    return inplane(name, "Mode I/II, incompressible-I over incompressible-II, K = (10, 2, 3), asymmetric opening load",
                   "incompressible-I", "incompressible-II");
  }
  for (const char* m : {"A", "B", "C"}) {
    if (name == std::string("table1-") + m) {
      return mode3(name, std::string("Mode III, orientation ") + m + " on both sides, kappa* = 5, symmetric loading",
                   m, m, 5.0, sym);
    }
  }
  for (const char* m : {"I", "II"}) {
    if (name == std::string("table2-") + m) {
      const std::string p = std::string("incompressible-") + m;
      return inplane(name, "Mode I/II, " + p + " on both sides, K = (10, 2, 3), asymmetric opening load", p, p);
    }
  }
  std::string known;
  for (const auto& n : bundled_scenario_names()) known += (known.empty() ? "" : ", ") + n;
  fail(ErrorCode::config_error, "unknown scenario '" + name + "' (bundled: " + known + ")");
}

Scenario resolve_scenario(const std::string& name_or_path) {
  std::ifstream probe(name_or_path);
  if (probe.good()) return load_scenario_file(name_or_path);
  return bundled_scenario(name_or_path);
}

std::string profile_csv(const SolutionProfile& p) {
  const int nc = p.components();
  const bool norm = p.jump_star.size() == p.jump.size() && p.jump.size() > 0;
  std::ostringstream os;
  os << "# crackline-profile v1\n";
  auto suffix = [nc](int c) { return nc == 1 ? std::string() : std::to_string(c + 1); };
  os << "x1,region";
  for (int c = 0; c < nc; ++c) os << ",jump_u" << suffix(c);
  for (int c = 0; c < nc; ++c) os << ",jump_u" << suffix(c) << "_star";
  for (int c = 0; c < nc; ++c) os << ",traction" << suffix(c);
  for (int c = 0; c < nc; ++c) os << ",t" << suffix(c) << "_star";
  os << "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    os << format_number(p.x1[i]) << ',' << region_name(p.region[i]);
    for (int c = 0; c < nc; ++c) os << ',' << format_number(p.jump(r, c));
    for (int c = 0; c < nc; ++c) os << ',' << (norm ? format_number(p.jump_star(r, c)) : "");
    for (int c = 0; c < nc; ++c) os << ',' << format_number(p.traction(r, c));
    for (int c = 0; c < nc; ++c) os << ',' << (norm ? format_number(p.traction_star(r, c)) : "");
    os << "\n";
  }
  return os.str();
}

RunResult run_scenario(const Scenario& s) {
  RunResult out;
  json meta;
  meta["format"] = "crackline-run/1";
  meta["scenario"] = scenario_json(s);
  meta["mode"] = to_string(s.mode);
  if (s.mode == ProblemMode::iii) {
    Mode3Setup st = setup_mode3(s);
    const Mode3Solution sol = solve_mode3(st.problem, s.solver);
    out.profile = normalize(sol.profile, s.F, s.l, st.matI, st.kappa);
    const OutOfPlaneConstants& c = st.constants.out_of_plane();
    meta["constants"] = {{"H33", c.h33}, {"delta3", c.delta3}, {"root_I", c.root_I}, {"root_II", c.root_II},
                         {"kernel_scale", st.problem.scale()}};
    meta["interface"] = {{"kappa", st.kappa}, {"kappa_star", *out.profile.normalization->kappa_star}};
    meta["formulation"] = to_string(sol.formulation);
    meta["grid"] = grid_json(sol.grid);
    meta["diagnostics"] = diagnostics_json(sol.diagnostics);
    meta["tip_mismatch"] = tip_mismatch(sol);
  } else {
    Mode12Setup st = setup_mode12(s);
    const Mode12Form form = s.formulation.empty() ? Mode12Form::derivative : parse_mode12_form(s.formulation);
    const Mode12Solution sol = solve_mode12(st.problem, form);
    out.profile = normalize(sol.profile, s.F, s.l, st.matI);
    const InPlaneConstants& c = st.problem.constants();
    meta["constants"] = {{"H11", c.h11},     {"H22", c.h22},     {"beta", c.beta}, {"gamma", c.gamma},
                         {"delta1", c.delta1}, {"delta2", c.delta2}, {"d0", c.d0},     {"d1", c.d1},
                         {"d2", c.d2},         {"xi1", c.xi1},       {"xi2", c.xi2}};
    meta["interface"] = {{"k11", c.k11}, {"k12", c.k12}, {"k22", c.k22}};
    meta["formulation"] = to_string(form);
    meta["grid"] = grid_json(sol.grid);
    meta["diagnostics"] = diagnostics_json(sol.diagnostics);
  }
  const Normalization& n = *out.profile.normalization;
  meta["normalization"] = {{"F", n.F}, {"l", n.l}, {"reference_compliance", n.reference_compliance}};
  json cols = json::array();
  out.csv = profile_csv(out.profile);
  {
    std::istringstream in(out.csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
  }
  meta["columns"] = cols;
  meta["rows"] = out.profile.size();
  out.metadata = meta.dump(2) + "\n";
  return out;
}

OracleResult oracle_check(const Scenario& s) {
  OracleResult out;
  out.threshold = s.threshold();
  json j;
  j["format"] = "crackline-oracle/1";
  j["scenario"] = s.name;
  j["mode"] = to_string(s.mode);
  const double window = s.oracle_window * s.l;
  if (s.mode == ProblemMode::iii) {
    Mode3Setup st = setup_mode3(s);
    const Mode3Solution sol = solve_mode3(st.problem, s.solver);
    const SpectralSolution sp = spectral_solve_mode3(st.problem, spectral_config(default_spectral_config(st.problem), s));
    out.report = compare_mode3(st.problem, sol, sp, window);
    j["spectral"] = spectral_json(sp);
  } else {
    Mode12Setup st = setup_mode12(s);
    const Mode12Form form = s.formulation.empty() ? Mode12Form::derivative : parse_mode12_form(s.formulation);
    const Mode12Solution sol = solve_mode12(st.problem, form);
    const SpectralSolution sp = spectral_solve_mode12(st.problem, spectral_config(default_spectral_config(st.problem), s));
    out.report = compare_mode12(st.problem, sol, sp, window);
    j["spectral"] = spectral_json(sp);
  }
  out.pass = out.report.max_relative <= out.threshold;
  j["comparison"] = comparison_json(out.report);
  j["threshold"] = out.threshold;
  j["pass"] = out.pass;
  out.json = j.dump(2) + "\n";
  return out;
}

}  // namespace crackline
