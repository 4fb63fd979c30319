#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crackline/grid.hpp"
#include "crackline/loading.hpp"
#include "crackline/materials.hpp"
#include "crackline/mode12.hpp"
#include "crackline/mode3.hpp"
#include "crackline/oracle.hpp"
#include "crackline/profile.hpp"

namespace crackline {

enum class ProblemMode { iii, i_ii };

std::string to_string(ProblemMode m);

// One half-plane: a preset name, shear moduli, incompressible parameters or raw compliances.
struct MaterialSpec {
  enum class Kind { preset, shear_moduli, incompressible, compliance };
  Kind kind = Kind::preset;
  std::string preset;
  double mu23 = 0.0, mu13 = 0.0;
  IncompressibleOrthotropicParams incompressible;
  std::optional<InPlaneCompliance> in_plane;
  std::optional<OutOfPlaneCompliance> out_of_plane;

  OrthotropicCompliance resolve() const;
};

// kappa may be given directly or as kappa* = kappa / (l [sqrt(s44 s55)]_I).
struct InterfaceSpec {
  std::optional<double> kappa;
  std::optional<double> kappa_star;
  double k11 = 0.0, k12 = 0.0, k22 = 0.0;
};

// Crack-face loading of one displacement component (3 for mode III, 1 or 2 in-plane).
struct ComponentLoad {
  int component = 3;
  std::vector<LoadTerm> terms;
  std::optional<TabulatedLoad> table;

  Loading loading() const;
};

struct Scenario {
  std::string name;
  std::string description;
  ProblemMode mode = ProblemMode::iii;
  MaterialSpec material_I;
  MaterialSpec material_II;
  InterfaceSpec interface;
  std::vector<ComponentLoad> loading;
  double F = 1.0;
  double l = 1.0;
  GridOptions grid;
  std::string formulation;  // mode III formulation or in-plane form; empty for the default
  SolverOptions solver;
  int load_refinement = 4;
  double oracle_window = 5.0;       // in units of l
  std::optional<double> oracle_threshold;  // default 0.005 (iii) / 0.01 (i-ii)
  std::optional<int> oracle_max_iterations;  // spectral CG cap (default 20000)

  double threshold() const;
};

// JSON scenario files ("format": "crackline-scenario/1").
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);
Scenario load_scenario_file(const std::string& path);

std::vector<std::string> bundled_scenario_names();
Scenario bundled_scenario(const std::string& name);
// A path to an existing file, otherwise a bundled scenario name.
Scenario resolve_scenario(const std::string& name_or_path);

struct RunResult {
  SolutionProfile profile;  // normalized
  std::string csv;
  std::string metadata;  // JSON
};

RunResult run_scenario(const Scenario& s);

struct OracleResult {
  ComparisonReport report;
  double threshold = 0.0;
  bool pass = false;
  std::string json;
};

// Runs the Nystrom and spectral paths and compares jumps on |x| <= window * l.
OracleResult oracle_check(const Scenario& s);

// "# crackline-profile v1" header, column row, one line per profile row.
std::string profile_csv(const SolutionProfile& p);

}  // namespace crackline
