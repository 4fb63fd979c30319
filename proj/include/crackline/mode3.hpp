#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackline/grid.hpp"
#include "crackline/loading.hpp"
#include "crackline/materials.hpp"
#include "crackline/profile.hpp"

namespace crackline {

// coupled: S acting on the jump, T on the loading.
// mixed:   T acting on the jump, S on the loading.
// t_only:  T on both (second-kind, default).
// s_only:  S on both.
enum class Mode3Formulation { coupled, mixed, t_only, s_only };

std::string to_string(Mode3Formulation f);
Mode3Formulation parse_mode3_formulation(const std::string& name);
std::vector<Mode3Formulation> all_mode3_formulations();

struct SolverOptions {
  bool fixed_point = false;
  double relaxation = 0.5;
  int max_iterations = 500;
  double tolerance = 1e-8;
};

struct SolveDiagnostics {
  std::string method;
  double residual = 0.0;  // max|A u - b| / max|b| (0 for a zero right-hand side)
  double rcond = 0.0;     // reciprocal condition estimate of the dense system
  int iterations = 0;
};

namespace detail {
struct Mode3System;
}

// Validated mode III problem. Construction checks every input and assembles the
// discrete operators; a problem object that exists can always be solved.
class Mode3Problem {
 public:
  struct Options {
    Mode3Formulation formulation = Mode3Formulation::t_only;
    // Loads enter through their interpolant on the grid refined by this factor.
    int load_refinement = 4;
  };

  static Mode3Problem create(const BimaterialConstants& constants, double kappa, const Loading& loading,
                             const Grid& grid, const Options& options);
  static Mode3Problem create(const BimaterialConstants& constants, double kappa, const Loading& loading,
                             const Grid& grid);

  // Same inputs and assembled operators, different formulation.
  Mode3Problem with_formulation(Mode3Formulation f) const;

  double h33() const { return h33_; }
  double delta3() const { return delta3_; }
  double kappa() const { return kappa_; }
  // Kernel scale H33 / kappa.
  double scale() const { return h33_ / kappa_; }
  const Loading& loading() const { return loading_; }
  const Grid& grid() const { return grid_; }
  Mode3Formulation formulation() const { return formulation_; }
  const detail::Mode3System& system() const { return *system_; }

 private:
  Mode3Problem() = default;
  double h33_ = 0.0;
  double delta3_ = 0.0;
  double kappa_ = 0.0;
  Loading loading_;
  Grid grid_;
  Mode3Formulation formulation_ = Mode3Formulation::t_only;
  std::shared_ptr<const detail::Mode3System> system_;
};

// Default grid for a mode III problem: kernel scale H33/kappa and the loading length.
Grid default_mode3_grid(const BimaterialConstants& constants, double kappa, const Loading& loading,
                        const GridOptions& options = {});

struct Mode3Solution {
  Grid grid;
  Mode3Formulation formulation = Mode3Formulation::t_only;
  double kappa = 0.0;
  Eigen::VectorXd jump;      // on grid.crack (node 0 is the tip value u(0-))
  Eigen::VectorXd traction;  // on grid.interface (node 0 is t(0+))
  SolveDiagnostics diagnostics;
  SolutionProfile profile;   // raw values, no normalization
};

Mode3Solution solve_mode3(const Mode3Problem& problem, const SolverOptions& options = {});

// Interface traction from the companion identity of the problem's formulation.
Eigen::VectorXd evaluate_traction(const Mode3Problem& problem, const Eigen::VectorXd& jump);

// Max-norm residual of `jump` in the crack equations of formulation f, relative to
// the right-hand side.
double formulation_residual(const Mode3Problem& problem, const Eigen::VectorXd& jump, Mode3Formulation f);

// Jump at arbitrary points via the second-kind identity (x < 0) or kappa t (x >= 0);
// exact at the nodes, and the natural interpolant between them.
Eigen::VectorXd evaluate_jump_at(const Mode3Problem& problem, const Eigen::VectorXd& jump,
                                 const std::vector<double>& xs);
Eigen::VectorXd evaluate_traction_at(const Mode3Problem& problem, const Eigen::VectorXd& jump,
                                     const std::vector<double>& xs);

// |u(0-) - kappa t(0+)| / |u(0-)| with t(0+) extrapolated from the first two interface
// nodes beyond the tip.
double tip_mismatch(const Mode3Solution& solution);

}  // namespace crackline
