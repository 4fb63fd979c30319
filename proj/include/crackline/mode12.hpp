#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackline/grid.hpp"
#include "crackline/loading.hpp"
#include "crackline/materials.hpp"
#include "crackline/mode3.hpp"
#include "crackline/profile.hpp"

namespace crackline {

struct DenominatorRoots {
  double xi1 = 0.0;  // smaller root
  double xi2 = 0.0;
};

// Roots of D = d0 + d1 s + d2 s^2 = d2 (s + xi1)(s + xi2). Throws unsupported_regime for a
// negative discriminant or non-positive coefficients, degenerate_roots when
// (xi2 - xi1) / xi2 < 1e-6.
DenominatorRoots denominator_roots(double d0, double d1, double d2);

struct InPlaneConstants {
  double h11 = 0.0, h22 = 0.0, beta = 0.0, gamma = 0.0, delta1 = 0.0, delta2 = 0.0;
  double k11 = 0.0, k12 = 0.0, k22 = 0.0;
  double d0 = 0.0, d1 = 0.0, d2 = 0.0;
  double xi1 = 0.0, xi2 = 0.0;

  double root_h() const;  // sqrt(h11 h22)
  Eigen::Matrix2d K() const;
};

InPlaneConstants in_plane_constants(const BimaterialConstants& constants, const InterfaceLaw& law);

struct TransformMatrices {
  Eigen::Matrix2cd A;
  Eigen::Matrix2cd B;
  Eigen::Matrix2cd C;
};

// A(xi) (with its 1/(2D) prefactor), B(xi) and C(xi) from the element tables. At xi = 0
// the mean of the two one-sided limits is returned.
TransformMatrices abc_at_xi(const InPlaneConstants& c, double xi);

// For xi > 0: F(xi) = scale / D * ((R + R_dag xi) + i (I + I_dag xi)), with
// R1 = R - R_dag xi1, R2 = -R + R_dag xi2 (same for I).
struct MatrixFamily {
  std::string name;
  double scale = 1.0;  // 1/2 for A
  Eigen::Matrix2d R = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d R_dag = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d I = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d I_dag = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d R1, R2, I1, I2;
};

struct PartialFractionSet {
  MatrixFamily A, B, C;
};

PartialFractionSet invert_abc(const InPlaneConstants& c);

// scale / (d2 (xi2 - xi1)) * sum_j (R_j + i I_j) / (|xi| + xi_j), conjugated for xi < 0.
Eigen::Matrix2cd reconstruct(const MatrixFamily& f, const InPlaneConstants& c, double xi);

// Inverse transform -(scale / (pi d2 (xi2 - xi1))) sum_j (R_j T_{xi_j}(x) + I_j S_{xi_j}(x)), x != 0.
Eigen::Matrix2d inverse_transform(const MatrixFamily& f, const InPlaneConstants& c, double x);

// Loading per in-plane component: index 0 is x1 (shear), 1 is x2 (opening).
using InPlaneLoading = std::array<Loading, 2>;

// p+ = (0, -(F/l) e^{x/l}), p- = (0, (F/l^2) x e^{x/l}).
InPlaneLoading asymmetric_opening_loading(double F, double l);

enum class Mode12Form {
  derivative,       // B acting on the jump derivative with the tip and end corrections
  derivative_free,  // the same identity with the derivative moved onto the kernels
};

std::string to_string(Mode12Form f);
Mode12Form parse_mode12_form(const std::string& name);

namespace detail {
struct Mode12System;
}

class Mode12Problem {
 public:
  struct Options {
    int load_refinement = 4;
  };

  static Mode12Problem create(const BimaterialConstants& constants, const InterfaceLaw& law,
                              const InPlaneLoading& loading, const Grid& grid, const Options& options);
  static Mode12Problem create(const BimaterialConstants& constants, const InterfaceLaw& law,
                              const InPlaneLoading& loading, const Grid& grid);

  const InPlaneConstants& constants() const { return constants_; }
  const PartialFractionSet& fractions() const { return fractions_; }
  const InPlaneLoading& loading() const { return loading_; }
  const Grid& grid() const { return grid_; }
  const detail::Mode12System& system() const { return *system_; }

 private:
  Mode12Problem() = default;
  InPlaneConstants constants_;
  PartialFractionSet fractions_;
  InPlaneLoading loading_;
  Grid grid_;
  std::shared_ptr<const detail::Mode12System> system_;
};

// Default grid: kernel scale xi1 (the slower decay) and the loading length.
Grid default_mode12_grid(const BimaterialConstants& constants, const InterfaceLaw& law,
                         const InPlaneLoading& loading, const GridOptions& options = {});

struct Mode12Solution {
  Grid grid;
  Mode12Form form = Mode12Form::derivative;
  Eigen::MatrixXd jump;      // grid.crack x 2
  Eigen::MatrixXd traction;  // grid.interface x 2
  SolveDiagnostics diagnostics;
  SolutionProfile profile;   // raw values, two components
};

Mode12Solution solve_mode12(const Mode12Problem& problem, Mode12Form form = Mode12Form::derivative);

// Residual of a jump in the crack equations of either form, relative to the right-hand side.
double mode12_residual(const Mode12Problem& problem, const Eigen::MatrixXd& jump, Mode12Form form);

// Jump (x <= 0 from the derivative-free identity, x > 0 as K t) and traction at arbitrary points.
Eigen::MatrixXd evaluate_jump_at(const Mode12Problem& problem, const Eigen::MatrixXd& jump,
                                 const std::vector<double>& xs);
Eigen::MatrixXd evaluate_traction_at(const Mode12Problem& problem, const Eigen::MatrixXd& jump,
                                     const std::vector<double>& xs);

}  // namespace crackline
