#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackline/mode12.hpp"
#include "crackline/mode3.hpp"
#include "crackline/profile.hpp"

namespace crackline {

struct KernelCheck {
  double max_deviation = 0.0;
  double worst_x = 0.0;
  int panels = 0;  // largest panel count used by any sample
};

// S_a and T_a by oscillatory quadrature of
//   S_a(x) = -int_0^inf sin(x xi) / (xi + a) dxi,  T_a(x) = -int_0^inf cos(x xi) / (xi + a) dxi
// over half-period panels with epsilon-algorithm acceleration, compared with the closed forms.
KernelCheck kernel_quadrature_check(double a, const std::vector<double>& xs);

// Values from the quadrature alone (no closed form involved).
double kernel_S_quadrature(double a, double x);
double kernel_T_quadrature(double a, double x);

// Uniform periodic grid: x_k = (k - k0) dx, crack nodes k = 0..k0 span [-L_neg, 0].
struct SpectralConfig {
  double L_neg = 0.0;
  double L_pos = 0.0;
  double dx = 0.0;
  int n_xi = 0;         // FFT length (power of two)
  double xi_max = 0.0;  // pi / dx
  double tolerance = 1e-10;
  int max_iterations = 20000;
};

// dx = min(l_min, 1/a_max) / 32 adjusted so that L_neg is a whole number of steps, period at
// least 1.5 (L_neg + L_pos), n_xi the next power of two (at most 2^21, coarsening dx if needed).
SpectralConfig default_spectral_config(double L_neg, double L_pos, double l_min, double a_max);
// The same defaults for a problem's truncation, loading lengths and fastest kernel scale.
SpectralConfig default_spectral_config(const Mode3Problem& problem);
SpectralConfig default_spectral_config(const Mode12Problem& problem);

struct SpectralSolution {
  SpectralConfig config;
  std::vector<double> x;  // -L_neg .. L_pos
  std::vector<Region> region;
  Eigen::MatrixXd jump;      // rows follow x (interface rows hold K t)
  Eigen::MatrixXd traction;  // interface rows; crack rows hold <p>
  int iterations = 0;
  double residual = 0.0;

  SolutionProfile profile() const;
};

SpectralSolution spectral_solve_mode3(const Mode3Problem& problem, const SpectralConfig& cfg);
SpectralSolution spectral_solve_mode3(const Mode3Problem& problem);
SpectralSolution spectral_solve_mode12(const Mode12Problem& problem, const SpectralConfig& cfg);
SpectralSolution spectral_solve_mode12(const Mode12Problem& problem);

struct RegionDifference {
  double max_relative = 0.0;   // max |nystrom - spectral| / max |spectral| over the window
  double mean_relative = 0.0;  // mean |nystrom - spectral| / max |spectral|
  int samples = 0;
};

struct ComparisonReport {
  double window = 0.0;  // |x| <= window
  RegionDifference crack;
  RegionDifference interface;
  double max_relative = 0.0;  // over both regions and all components
  int spectral_iterations = 0;
};

// Compares jumps at the spectral nodes inside |x| <= window, with the Nystrom jump
// evaluated there through its interpolation identity.
ComparisonReport compare_mode3(const Mode3Problem& problem, const Mode3Solution& nystrom,
                               const SpectralSolution& spectral, double window);
ComparisonReport compare_mode12(const Mode12Problem& problem, const Mode12Solution& nystrom,
                                const SpectralSolution& spectral, double window);

}  // namespace crackline
