#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackline/grid.hpp"

namespace crackline {

enum class Kernel { S, T };
// singular: targets on the crack side (x <= 0, node 0 read as 0-);
// compact: targets on the interface side (x >= 0, node 0 read as 0+).
enum class Part { singular, compact };
// hat: columns act on nodal values of a piecewise-linear function phi (K * phi).
// slope: columns act on nodal values but integrate K against the classical
// derivative phi' (K * phi', without the jumps at the support ends).
enum class Basis { hat, slope };

struct DiscreteOperator {
  Kernel kernel = Kernel::T;
  Part part = Part::singular;
  Basis basis = Basis::hat;
  double a = 1.0;
  Eigen::MatrixXd matrix;

  std::string tag() const;  // "S_singular", "T_compact", ...
};

// Product-integration weights of S_a and T_a for arbitrary targets against
// piecewise-linear functions on `sources` (increasing nodes).
struct ConvolutionMatrices {
  Eigen::MatrixXd S_hat;
  Eigen::MatrixXd T_hat;
  Eigen::MatrixXd S_slope;
  Eigen::MatrixXd T_slope;
};

ConvolutionMatrices convolution_matrices(double a, const std::vector<double>& targets,
                                         const std::vector<double>& sources);

// Per-element integrals int_e K(x - t) dt and int_e K(x - t) (t - t0)/h dt.
struct ElementMoments {
  double S0 = 0.0, S1 = 0.0, T0 = 0.0, T1 = 0.0;
};
ElementMoments element_moments(double a, double x, double t0, double t1);

DiscreteOperator assemble(Kernel kernel, Part part, double a, const Grid& grid,
                          Basis basis = Basis::hat);

const std::vector<double>& targets_of(Part part, const Grid& grid);

// Entries S_a(x_i - 0) * value_at_zero with the one-sided limit at the node 0.
Eigen::VectorXd jump_correction(Part part, double a, const Grid& grid, double value_at_zero);
// Entries S_a(x_i + L_neg) * value_at_end: the jump of a truncated trial function at -L_neg.
Eigen::VectorXd truncation_correction(Part part, double a, const Grid& grid, double value_at_end);

// S_a evaluated at x, with x = 0 read from the side given by `part`.
double kernel_S_sided(double a, double x, Part part);

// Convolutions of the piecewise-linear interpolant f of `values` on `sources`
// (increasing, last node 0) evaluated at `targets`:
//   T = T_a * f,  S = S_a * f,  S_derivative = S_a * f' with f' including the jumps
// of f at both ends of its support.
struct SampledConvolution {
  Eigen::VectorXd T;
  Eigen::VectorXd S;
  Eigen::VectorXd S_derivative;
};

SampledConvolution convolve_sampled(double a, const std::vector<double>& targets, Part part,
                                    const std::vector<double>& sources, const Eigen::VectorXd& values);

}  // namespace crackline
