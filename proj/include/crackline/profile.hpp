#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackline/materials.hpp"

namespace crackline {

enum class Region { crack, interface };

const char* region_name(Region r);

struct Normalization {
  double F = 1.0;
  double l = 1.0;
  double reference_compliance = 1.0;
  std::optional<double> kappa_star;
};

// Displacement jump and traction sampled along the crack/interface line.
// Rows follow x1: crack nodes (-L_neg..0) then interface nodes (0..L_pos); the
// tip appears once per region. On crack rows `traction` holds the applied average
// face traction <p>, on interface rows the computed <t>. Columns are components.
struct SolutionProfile {
  std::vector<double> x1;
  std::vector<Region> region;
  Eigen::MatrixXd jump;
  Eigen::MatrixXd traction;
  Eigen::MatrixXd jump_star;
  Eigen::MatrixXd traction_star;
  std::optional<Normalization> normalization;

  int components() const { return static_cast<int>(jump.cols()); }
  std::size_t size() const { return x1.size(); }
};

// jump* = jump / (F c_ref), t* = (l/F) t with c_ref = [sqrt(s44 s55)]_I for one-component
// profiles and [sqrt(s11 s22)]_I for in-plane profiles; kappa* = kappa / (l c_ref).
SolutionProfile normalize(const SolutionProfile& raw, double F, double l,
                          const OrthotropicCompliance& matI, std::optional<double> kappa = std::nullopt);

// Linear interpolation of a profile column on one region (x must lie inside it).
double sample_profile(const SolutionProfile& p, Region region, int component, double x,
                      bool normalized = false);

}  // namespace crackline
