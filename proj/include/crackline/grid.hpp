#pragma once

#include <optional>
#include <vector>

namespace crackline {

// Graded grid on [-L_neg, L_pos] with |x_i| = L (i/n)^q on each side and 0 shared.
struct Grid {
  double L_neg = 0.0;
  double L_pos = 0.0;
  int n_neg = 0;
  int n_pos = 0;
  double q = 1.0;
  std::vector<double> crack;      // -L_neg, ..., 0   (n_neg + 1 nodes)
  std::vector<double> interface;  // 0, ..., L_pos    (n_pos + 1 nodes)

  // All distinct nodes in increasing order (2 + n_neg + n_pos - 1 values).
  std::vector<double> nodes() const;
  double min_spacing() const;
  // Same grading with n multiplied by factor; the old nodes are a subset.
  Grid refined(int factor) const;
  // Solvers need at least 8 intervals per side.
  void validate_for_solve() const;
};

Grid build_grid(double L_neg, double L_pos, int n_neg, int n_pos, double q);

// Truncation defaults to max(10 l_max, truncation_factor / a) on both sides.
struct GridOptions {
  std::optional<double> L_neg;
  std::optional<double> L_pos;
  int n_neg = 400;
  int n_pos = 400;
  double q = 3.0;
  double truncation_factor = 200.0;
};

double default_truncation(double a, double l_max, double truncation_factor = 200.0);
Grid default_grid(double a, double l_max, const GridOptions& options = {});

}  // namespace crackline
