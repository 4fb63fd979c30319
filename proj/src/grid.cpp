#include "crackline/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crackline/errors.hpp"

namespace crackline {

Grid build_grid(double L_neg, double L_pos, int n_neg, int n_pos, double q) {
  if (!(L_neg > 0.0) || !(L_pos > 0.0) || !std::isfinite(L_neg) || !std::isfinite(L_pos)) {
    fail(ErrorCode::invalid_grid, "truncation lengths must be positive and finite");
  }
  if (n_neg < 1 || n_pos < 1) fail(ErrorCode::invalid_grid, "node counts must be positive");
  if (!(q >= 1.0)) fail(ErrorCode::invalid_grid, "grading exponent must be >= 1");
  Grid g;
  g.L_neg = L_neg;
  g.L_pos = L_pos;
  g.n_neg = n_neg;
  g.n_pos = n_pos;
  g.q = q;
  g.crack.resize(n_neg + 1);
  for (int i = 0; i <= n_neg; ++i) {
    g.crack[i] = -L_neg * std::pow(static_cast<double>(n_neg - i) / n_neg, q);
  }
  g.interface.resize(n_pos + 1);
  for (int i = 0; i <= n_pos; ++i) {
    g.interface[i] = L_pos * std::pow(static_cast<double>(i) / n_pos, q);
  }
  g.crack.back() = 0.0;
  g.interface.front() = 0.0;
  return g;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> all(crack.begin(), crack.end());
  all.insert(all.end(), interface.begin() + 1, interface.end());
  return all;
}

double Grid::min_spacing() const {
  const auto all = nodes();
  double h = all.back() - all.front();
  for (std::size_t i = 1; i < all.size(); ++i) h = std::min(h, all[i] - all[i - 1]);
  return h;
}

Grid Grid::refined(int factor) const {
  if (factor < 1) fail(ErrorCode::invalid_grid, "refinement factor must be >= 1");
  return build_grid(L_neg, L_pos, n_neg * factor, n_pos * factor, q);
}

void Grid::validate_for_solve() const {
  if (n_neg < 8 || n_pos < 8) {
    std::ostringstream os;
    os << "grid has " << n_neg << "/" << n_pos << " intervals per side; solvers need at least 8";
    fail(ErrorCode::invalid_grid, os.str());
  }
}

double default_truncation(double a, double l_max, double truncation_factor) {
  if (!(a > 0.0)) fail(ErrorCode::domain_error, "kernel scale must be positive");
  return std::max(10.0 * l_max, truncation_factor / a);
}

Grid default_grid(double a, double l_max, const GridOptions& options) {
  const double L = default_truncation(a, l_max, options.truncation_factor);
  return build_grid(options.L_neg.value_or(L), options.L_pos.value_or(L), options.n_neg, options.n_pos,
                    options.q);
}

}  // namespace crackline
