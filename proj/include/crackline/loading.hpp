#pragma once

#include <optional>
#include <vector>

namespace crackline {

enum class Face { upper, lower };

// p(x) = amplitude * (x/length)^power * exp(x/length) on x <= 0.
struct LoadTerm {
  Face face = Face::upper;
  double amplitude = 0.0;
  double length = 1.0;
  int power = 0;

  double value(double x) const;
  // Integral over (-inf, 0]: amplitude * (-1)^power * power! * length.
  double integral() const;
};

// Piecewise-linear profile on increasing x <= 0, zero outside the table.
struct TabulatedLoad {
  std::vector<double> x;
  std::vector<double> upper;
  std::vector<double> lower;
};

struct BalanceReport {
  bool balanced = true;
  double residual = 0.0;
  double scale = 0.0;
};

// Crack-face traction for a single displacement component (p+ on the upper face,
// p- on the lower face).
class Loading {
 public:
  Loading() = default;
  explicit Loading(std::vector<LoadTerm> terms);
  explicit Loading(TabulatedLoad table);

  bool is_tabulated() const { return table_.has_value(); }
  const std::vector<LoadTerm>& terms() const { return terms_; }
  const TabulatedLoad& table() const;
  bool is_zero() const;

  double upper(double x) const;
  double lower(double x) const;
  double average(double x) const { return 0.5 * (upper(x) + lower(x)); }
  double jump(double x) const { return upper(x) - lower(x); }
  // True when p+ and p- are the same function, so the jump vanishes identically.
  bool jump_is_zero() const;

  // Length scales (1 for an empty loading).
  double max_length() const;
  double min_length() const;

  Loading scaled(double factor) const;

 private:
  std::vector<LoadTerm> terms_;
  std::optional<TabulatedLoad> table_;
};

// Default tolerance is 1e-10 for parametric and 1e-6 for tabulated loadings.
BalanceReport validate_self_balance(const Loading& load, std::optional<double> tol = std::nullopt);

// p+ = p- = -(F/l) e^{x/l}.
Loading symmetric_exponential_loading(double F, double l);
// p+ = -(F/l) e^{x/l}, p- = (F/l^2) x e^{x/l}.
Loading asymmetric_exponential_loading(double F, double l);

}  // namespace crackline
