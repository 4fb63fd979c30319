#include "crackline/loading.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <sstream>

#include "crackline/errors.hpp"

namespace crackline {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const std::size_t i = j - 1;
  const double w = (x - xs[i]) / (xs[j] - xs[i]);
  return (1.0 - w) * ys[i] + w * ys[j];
}

double trapezoid(const std::vector<double>& xs, const std::vector<double>& ys) {
  double s = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) s += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  return s;
}

}  // namespace

double LoadTerm::value(double x) const {
  if (x > 0.0) return 0.0;
  const double s = x / length;
  return amplitude * std::pow(s, power) * std::exp(s);
}

double LoadTerm::integral() const {
  const double sign = (power % 2 == 0) ? 1.0 : -1.0;
  return amplitude * sign * factorial(power) * length;
}

Loading::Loading(std::vector<LoadTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!(t.length > 0.0) || !std::isfinite(t.length)) {
      fail(ErrorCode::config_error, "load term length scale must be positive");
    }
    if (t.power < 0) fail(ErrorCode::config_error, "load term power must be >= 0");
    if (!std::isfinite(t.amplitude)) fail(ErrorCode::config_error, "load term amplitude must be finite");
  }
}

Loading::Loading(TabulatedLoad table) : table_(std::move(table)) {
  const auto& t = *table_;
  if (t.x.size() < 2 || t.upper.size() != t.x.size() || t.lower.size() != t.x.size()) {
    fail(ErrorCode::config_error, "tabulated load needs >= 2 rows with matching x, p+, p- columns");
  }
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (t.x[i] > 0.0) fail(ErrorCode::config_error, "tabulated load abscissae must satisfy x <= 0");
    if (i > 0 && !(t.x[i] > t.x[i - 1])) fail(ErrorCode::config_error, "tabulated load abscissae must increase");
  }
}

const TabulatedLoad& Loading::table() const {
  if (!table_) fail(ErrorCode::config_error, "loading is parametric, not tabulated");
  return *table_;
}

bool Loading::is_zero() const {
  if (table_) {
    for (std::size_t i = 0; i < table_->x.size(); ++i)
      if (table_->upper[i] != 0.0 || table_->lower[i] != 0.0) return false;
    return true;
  }
  return std::all_of(terms_.begin(), terms_.end(), [](const LoadTerm& t) { return t.amplitude == 0.0; });
}

double Loading::upper(double x) const {
  if (x > 0.0) return 0.0;
  if (table_) return interpolate(table_->x, table_->upper, x);
  double s = 0.0;
  for (const auto& t : terms_)
    if (t.face == Face::upper) s += t.value(x);
  return s;
}

double Loading::lower(double x) const {
  if (x > 0.0) return 0.0;
  if (table_) return interpolate(table_->x, table_->lower, x);
  double s = 0.0;
  for (const auto& t : terms_)
    if (t.face == Face::lower) s += t.value(x);
  return s;
}

bool Loading::jump_is_zero() const {
  if (table_) return table_->upper == table_->lower;
  // Compare the multiset of upper terms with the multiset of lower terms.
  std::vector<std::tuple<double, double, int>> up, lo;
  for (const auto& t : terms_) {
    auto key = std::make_tuple(t.amplitude, t.length, t.power);
    (t.face == Face::upper ? up : lo).push_back(key);
  }
  std::sort(up.begin(), up.end());
  std::sort(lo.begin(), lo.end());
  return up == lo;
}

double Loading::max_length() const {
  if (table_) return std::max(1.0, -table_->x.front() / 10.0);
  double l = 0.0;
  for (const auto& t : terms_) l = std::max(l, t.length);
  return l > 0.0 ? l : 1.0;
}

double Loading::min_length() const {
  if (table_) {
    double h = -table_->x.front();
    for (std::size_t i = 1; i < table_->x.size(); ++i) h = std::min(h, table_->x[i] - table_->x[i - 1]);
    return std::max(h, 1e-12);
  }
  double l = 0.0;
  for (const auto& t : terms_) l = (l == 0.0) ? t.length : std::min(l, t.length);
  return l > 0.0 ? l : 1.0;
}

Loading Loading::scaled(double factor) const {
  if (table_) {
    TabulatedLoad t = *table_;
    for (auto& v : t.upper) v *= factor;
    for (auto& v : t.lower) v *= factor;
    return Loading(std::move(t));
  }
  auto terms = terms_;
  for (auto& t : terms) t.amplitude *= factor;
  return Loading(std::move(terms));
}

BalanceReport validate_self_balance(const Loading& load, std::optional<double> tol) {
  BalanceReport r;
  double residual = 0.0;
  double scale = 0.0;
  if (load.is_tabulated()) {
    const auto& t = load.table();
    const double up = trapezoid(t.x, t.upper);
    const double lo = trapezoid(t.x, t.lower);
    residual = up - lo;
    std::vector<double> au(t.upper.size()), al(t.lower.size());
    for (std::size_t i = 0; i < au.size(); ++i) {
      au[i] = std::abs(t.upper[i]);
      al[i] = std::abs(t.lower[i]);
    }
    scale = std::max(trapezoid(t.x, au), trapezoid(t.x, al));
  } else {
    for (const auto& term : load.terms()) {
      const double v = term.integral();
      residual += (term.face == Face::upper) ? v : -v;
      scale = std::max(scale, std::abs(v));
    }
  }
  const double tolerance = tol.value_or(load.is_tabulated() ? 1e-6 : 1e-10);
  r.residual = residual;
  r.scale = scale;
  r.balanced = std::abs(residual) <= tolerance * scale;
  return r;
}

Loading symmetric_exponential_loading(double F, double l) {
  return Loading({LoadTerm{Face::upper, -F / l, l, 0}, LoadTerm{Face::lower, -F / l, l, 0}});
}

Loading asymmetric_exponential_loading(double F, double l) {
  return Loading({LoadTerm{Face::upper, -F / l, l, 0}, LoadTerm{Face::lower, F / l, l, 1}});
}

}  // namespace crackline
