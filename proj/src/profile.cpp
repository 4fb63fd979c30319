#include "crackline/profile.hpp"

#include <cmath>

#include "crackline/errors.hpp"

namespace crackline {

const char* region_name(Region r) { return r == Region::crack ? "crack" : "interface"; }

SolutionProfile normalize(const SolutionProfile& raw, double F, double l,
                          const OrthotropicCompliance& matI, std::optional<double> kappa) {
  if (!(F > 0.0) || !(l > 0.0)) fail(ErrorCode::config_error, "normalization needs F > 0 and l > 0");
  SolutionProfile p = raw;
  Normalization n;
  n.F = F;
  n.l = l;
  n.reference_compliance = raw.components() == 1 ? matI.out_of_plane_root() : matI.in_plane_root();
  if (kappa) n.kappa_star = *kappa / (l * n.reference_compliance);
  p.jump_star = raw.jump / (F * n.reference_compliance);
  p.traction_star = raw.traction * (l / F);
  p.normalization = n;
  return p;
}

double sample_profile(const SolutionProfile& p, Region region, int component, double x, bool normalized) {
  const Eigen::MatrixXd& m = normalized ? p.jump_star : p.jump;
  std::size_t lo = p.size();
  std::size_t hi = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.region[i] != region) continue;
    lo = std::min(lo, i);
    hi = std::max(hi, i);
  }
  if (lo > hi || x < p.x1[lo] || x > p.x1[hi]) fail(ErrorCode::domain_error, "sample point outside profile region");
  for (std::size_t i = lo; i < hi; ++i) {
    if (x >= p.x1[i] && x <= p.x1[i + 1]) {
      const double w = (x - p.x1[i]) / (p.x1[i + 1] - p.x1[i]);
      const auto r0 = static_cast<Eigen::Index>(i);
      return (1.0 - w) * m(r0, component) + w * m(r0 + 1, component);
    }
  }
  return m(static_cast<Eigen::Index>(hi), component);
}

}  // namespace crackline
