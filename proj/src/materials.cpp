#include "crackline/materials.hpp"

#include <cmath>
#include <sstream>

#include "crackline/errors.hpp"

namespace crackline {
namespace {

void require_positive(double v, const char* name, ErrorCode code) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    fail(code, os.str());
  }
}

void validate(const InPlaneCompliance& s) {
  require_positive(s.s11, "s11", ErrorCode::invalid_material);
  require_positive(s.s22, "s22", ErrorCode::invalid_material);
  require_positive(s.s66, "s66", ErrorCode::invalid_material);
  if (!std::isfinite(s.s12) || s.s11 * s.s22 - s.s12 * s.s12 <= 0.0) {
    fail(ErrorCode::invalid_material, "in-plane compliance not positive definite: s11*s22 - s12^2 <= 0");
  }
}

void validate(const OutOfPlaneCompliance& s) {
  require_positive(s.s44, "s44", ErrorCode::invalid_material);
  require_positive(s.s55, "s55", ErrorCode::invalid_material);
}

}  // namespace

OrthotropicCompliance::OrthotropicCompliance(std::optional<InPlaneCompliance> in_plane,
                                             std::optional<OutOfPlaneCompliance> out_of_plane)
    : in_plane_(in_plane), out_of_plane_(out_of_plane) {
  if (!in_plane_ && !out_of_plane_) {
    fail(ErrorCode::invalid_material, "material has neither in-plane nor out-of-plane compliances");
  }
  if (in_plane_) validate(*in_plane_);
  if (out_of_plane_) validate(*out_of_plane_);
}

const InPlaneCompliance& OrthotropicCompliance::in_plane() const {
  if (!in_plane_) fail(ErrorCode::invalid_material, "in-plane compliances requested from an out-of-plane-only material");
  return *in_plane_;
}

const OutOfPlaneCompliance& OrthotropicCompliance::out_of_plane() const {
  if (!out_of_plane_) fail(ErrorCode::invalid_material, "out-of-plane compliances requested from an in-plane-only material");
  return *out_of_plane_;
}

double OrthotropicCompliance::out_of_plane_root() const {
  const auto& s = out_of_plane();
  return std::sqrt(s.s44 * s.s55);
}

double OrthotropicCompliance::in_plane_root() const {
  const auto& s = in_plane();
  return std::sqrt(s.s11 * s.s22);
}

OrthotropicCompliance compliance_from_shear_moduli(double mu23, double mu13,
                                                   std::optional<InPlaneCompliance> in_plane) {
  require_positive(mu23, "mu23", ErrorCode::invalid_material);
  require_positive(mu13, "mu13", ErrorCode::invalid_material);
  return OrthotropicCompliance(in_plane, OutOfPlaneCompliance{1.0 / mu23, 1.0 / mu13});
}

OrthotropicCompliance compliance_from_incompressible(const IncompressibleOrthotropicParams& p) {
  require_positive(p.e1, "e1", ErrorCode::invalid_material);
  require_positive(p.e2, "e2", ErrorCode::invalid_material);
  require_positive(p.e3, "e3", ErrorCode::invalid_material);
  require_positive(p.mu12, "mu12", ErrorCode::invalid_material);
  InPlaneCompliance s;
  s.s11 = 1.0 / p.e1;
  s.s22 = 1.0 / p.e2;
  s.s66 = 1.0 / p.mu12;
  s.s12 = 0.5 * (1.0 / p.e3 - 1.0 / p.e1 - 1.0 / p.e2);
  return OrthotropicCompliance(s, std::nullopt);
}

OrthotropicCompliance material_preset(const std::string& name) {
  if (name == "A") return compliance_from_shear_moduli(1.0, 2.0 / 3.0);
  if (name == "B") return compliance_from_shear_moduli(1.0, 0.5);
  if (name == "C") return compliance_from_shear_moduli(0.5, 2.0 / 3.0);
  if (name == "incompressible-I") return compliance_from_incompressible({20.0, 10.0, 10.0, 5.0});
  if (name == "incompressible-II") return compliance_from_incompressible({20.0, 10.0, 15.0, 5.0});
  fail(ErrorCode::config_error, "unknown material preset '" + name + "'");
}

std::vector<std::string> material_preset_names() {
  return {"A", "B", "C", "incompressible-I", "incompressible-II"};
}

InterfaceLaw InterfaceLaw::out_of_plane(double kappa) {
  InterfaceLaw law;
  law.kappa = kappa;
  return law;
}

InterfaceLaw InterfaceLaw::in_plane(double k11, double k12, double k22) {
  InterfaceLaw law;
  law.k11 = k11;
  law.k12 = k12;
  law.k22 = k22;
  return law;
}

void InterfaceLaw::validate_mode3() const {
  require_positive(kappa, "kappa", ErrorCode::invalid_interface);
}

void InterfaceLaw::validate_mode12() const {
  require_positive(k11, "k11", ErrorCode::invalid_interface);
  require_positive(k22, "k22", ErrorCode::invalid_interface);
  if (!std::isfinite(k12) || k11 * k22 - k12 * k12 <= 0.0) {
    std::ostringstream os;
    os << "interface matrix K is not positive definite: k11*k22 - k12^2 = " << k11 * k22 - k12 * k12;
    fail(ErrorCode::invalid_interface, os.str());
  }
}

InPlaneMaterialTerms in_plane_material_terms(const InPlaneCompliance& s) {
  InPlaneMaterialTerms t;
  const double root = std::sqrt(s.s11 * s.s22);
  t.lambda = s.s11 / s.s22;
  t.rho = (2.0 * s.s12 + s.s66) / (2.0 * root);
  t.n = std::sqrt((1.0 + t.rho) / 2.0);
  const double l4 = std::pow(t.lambda, 0.25);
  t.h11_part = 2.0 * t.n * l4 * root;
  t.h22_part = 2.0 * t.n / l4 * root;
  t.coupling = s.s12 + root;
  return t;
}

BimaterialConstants::BimaterialConstants(std::optional<OutOfPlaneConstants> out_of_plane,
                                         std::optional<InPlaneBimaterial> in_plane)
    : out_of_plane_(out_of_plane), in_plane_(in_plane) {}

const OutOfPlaneConstants& BimaterialConstants::out_of_plane() const {
  if (!out_of_plane_) fail(ErrorCode::invalid_material, "out-of-plane constants unavailable: a material lacks s44/s55");
  return *out_of_plane_;
}

const InPlaneBimaterial& BimaterialConstants::in_plane() const {
  if (!in_plane_) fail(ErrorCode::invalid_material, "in-plane constants unavailable: a material lacks in-plane compliances");
  return *in_plane_;
}

BimaterialConstants bimaterial_constants(const OrthotropicCompliance& matI,
                                         const OrthotropicCompliance& matII) {
  std::optional<OutOfPlaneConstants> oop;
  if (matI.has_out_of_plane() && matII.has_out_of_plane()) {
    OutOfPlaneConstants c;
    c.root_I = matI.out_of_plane_root();
    c.root_II = matII.out_of_plane_root();
    c.h33 = c.root_I + c.root_II;
    c.delta3 = (c.root_I - c.root_II) / c.h33;
    oop = c;
  }

  std::optional<InPlaneBimaterial> ip;
  if (matI.has_in_plane() && matII.has_in_plane()) {
    InPlaneBimaterial c;
    c.I = in_plane_material_terms(matI.in_plane());
    c.II = in_plane_material_terms(matII.in_plane());
    c.h11 = c.I.h11_part + c.II.h11_part;
    c.h22 = c.I.h22_part + c.II.h22_part;
    const double root = std::sqrt(c.h11 * c.h22);
    c.beta = (c.II.coupling - c.I.coupling) / root;
    c.gamma = (c.I.coupling + c.II.coupling) / root;
    c.delta1 = (c.I.h11_part - c.II.h11_part) / c.h11;
    c.delta2 = (c.I.h22_part - c.II.h22_part) / c.h22;
    if (!(std::abs(c.beta) < 1.0)) {
      std::ostringstream os;
      os << "|beta| = " << std::abs(c.beta) << " >= 1: bimaterial pair is inadmissible (d0 <= 0)";
      fail(ErrorCode::inadmissible_bimaterial, os.str());
    }
    ip = c;
  }

  if (!oop && !ip) {
    fail(ErrorCode::invalid_material, "materials share no compliance group; cannot form bimaterial constants");
  }
  return BimaterialConstants(oop, ip);
}

}  // namespace crackline
