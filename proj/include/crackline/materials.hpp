#pragma once

#include <optional>
#include <string>
#include <vector>

namespace crackline {

struct InPlaneCompliance {
  double s11 = 0.0;
  double s12 = 0.0;
  double s22 = 0.0;
  double s66 = 0.0;
};

struct OutOfPlaneCompliance {
  double s44 = 0.0;
  double s55 = 0.0;
};

// Compliance of one orthotropic half-plane. Either group may be absent: mode III
// presets carry only s44/s55 and the incompressible presets only the in-plane block.
class OrthotropicCompliance {
 public:
  OrthotropicCompliance(std::optional<InPlaneCompliance> in_plane,
                        std::optional<OutOfPlaneCompliance> out_of_plane);

  bool has_in_plane() const { return in_plane_.has_value(); }
  bool has_out_of_plane() const { return out_of_plane_.has_value(); }
  const InPlaneCompliance& in_plane() const;
  const OutOfPlaneCompliance& out_of_plane() const;
  const std::optional<InPlaneCompliance>& in_plane_opt() const { return in_plane_; }
  const std::optional<OutOfPlaneCompliance>& out_of_plane_opt() const { return out_of_plane_; }

  // sqrt(s44 s55), the reference compliance of the mode III normalization.
  double out_of_plane_root() const;
  // sqrt(s11 s22), used as reference compliance for in-plane profiles.
  double in_plane_root() const;

 private:
  std::optional<InPlaneCompliance> in_plane_;
  std::optional<OutOfPlaneCompliance> out_of_plane_;
};

struct IncompressibleOrthotropicParams {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double mu12 = 0.0;
};

OrthotropicCompliance compliance_from_shear_moduli(
    double mu23, double mu13, std::optional<InPlaneCompliance> in_plane = std::nullopt);
OrthotropicCompliance compliance_from_incompressible(const IncompressibleOrthotropicParams& p);

// Named presets: "A", "B", "C" (shear-modulus orientations) and
// "incompressible-I", "incompressible-II".
OrthotropicCompliance material_preset(const std::string& name);
std::vector<std::string> material_preset_names();

// Imperfection law [u] = K t. Only the entries needed by the chosen mode are checked.
struct InterfaceLaw {
  double k11 = 0.0;
  double k12 = 0.0;
  double k22 = 0.0;
  double kappa = 0.0;

  static InterfaceLaw out_of_plane(double kappa);
  static InterfaceLaw in_plane(double k11, double k12, double k22);

  void validate_mode3() const;
  void validate_mode12() const;
};

struct OutOfPlaneConstants {
  double h33 = 0.0;
  double delta3 = 0.0;
  double root_I = 0.0;   // [sqrt(s44 s55)]_I
  double root_II = 0.0;  // [sqrt(s44 s55)]_II
};

// Per-material contributions entering the in-plane bimaterial constants.
struct InPlaneMaterialTerms {
  double lambda = 0.0;
  double rho = 0.0;
  double n = 0.0;
  double h11_part = 0.0;  // 2 n lambda^{1/4} sqrt(s11 s22)
  double h22_part = 0.0;  // 2 n lambda^{-1/4} sqrt(s11 s22)
  double coupling = 0.0;  // s12 + sqrt(s11 s22)
};

struct InPlaneBimaterial {
  double h11 = 0.0;
  double h22 = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  InPlaneMaterialTerms I;
  InPlaneMaterialTerms II;
};

InPlaneMaterialTerms in_plane_material_terms(const InPlaneCompliance& s);

class BimaterialConstants {
 public:
  BimaterialConstants(std::optional<OutOfPlaneConstants> out_of_plane,
                      std::optional<InPlaneBimaterial> in_plane);

  bool has_out_of_plane() const { return out_of_plane_.has_value(); }
  bool has_in_plane() const { return in_plane_.has_value(); }
  const OutOfPlaneConstants& out_of_plane() const;
  const InPlaneBimaterial& in_plane() const;

 private:
  std::optional<OutOfPlaneConstants> out_of_plane_;
  std::optional<InPlaneBimaterial> in_plane_;
};

// Evaluates every group present in both materials. Throws inadmissible_bimaterial
// when |beta| >= 1.
BimaterialConstants bimaterial_constants(const OrthotropicCompliance& matI,
                                         const OrthotropicCompliance& matII);

}  // namespace crackline
