#include <gtest/gtest.h>

#include <cmath>

#include "crackline/oracle.hpp"
#include "crackline/specfun.hpp"

using namespace crackline;

namespace {

Mode3Problem mode3_problem(const std::string& II, double kappa_star, const Loading& load, int n) {
  const auto mI = material_preset("A");
  const auto c = bimaterial_constants(mI, material_preset(II));
  const double kappa = kappa_star * mI.out_of_plane_root();
  GridOptions o;
  o.n_neg = o.n_pos = n;
  return Mode3Problem::create(c, kappa, load, default_mode3_grid(c, kappa, load, o));
}

}  // namespace

TEST(OracleKernels, QuadratureMatchesClosedForms) {
  std::vector<double> xs;
  for (int k = 0; k < 12; ++k) {
    const double x = 1e-3 * std::pow(1e5, k / 11.0);
    xs.push_back(x);
    xs.push_back(-x);
  }
  const KernelCheck c = kernel_quadrature_check(1.0, xs);
  EXPECT_LE(c.max_deviation, 1e-8);
  EXPECT_GT(c.panels, 0);
}

TEST(OracleKernels, QuadratureAloneHitsReferenceValues) {
  EXPECT_NEAR(kernel_T_quadrature(1.0, 10.0), -0.0094885390163548074071, 1e-10);
  EXPECT_NEAR(kernel_S_quadrature(2.0, 3.0), -0.1593055535762633577, 1e-10);
  EXPECT_NEAR(kernel_S_quadrature(2.0, -3.0), 0.1593055535762633577, 1e-10);
}

TEST(OracleConfig, Defaults) {
  const SpectralConfig c = default_spectral_config(400.0, 400.0, 1.0, 0.5);
  EXPECT_EQ(c.n_xi & (c.n_xi - 1), 0);
  EXPECT_GE(c.n_xi * c.dx, 1.5 * 800.0 - 1e-9);
  EXPECT_NEAR(c.L_neg / c.dx, std::round(c.L_neg / c.dx), 1e-9);
  EXPECT_NEAR(c.xi_max * c.dx, kPi, 1e-12);
  EXPECT_LE(c.dx, 1.0 / 32 + 1e-12);
}

TEST(OracleSpectral, ZeroLoadingIsZero) {
  const Mode3Problem p = mode3_problem("B", 5.0, Loading(), 40);
  const SpectralSolution s = spectral_solve_mode3(p);
  EXPECT_EQ(s.jump.cwiseAbs().maxCoeff(), 0.0);
  const ComparisonReport r = compare_mode3(p, solve_mode3(p), s, 5.0);
  EXPECT_EQ(r.max_relative, 0.0);
}

TEST(OracleSpectral, ModeIIIAgreesWithNystrom) {
  const Mode3Problem p = mode3_problem("B", 20.0, asymmetric_exponential_loading(1.0, 1.0), 200);
  const SpectralSolution s = spectral_solve_mode3(p);
  EXPECT_LE(s.residual, 1e-10);
  const ComparisonReport r = compare_mode3(p, solve_mode3(p), s, 5.0);
  EXPECT_LE(r.max_relative, 0.005);
  EXPECT_GT(r.crack.samples, 10);
  EXPECT_GT(r.interface.samples, 10);
  EXPECT_LE(r.crack.mean_relative, r.crack.max_relative);
  const SolutionProfile prof = s.profile();
  EXPECT_EQ(prof.size(), s.x.size());
}
