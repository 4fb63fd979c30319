#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <gsl/gsl_integration.h>

#include "crackline/errors.hpp"
#include "crackline/grid.hpp"
#include "crackline/operators.hpp"
#include "crackline/specfun.hpp"

using namespace crackline;

namespace {

double gaussian(double t) { return std::exp(-(t + 2) * (t + 2)); }
double gaussian_prime(double t) { return -2 * (t + 2) * gaussian(t); }

// int_{lo}^{hi} f(t) dt with a breakpoint where the integrand is singular or jumps.
double integrate_with_break(const std::function<double(double)>& f, double lo, double hi, double brk) {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
  gsl_function g;
  g.function = [](double t, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(t); };
  g.params = const_cast<std::function<double(double)>*>(&f);
  std::vector<double> pts = {lo};
  if (brk > lo && brk < hi) pts.push_back(brk);
  pts.push_back(hi);
  double result = 0.0, err = 0.0;
  gsl_integration_qagp(&g, pts.data(), pts.size(), 1e-13, 1e-11, 2000, w, &result, &err);
  gsl_integration_workspace_free(w);
  return result;
}

// Reference (K_a * gaussian)(x) over the Gaussian's numerical support [-10, 6] intersected with t <= 0.
double reference(Kernel k, double a, double x) {
  auto f = [&](double t) {
    const double d = x - t;
    if (d == 0.0) return 0.0;
    return (k == Kernel::S ? kernel_S(a, d) : kernel_T(a, d)) * gaussian(t);
  };
  return integrate_with_break(f, -10.0, 0.0, x);
}

// Reference (K_a * phi)(x) for the piecewise-linear interpolant phi of `values` on `nodes`,
// integrated element by element.
double reference_interpolant(Kernel k, double a, double x, const std::vector<double>& nodes,
                             const Eigen::VectorXd& values) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const double t0 = nodes[j], t1 = nodes[j + 1];
    const double v0 = values(j), v1 = values(j + 1);
    if (v0 == 0.0 && v1 == 0.0) continue;
    auto f = [&](double t) {
      const double d = x - t;
      if (d == 0.0) return 0.0;
      const double phi = v0 + (v1 - v0) * (t - t0) / (t1 - t0);
      return (k == Kernel::S ? kernel_S(a, d) : kernel_T(a, d)) * phi;
    };
    sum += integrate_with_break(f, t0, t1, x);
  }
  return sum;
}

Eigen::VectorXd sample(const std::vector<double>& xs, double (*f)(double)) {
  Eigen::VectorXd v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v(i) = f(xs[i]);
  return v;
}

}  // namespace

TEST(Grid, UniformAndQuadraticExamples) {
  const Grid g1 = build_grid(1, 1, 2, 2, 1);
  EXPECT_EQ(g1.nodes(), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
  const Grid g2 = build_grid(1, 1, 2, 2, 2);
  EXPECT_EQ(g2.nodes(), (std::vector<double>{-1, -0.25, 0, 0.25, 1}));
}

TEST(Grid, GradedSpacing) {
  const Grid g = build_grid(5, 5, 200, 200, 3);
  EXPECT_EQ(g.nodes().size(), 401u);
  EXPECT_NEAR(g.min_spacing(), 5.0 / (200.0 * 200.0 * 200.0), 1e-20);
  for (std::size_t i = 2; i < g.interface.size(); ++i) {
    EXPECT_GT(g.interface[i] - g.interface[i - 1], g.interface[i - 1] - g.interface[i - 2]);
  }
}

TEST(Grid, RefinementNests) {
  const Grid g = build_grid(10, 20, 16, 24, 3);
  const Grid r = g.refined(2);
  ASSERT_EQ(r.n_neg, 32);
  for (int i = 0; i <= g.n_neg; ++i) EXPECT_NEAR(r.crack[2 * i], g.crack[i], 1e-13);
  for (int i = 0; i <= g.n_pos; ++i) EXPECT_NEAR(r.interface[2 * i], g.interface[i], 1e-13);
}

TEST(Grid, Validation) {
  EXPECT_THROW(build_grid(-1, 1, 10, 10, 3), Error);
  EXPECT_THROW(build_grid(1, 1, 10, 10, 0.5), Error);
  EXPECT_THROW(build_grid(1, 1, 4, 10, 3).validate_for_solve(), Error);
  EXPECT_NO_THROW(build_grid(1, 1, 8, 8, 3).validate_for_solve());
  EXPECT_DOUBLE_EQ(default_truncation(0.5, 1.0), 400.0);
  EXPECT_DOUBLE_EQ(default_truncation(100.0, 1.0), 10.0);
}

TEST(Operators, ZeroInZeroOut) {
  const Grid g = build_grid(10, 10, 20, 20, 3);
  const DiscreteOperator T = assemble(Kernel::T, Part::singular, 1.0, g);
  EXPECT_EQ((T.matrix * Eigen::VectorXd::Zero(g.crack.size())).norm(), 0.0);
  EXPECT_EQ(T.tag(), "T_singular");
  EXPECT_EQ(assemble(Kernel::S, Part::compact, 1.0, g).tag(), "S_compact");
  EXPECT_EQ(T.matrix.rows(), static_cast<Eigen::Index>(g.crack.size()));
  EXPECT_TRUE(T.matrix.allFinite());
}

TEST(Operators, MatchAdaptiveQuadratureOnInterpolant) {
  const double a = 1.0;
  const Grid g = build_grid(12, 12, 400, 400, 3);
  Eigen::VectorXd phi = sample(g.crack, gaussian);
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (phi(i) < 1e-30) phi(i) = 0.0;
  }
  for (Part part : {Part::singular, Part::compact}) {
    const auto& xs = targets_of(part, g);
    const Eigen::VectorXd T = assemble(Kernel::T, part, a, g).matrix * phi;
    const Eigen::VectorXd S = assemble(Kernel::S, part, a, g).matrix * phi;
    for (std::size_t i = 0; i < xs.size(); i += 37) {
      EXPECT_NEAR(T(i), reference_interpolant(Kernel::T, a, xs[i], g.crack, phi), 1e-8) << "x = " << xs[i];
      EXPECT_NEAR(S(i), reference_interpolant(Kernel::S, a, xs[i], g.crack, phi), 1e-8) << "x = " << xs[i];
    }
  }
}

TEST(Operators, ConvergeUnderRefinement) {
  const double a = 0.8;
  std::vector<double> errors;
  const std::vector<double> probes = {-3.1, -2.05, -1.2, -0.4};
  for (int n : {50, 100, 200}) {
    const Grid g = build_grid(12, 12, n, n, 3);
    const Eigen::VectorXd phi = sample(g.crack, gaussian);
    const ConvolutionMatrices m = convolution_matrices(a, probes, g.crack);
    const Eigen::VectorXd T = m.T_hat * phi;
    double err = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      err = std::max(err, std::abs(T(i) - reference(Kernel::T, a, probes[i])));
    }
    errors.push_back(err);
  }
  EXPECT_GE(errors[0] / errors[1], 3.0);
  EXPECT_GE(errors[1] / errors[2], 3.0);
}

TEST(Operators, AuxiliaryRelationOnGaussian) {
  for (double a : {0.5, 1.0, 5.0}) {
    const Grid g = default_grid(a, 1.0);
    const Eigen::VectorXd phi = sample(g.crack, gaussian);
    const Eigen::VectorXd T = assemble(Kernel::T, Part::singular, a, g).matrix * phi;
    // phi' also carries the drop from phi(0-) to zero at the tip.
    const Eigen::VectorXd Sd = assemble(Kernel::S, Part::singular, a, g, Basis::slope).matrix * phi +
                               jump_correction(Part::singular, a, g, -phi(phi.size() - 1));
    const Eigen::VectorXd residual = -(a / kPi) * T - phi - Sd / kPi;
    EXPECT_LE(residual.cwiseAbs().maxCoeff(), 1e-6) << "a = " << a;
  }
}

TEST(Operators, SlopeBasisMatchesAnalyticDerivative) {
  const double a = 1.0;
  const Grid g = build_grid(12, 12, 400, 400, 3);
  const Eigen::VectorXd phi = sample(g.crack, gaussian);
  const Eigen::VectorXd Sd = assemble(Kernel::S, Part::singular, a, g, Basis::slope).matrix * phi;
  for (std::size_t i = 0; i < g.crack.size(); i += 53) {
    const double x = g.crack[i];
    auto f = [&](double t) { return t == x ? 0.0 : kernel_S(a, x - t) * gaussian_prime(t); };
    EXPECT_NEAR(Sd(i), integrate_with_break(f, -10.0, 0.0, x), 2e-4);
  }
}

TEST(Operators, ScaleCovariance) {
  const double a = 2.5;
  const Grid g = build_grid(4, 3, 20, 20, 2);
  const Grid gs = build_grid(a * 4, a * 3, 20, 20, 2);
  for (Kernel k : {Kernel::S, Kernel::T}) {
    const Eigen::MatrixXd m = assemble(k, Part::compact, a, g).matrix;
    const Eigen::MatrixXd ms = assemble(k, Part::compact, 1.0, gs).matrix / a;
    EXPECT_LE((m - ms).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Operators, JumpCorrectionLimits) {
  const Grid g = build_grid(10, 10, 20, 20, 3);
  const Eigen::VectorXd c = jump_correction(Part::compact, 1.0, g, 2.0);
  EXPECT_NEAR(c(0), -kPi, 1e-15);
  const Eigen::VectorXd s = jump_correction(Part::singular, 1.0, g, 2.0);
  EXPECT_NEAR(s(s.size() - 1), kPi, 1e-15);
  EXPECT_EQ(jump_correction(Part::compact, 1.0, g, 0.0).norm(), 0.0);
  // S odd: the correction at x and -x are opposite.
  for (int i = 1; i <= 20; ++i) EXPECT_NEAR(c(i), -s(s.size() - 1 - i), 1e-14);
}

TEST(Operators, CompactFarFieldDecay) {
  const double a = 1.0;
  const Grid g = build_grid(12, 400, 200, 200, 3);
  const Eigen::VectorXd phi = sample(g.crack, gaussian);
  const Eigen::VectorXd T = assemble(Kernel::T, Part::compact, a, g).matrix * phi;
  const double mass = std::sqrt(kPi) * 0.5 * (1 + std::erf(2.0));
  for (std::size_t i = 0; i < g.interface.size(); ++i) {
    const double x = g.interface[i];
    if (x < 100.0) continue;
    // T_a(x - t) ~ -1/(a (x + 2))^2 over the Gaussian's support.
    EXPECT_NEAR(T(i) * (x + 2) * (x + 2), -mass, 0.02 * mass) << "x = " << x;
  }
}
