#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "crackline/errors.hpp"
#include "crackline/mode3.hpp"

using namespace crackline;

namespace {

struct Case {
  OrthotropicCompliance matI;
  BimaterialConstants constants;
  double kappa;
};

Case setup(const std::string& I, const std::string& II, double kappa_star, double l = 1.0) {
  const auto mI = material_preset(I);
  const auto c = bimaterial_constants(mI, material_preset(II));
  return {mI, c, kappa_star * l * mI.out_of_plane_root()};
}

GridOptions small_grid(int n = 120) {
  GridOptions o;
  o.n_neg = o.n_pos = n;
  return o;
}

Mode3Problem make(const Case& s, const Loading& load, int n = 120,
                  Mode3Formulation f = Mode3Formulation::t_only) {
  Mode3Problem::Options opt;
  opt.formulation = f;
  return Mode3Problem::create(s.constants, s.kappa, load, default_mode3_grid(s.constants, s.kappa, load, small_grid(n)),
                              opt);
}

double rel_max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::config_error;
}

}  // namespace

TEST(Mode3, FormulationNames) {
  for (Mode3Formulation f : all_mode3_formulations()) EXPECT_EQ(parse_mode3_formulation(to_string(f)), f);
  EXPECT_EQ(to_string(Mode3Formulation::t_only), "t-only");
  EXPECT_THROW(parse_mode3_formulation("fourier"), Error);
}

TEST(Mode3, ZeroLoadingGivesZeroSolution) {
  const Case s = setup("A", "C", 5.0);
  const Mode3Solution sol = solve_mode3(make(s, Loading()));
  EXPECT_EQ(sol.jump.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(sol.traction.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mode3, Linearity) {
  const Case s = setup("A", "B", 5.0);
  const Loading p1 = symmetric_exponential_loading(1.0, 1.0);
  const Loading p2 = asymmetric_exponential_loading(1.0, 1.0);
  std::vector<LoadTerm> both = p1.terms();
  for (const auto& t : p2.terms()) both.push_back(t);
  // Same grid for all three loads (both have length 1).
  const Mode3Solution u1 = solve_mode3(make(s, p1));
  const Mode3Solution u2 = solve_mode3(make(s, p2));
  const Mode3Solution u12 = solve_mode3(make(s, Loading(both)));
  const Mode3Solution u3 = solve_mode3(make(s, p1.scaled(3.0)));
  EXPECT_LE(rel_max_diff(u1.jump + u2.jump, u12.jump), 1e-12);
  EXPECT_LE(rel_max_diff(3.0 * u1.jump, u3.jump), 1e-12);
  EXPECT_LE(rel_max_diff(3.0 * u1.traction, u3.traction), 1e-12);
}

TEST(Mode3, SymmetricLoadIsIndependentOfDelta3) {
  const Loading load = symmetric_exponential_loading(1.0, 1.0);
  const Grid grid = build_grid(200, 200, 100, 100, 3);
  auto solve_with = [&](double delta3) {
    OutOfPlaneConstants c{2.5, delta3, 1.0, 1.5};
    return solve_mode3(Mode3Problem::create(BimaterialConstants(c, std::nullopt), 6.0, load, grid));
  };
  const Mode3Solution a = solve_with(0.0);
  const Mode3Solution b = solve_with(-0.3);
  for (Eigen::Index i = 0; i < a.jump.size(); ++i) EXPECT_EQ(a.jump(i), b.jump(i));
  for (Eigen::Index i = 0; i < a.traction.size(); ++i) EXPECT_EQ(a.traction(i), b.traction(i));
}

TEST(Mode3, AsymmetricLoadDependsOnDelta3) {
  const Loading load = asymmetric_exponential_loading(1.0, 1.0);
  const Grid grid = build_grid(200, 200, 100, 100, 3);
  auto solve_with = [&](double delta3) {
    OutOfPlaneConstants c{2.5, delta3, 1.0, 1.5};
    return solve_mode3(Mode3Problem::create(BimaterialConstants(c, std::nullopt), 6.0, load, grid));
  };
  EXPECT_GT(rel_max_diff(solve_with(0.0).jump, solve_with(-0.3).jump), 1e-3);
}

TEST(Mode3, FormulationsAgree) {
  for (const char* II : {"A", "C"}) {
    for (const Loading& load : {symmetric_exponential_loading(1.0, 1.0), asymmetric_exponential_loading(1.0, 1.0)}) {
      const Case s = setup("A", II, 5.0);
      const Mode3Problem base = make(s, load);
      std::map<Mode3Formulation, Mode3Solution> sols;
      for (Mode3Formulation f : all_mode3_formulations()) sols.emplace(f, solve_mode3(base.with_formulation(f)));
      for (const auto& [f, sol] : sols) {
        EXPECT_LE(rel_max_diff(sol.jump, sols.at(Mode3Formulation::t_only).jump), 1e-4) << to_string(f);
        EXPECT_LE(rel_max_diff(sol.traction, sols.at(Mode3Formulation::t_only).traction), 1e-4) << to_string(f);
      }
    }
  }
}

TEST(Mode3, SolutionSatisfiesOtherFormulations) {
  const Case s = setup("A", "B", 20.0);
  const Mode3Problem p = make(s, asymmetric_exponential_loading(1.0, 1.0));
  const Mode3Solution sol = solve_mode3(p);
  EXPECT_LE(sol.diagnostics.residual, 1e-12);
  for (Mode3Formulation f : all_mode3_formulations()) {
    EXPECT_LE(formulation_residual(p, sol.jump, f), 1e-7) << to_string(f);
  }
}

TEST(Mode3, JumpGrowsWithKappa) {
  const Loading load = symmetric_exponential_loading(1.0, 1.0);
  for (const char* II : {"A", "B", "C"}) {
    const Case s5 = setup("A", II, 5.0), s20 = setup("A", II, 20.0);
    const Mode3Solution u5 = solve_mode3(make(s5, load));
    const Mode3Solution u20 = solve_mode3(make(s20, load));
    const std::vector<double> xs = {-4.0, -2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0, 4.0};
    const Eigen::VectorXd j5 = evaluate_jump_at(make(s5, load), u5.jump, xs);
    const Eigen::VectorXd j20 = evaluate_jump_at(make(s20, load), u20.jump, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_GT(j20(i), j5(i)) << II << " x = " << xs[i];
  }
}

TEST(Mode3, OrientationOrdering) {
  const Loading load = symmetric_exponential_loading(1.0, 1.0);
  const std::vector<double> xs = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  for (double ks : {5.0, 20.0}) {
    std::map<std::string, Eigen::VectorXd> j;
    for (const char* II : {"A", "B", "C"}) {
      const Case s = setup("A", II, ks);
      const Mode3Problem p = make(s, load);
      j[II] = evaluate_jump_at(p, solve_mode3(p).jump, xs);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      EXPECT_GT(j["C"](i), j["B"](i));
      EXPECT_GT(j["B"](i), j["A"](i));
    }
  }
}

TEST(Mode3, TipConsistencyImprovesUnderRefinement) {
  const Case s = setup("A", "C", 5.0);
  const Loading load = symmetric_exponential_loading(1.0, 1.0);
  const double coarse = tip_mismatch(solve_mode3(make(s, load, 100)));
  const double fine = tip_mismatch(solve_mode3(make(s, load, 200)));
  EXPECT_LE(coarse, 0.01);
  EXPECT_LT(fine, coarse);
}

TEST(Mode3, PointEvaluationInterpolatesNodes) {
  const Case s = setup("A", "B", 5.0);
  const Mode3Problem p = make(s, asymmetric_exponential_loading(1.0, 1.0));
  const Mode3Solution sol = solve_mode3(p);
  const auto& g = sol.grid;
  const std::vector<double> xs = {g.crack[10], g.crack[60], g.interface[5], g.interface[40]};
  const Eigen::VectorXd j = evaluate_jump_at(p, sol.jump, xs);
  EXPECT_NEAR(j(0), sol.jump(10), 1e-10);
  EXPECT_NEAR(j(1), sol.jump(60), 1e-10);
  EXPECT_NEAR(j(2), sol.kappa * sol.traction(5), 1e-10);
  const Eigen::VectorXd t = evaluate_traction_at(p, sol.jump, {g.interface[40]});
  EXPECT_NEAR(t(0), sol.traction(40), 1e-10);
  EXPECT_NEAR(j(3), sol.kappa * t(0), 1e-10);
}

TEST(Mode3, TractionDecaysAlongInterface) {
  const Case s = setup("A", "C", 5.0);
  const Mode3Solution sol = solve_mode3(make(s, symmetric_exponential_loading(1.0, 1.0)));
  const auto& x = sol.grid.interface;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 5.0) continue;
    const double t = std::abs(sol.traction(i));
    EXPECT_LE(t, prev) << "x = " << x[i];
    prev = t;
  }
  EXPECT_LT(prev, 1e-3 * sol.traction.cwiseAbs().maxCoeff());
}

TEST(Mode3, NormalizationDefinitions) {
  const Case s = setup("A", "C", 5.0, 2.0);
  EXPECT_NEAR(s.kappa / (2.0 * std::sqrt(1.5)), 5.0, 1e-14);
  const Mode3Problem p = make(s, symmetric_exponential_loading(1.0, 2.0));
  const Mode3Solution sol = solve_mode3(p);
  const SolutionProfile n1 = normalize(sol.profile, 1.0, 2.0, s.matI, s.kappa);
  EXPECT_NEAR(*n1.normalization->kappa_star, 5.0, 1e-14);
  // Doubling F doubles the raw solution but leaves the normalized one unchanged.
  const Mode3Problem p2 = make(s, symmetric_exponential_loading(2.0, 2.0));
  const SolutionProfile n2 = normalize(solve_mode3(p2).profile, 2.0, 2.0, s.matI, s.kappa);
  EXPECT_LE((n1.jump_star - n2.jump_star).cwiseAbs().maxCoeff(), 1e-12);
  // [u*] = kappa* t* on the interface rows.
  for (std::size_t i = 0; i < n1.size(); ++i) {
    if (n1.region[i] != Region::interface) continue;
    EXPECT_NEAR(n1.jump_star(i, 0), 5.0 * n1.traction_star(i, 0), 1e-12);
  }
}

TEST(Mode3, FixedPointMatchesDirectSolve) {
  const Case s = setup("A", "B", 5.0);
  const Mode3Problem p = make(s, symmetric_exponential_loading(1.0, 1.0));
  SolverOptions fp;
  fp.fixed_point = true;
  fp.relaxation = 1.0;
  fp.max_iterations = 5000;
  fp.tolerance = 1e-12;
  const Mode3Solution iter = solve_mode3(p, fp);
  EXPECT_EQ(iter.diagnostics.method, "fixed-point");
  EXPECT_LE(rel_max_diff(iter.jump, solve_mode3(p).jump), 1e-9);
}

TEST(Mode3, FixedPointReportsNonConvergence) {
  const Case s = setup("A", "B", 5.0);
  const Mode3Problem p = make(s, symmetric_exponential_loading(1.0, 1.0));
  SolverOptions fp;
  fp.fixed_point = true;
  fp.max_iterations = 20;
  EXPECT_EQ(code_of([&] { solve_mode3(p, fp); }), ErrorCode::non_convergence);
}

TEST(Mode3, ValidationRefusesBadInput) {
  const Case s = setup("A", "C", 5.0);
  const Loading good = symmetric_exponential_loading(1.0, 1.0);
  const Grid grid = build_grid(100, 100, 20, 20, 3);
  EXPECT_EQ(code_of([&] { Mode3Problem::create(s.constants, 0.0, good, grid); }), ErrorCode::invalid_interface);
  EXPECT_EQ(code_of([&] { Mode3Problem::create(s.constants, -1.0, good, grid); }), ErrorCode::invalid_interface);
  const Loading unbalanced({LoadTerm{Face::upper, -1.0, 1.0, 0}});
  EXPECT_EQ(code_of([&] { Mode3Problem::create(s.constants, s.kappa, unbalanced, grid); }),
            ErrorCode::unbalanced_loading);
  EXPECT_EQ(code_of([&] { Mode3Problem::create(s.constants, s.kappa, good, build_grid(1, 1, 4, 4, 3)); }),
            ErrorCode::invalid_grid);
  const auto inplane_only =
      bimaterial_constants(material_preset("incompressible-I"), material_preset("incompressible-II"));
  EXPECT_EQ(code_of([&] { Mode3Problem::create(inplane_only, s.kappa, good, grid); }), ErrorCode::invalid_material);
}
