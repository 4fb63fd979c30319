// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crackline/errors.hpp"
#include "crackline/grid.hpp"
#include "crackline/mode12.hpp"
#include "crackline/mode3.hpp"
#include "crackline/operators.hpp"
#include "crackline/oracle.hpp"
#include "crackline/scenario.hpp"
#include "crackline/specfun.hpp"

using namespace crackline;

namespace {

constexpr double kKernelTol = 1e-8;
constexpr double kKernelSeconds = 10.0;
constexpr double kExponentFraction = 0.2;
constexpr double kAuxiliaryTol = 1e-6;
constexpr double kFormulationTol = 1e-4;
constexpr double kFormulationSeconds = 60.0;
constexpr double kModeIIIOracleTol = 0.005;
constexpr double kTipTol = 0.01;
constexpr double kReconstructionTol = 1e-12;
constexpr double kVietaTol = 1e-12;
constexpr double kMachineTol = 8 * 2.220446049250313e-16;
constexpr double kTractionChangeTol = 0.02;
constexpr double kModeIIOracleTol = 0.01;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s | %s\n", pass ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<std::string> kFig2 = {"fig2-AA-kappa5", "fig2-AA-kappa20", "fig2-AB-kappa5",
                                        "fig2-AB-kappa20", "fig2-AC-kappa5", "fig2-AC-kappa20"};

struct Mode3Case {
  Scenario scenario;
  BimaterialConstants constants;
  OrthotropicCompliance matI;
  double kappa;
  Loading loading;
};

Mode3Case mode3_case(const Scenario& s) {
  const auto mI = s.material_I.resolve();
  const auto c = bimaterial_constants(mI, s.material_II.resolve());
  return {s, c, mI, *s.interface.kappa_star * s.l * mI.out_of_plane_root(), s.loading.front().loading()};
}

Mode3Problem mode3_problem(const Mode3Case& c, int n) {
  GridOptions o = c.scenario.grid;
  o.n_neg = o.n_pos = n;
  return Mode3Problem::create(c.constants, c.kappa, c.loading, default_mode3_grid(c.constants, c.kappa, c.loading, o));
}

// 1. Closed-form kernels against oscillatory quadrature.
void kernel_closed_forms() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double a : {0.5, 1.0, 5.0}) {
    std::vector<double> xs;
    for (int k = 0; k < 40; ++k) {
      const double x = 1e-3 * std::pow(1e5, k / 39.0) / a;
      xs.push_back(x);
      xs.push_back(-x);
    }
    worst = std::max(worst, kernel_quadrature_check(a, xs).max_deviation);
  }
  const double t = seconds_since(t0);
  report(1, worst <= kKernelTol && t <= kKernelSeconds, "kernel closed forms vs quadrature",
         "max deviation " + fmt("%.2e", worst) + " (tol 1e-8), " + fmt("%.2f", t) + " s (limit 10 s)");
}

// 2. Near- and far-field laws: local exponent of each remainder over a decade of x.
void asymptotics() {
  struct Law {
    std::string name;
    std::function<double(double)> remainder;  // in z = a|x|
    double order;                             // stated power of the remainder
    bool near;
  };
  const std::vector<Law> laws = {
      {"S near", [](double z) { return kernel_S(1.0, z) + kPi / 2; }, 1.0, true},
      {"T near", [](double z) { return kernel_T(1.0, z) - std::log(z); }, 0.0, true},
      {"S far", [](double z) { return kernel_S(1.0, z) + 1.0 / z; }, 3.0, false},
      {"T far", [](double z) { return kernel_T(1.0, z) + 1.0 / (z * z); }, 3.0, false},
  };
  bool pass = true;
  std::string detail;
  for (const Law& law : laws) {
    double worst = law.near ? 1e300 : -1e300;
    double lo = 1e300, hi = -1e300;
    // Five successive decades; each exponent compares z with 10 z.
    for (int k = 0; k < 5; ++k) {
      const double z = law.near ? std::pow(10.0, -4.0 - k) : std::pow(10.0, 1.0 + 0.25 * k);
      const double zf = law.near ? z / 10.0 : z * 10.0;
      const double r = std::abs(law.remainder(z)), rf = std::abs(law.remainder(zf));
      // Near field: remainder ~ z^p, so p = log10(r(z)/r(z/10)). Far field: p = log10(r(z)/r(10z)).
      const double p = std::log10(r / rf);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      worst = law.near ? std::min(worst, p) : std::max(worst, p);
    }
    bool ok;
    if (law.order == 0.0) {
      // O(1) remainder: bounded, so the exponent stays near zero.
      ok = std::max(std::abs(lo), std::abs(hi)) <= kExponentFraction;
    } else {
      // The remainder must decay at least at (1 - 20%) of the stated order.
      ok = lo >= (1.0 - kExponentFraction) * law.order;
    }
    pass = pass && ok;
    detail += law.name + " exponent " + fmt("%.2f", lo) + ".." + fmt("%.2f", hi) + " (stated " +
              fmt("%.0f", law.order) + "); ";
  }
  report(2, pass, "near/far-field kernel laws", detail);
}

// 3. Discrete auxiliary relation on a Gaussian centred at x = -2.
void auxiliary_relation() {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 5.0}) {
    const Grid g = default_grid(a, 1.0);
    Eigen::VectorXd phi(g.crack.size());
    for (std::size_t i = 0; i < g.crack.size(); ++i) phi(i) = std::exp(-(g.crack[i] + 2) * (g.crack[i] + 2));
    const Eigen::VectorXd T = assemble(Kernel::T, Part::singular, a, g).matrix * phi;
    // phi' also carries the drop from phi(0-) to zero at the tip.
    const Eigen::VectorXd Sd = assemble(Kernel::S, Part::singular, a, g, Basis::slope).matrix * phi +
                               jump_correction(Part::singular, a, g, -phi(phi.size() - 1));
    worst = std::max(worst, (-(a / kPi) * T - phi - Sd / kPi).cwiseAbs().maxCoeff());
  }
  report(3, worst <= kAuxiliaryTol, "auxiliary relation on a Gaussian",
         "max-norm " + fmt("%.2e", worst) + " over a in {0.5, 1, 5} (tol 1e-6)");
}

struct Fig2Result {
  std::map<std::string, Eigen::VectorXd> jump_star;  // at kSamplePoints
  std::map<std::string, double> tip;
  std::map<std::string, Mode3Case> cases;
};

const std::vector<double> kSamplePoints = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

// 4. Four formulations on the six Fig. 2 scenarios, default grid.
Fig2Result cross_formulation() {
  Fig2Result out;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& name : kFig2) {
    const Mode3Case c = mode3_case(bundled_scenario(name));
    out.cases.emplace(name, c);
    const Mode3Problem p = mode3_problem(c, c.scenario.grid.n_neg);
    std::vector<Mode3Solution> sols;
    for (Mode3Formulation f : all_mode3_formulations()) sols.push_back(solve_mode3(p.with_formulation(f)));
    for (std::size_t i = 0; i < sols.size(); ++i) {
      for (std::size_t j = i + 1; j < sols.size(); ++j) {
        const double sj = sols[j].jump.cwiseAbs().maxCoeff();
        worst = std::max(worst, (sols[i].jump - sols[j].jump).cwiseAbs().maxCoeff() / sj);
        const double st = sols[j].traction.cwiseAbs().maxCoeff();
        worst = std::max(worst, (sols[i].traction - sols[j].traction).cwiseAbs().maxCoeff() / st);
      }
    }
    const Mode3Solution& ref = sols[2];  // t-only
    out.jump_star[name] = evaluate_jump_at(p, ref.jump, kSamplePoints) / c.matI.out_of_plane_root();
    out.tip[name] = tip_mismatch(ref);
  }
  const double t = seconds_since(t0);
  report(4, worst <= kFormulationTol && t <= kFormulationSeconds, "mode III cross-formulation agreement",
         "max pairwise relative difference " + fmt("%.2e", worst) + " (tol 1e-4), " + fmt("%.1f", t) +
             " s (limit 60 s)");
  return out;
}

// 5. Nystrom vs spectral on the Fig. 2 and Fig. 3 scenarios.
void mode3_oracle() {
  std::vector<std::string> names = kFig2;
  names.push_back("fig3-asymmetric");
  double worst = 0.0;
  std::string detail;
  for (const auto& n : names) {
    const OracleResult r = oracle_check(bundled_scenario(n));
    worst = std::max(worst, r.report.max_relative);
    detail += n + " " + fmt("%.3f%%", 100 * r.report.max_relative) + "; ";
  }
  report(5, worst <= kModeIIIOracleTol, "mode III dual-path oracle on |x1| <= 5l",
         detail + "max " + fmt("%.3f%%", 100 * worst) + " (tol 0.5%)");
}

// 6. Orientation ordering and kappa* monotonicity at the Fig. 2 sample points.
void fig2_ordering(const Fig2Result& r) {
  bool pass = true;
  for (const char* k : {"5", "20"}) {
    const auto& A = r.jump_star.at(std::string("fig2-AA-kappa") + k);
    const auto& B = r.jump_star.at(std::string("fig2-AB-kappa") + k);
    const auto& C = r.jump_star.at(std::string("fig2-AC-kappa") + k);
    for (Eigen::Index i = 0; i < A.size(); ++i) pass = pass && C(i) > B(i) && B(i) > A(i);
  }
  for (const char* m : {"AA", "AB", "AC"}) {
    const auto& j5 = r.jump_star.at(std::string("fig2-") + m + "-kappa5");
    const auto& j20 = r.jump_star.at(std::string("fig2-") + m + "-kappa20");
    for (Eigen::Index i = 0; i < j5.size(); ++i) pass = pass && j20(i) > j5(i);
  }
  const auto& ac5 = r.jump_star.at("fig2-AC-kappa5");
  std::string detail = "A/C kappa*=5 [u*] at x1 = -2,-1,-0.5,0.5,1,2:";
  for (Eigen::Index i = 0; i < ac5.size(); ++i) detail += " " + fmt("%.3f", ac5(i));
  report(6, pass, "Fig. 2 ordering C > B > A and kappa* = 20 > 5", detail);
}

// 7. Tip continuity on the default grid and under refinement.
void tip_consistency(const Fig2Result& r) {
  bool pass = true;
  double worst = 0.0, worst_fine = 0.0;
  for (const auto& name : kFig2) {
    const Mode3Case& c = r.cases.at(name);
    const double coarse = r.tip.at(name);
    const double fine = tip_mismatch(solve_mode3(mode3_problem(c, 2 * c.scenario.grid.n_neg)));
    pass = pass && coarse <= kTipTol && fine < coarse;
    worst = std::max(worst, coarse);
    worst_fine = std::max(worst_fine, fine);
  }
  report(7, pass, "tip consistency |[u](0-) - kappa t(0+)| / |[u](0-)|",
         "default grid max " + fmt("%.2e", worst) + " (tol 1e-2), doubled grid max " + fmt("%.2e", worst_fine));
}

// 8. Mode I/II transform algebra.
void mode12_algebra() {
  const auto bc = bimaterial_constants(material_preset("incompressible-I"), material_preset("incompressible-II"));
  const InPlaneConstants c = in_plane_constants(bc, InterfaceLaw::in_plane(10, 2, 3));
  const PartialFractionSet f = invert_abc(c);
  double recon = 0.0, conj = 0.0, sum = 0.0;
  auto rel = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
  };
  for (int k = 0; k < 20; ++k) {
    const double xi = 1e-3 * std::pow(1e6, k / 19.0);
    for (double x : {xi, -xi}) {
      const TransformMatrices m = abc_at_xi(c, x);
      recon = std::max({recon, rel(reconstruct(f.A, c, x), m.A), rel(reconstruct(f.B, c, x), m.B),
                        rel(reconstruct(f.C, c, x), m.C)});
    }
    const TransformMatrices p = abc_at_xi(c, xi), n = abc_at_xi(c, -xi);
    conj = std::max({conj, rel(n.A, p.A.conjugate()), rel(n.B, p.B.conjugate()), rel(n.C, p.C.conjugate())});
  }
  for (const MatrixFamily* fam : {&f.A, &f.B, &f.C}) {
    const double dx = c.xi2 - c.xi1;
    const double sr = std::max(fam->R1.cwiseAbs().maxCoeff() + fam->R2.cwiseAbs().maxCoeff(), 1e-300);
    const double si = std::max(fam->I1.cwiseAbs().maxCoeff() + fam->I2.cwiseAbs().maxCoeff(), 1e-300);
    sum = std::max(sum, (fam->R1 + fam->R2 - dx * fam->R_dag).cwiseAbs().maxCoeff() / sr);
    sum = std::max(sum, (fam->I1 + fam->I2 - dx * fam->I_dag).cwiseAbs().maxCoeff() / si);
  }
  const double vieta = std::max(std::abs((c.xi1 + c.xi2) * c.d2 / c.d1 - 1.0),
                                std::abs(c.xi1 * c.xi2 * c.d2 / c.d0 - 1.0));
  const bool pass =
      recon <= kReconstructionTol && sum <= kMachineTol && vieta <= kVietaTol && conj <= kMachineTol;
  report(8, pass, "mode I/II partial fractions, sum identity, Vieta, conjugate symmetry",
         "reconstruction " + fmt("%.1e", recon) + ", sum identity " + fmt("%.1e", sum) + ", Vieta " +
             fmt("%.1e", vieta) + ", conjugate symmetry " + fmt("%.1e", conj));
}

// 9. Fig. 6 scenario: dominant opening, bounded tractions, dual-path agreement.
void fig6() {
  const Scenario s = bundled_scenario("fig6-inplane");
  const auto bc = bimaterial_constants(s.material_I.resolve(), s.material_II.resolve());
  const auto law = InterfaceLaw::in_plane(s.interface.k11, s.interface.k12, s.interface.k22);
  const InPlaneLoading load = {Loading(), s.loading.front().loading()};
  auto solve_n = [&](int n) {
    GridOptions o = s.grid;
    o.n_neg = o.n_pos = n;
    return solve_mode12(Mode12Problem::create(bc, law, load, default_mode12_grid(bc, law, load, o)));
  };
  const Mode12Solution a = solve_n(s.grid.n_neg);
  const Mode12Solution b = solve_n(2 * s.grid.n_neg);
  const double u1 = a.jump.col(0).cwiseAbs().maxCoeff(), u2 = a.jump.col(1).cwiseAbs().maxCoeff();
  double change = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double ta = a.traction.col(k).cwiseAbs().maxCoeff(), tb = b.traction.col(k).cwiseAbs().maxCoeff();
    change = std::max(change, std::abs(ta - tb) / tb);
  }
  const OracleResult r = oracle_check(s);
  const bool pass = u2 > u1 && a.traction.allFinite() && change <= kTractionChangeTol &&
                    r.report.max_relative <= kModeIIOracleTol;
  report(9, pass, "Fig. 6 opening dominance, bounded tractions, dual-path oracle",
         "max|[u]2| " + fmt("%.4f", u2) + " > max|[u]1| " + fmt("%.4f", u1) + "; max|t| change under doubling " +
             fmt("%.3f%%", 100 * change) + " (tol 2%); oracle " + fmt("%.3f%%", 100 * r.report.max_relative) +
             " (tol 1%)");
}

// 10. Structured refusals, raised before any solve starts.
void validation() {
  struct Case {
    std::string name;
    ErrorCode expected;
    std::function<void()> run;
  };
  const Scenario fig2 = bundled_scenario("fig2-AC-kappa5");
  const Scenario fig6s = bundled_scenario("fig6-inplane");
  const std::vector<Case> cases = {
      {"unbalanced mode III loading", ErrorCode::unbalanced_loading,
       [&] {
         Scenario s = fig2;
         s.loading[0].terms[0].amplitude *= 2;
         run_scenario(s);
       }},
      {"unbalanced mode I/II loading", ErrorCode::unbalanced_loading,
       [&] {
         Scenario s = fig6s;
         s.loading[0].terms.pop_back();
         run_scenario(s);
       }},
      {"kappa = 0", ErrorCode::invalid_interface,
       [&] {
         Scenario s = fig2;
         s.interface.kappa_star = 0.0;
         run_scenario(s);
       }},
      {"kappa < 0", ErrorCode::invalid_interface,
       [&] {
         Scenario s = fig2;
         s.interface.kappa_star = -5.0;
         oracle_check(s);
       }},
      {"|beta| >= 1", ErrorCode::inadmissible_bimaterial,
       [&] {
         const auto bc = bimaterial_constants(material_preset("incompressible-I"), material_preset("incompressible-II"));
         InPlaneBimaterial ip = bc.in_plane();
         ip.beta = 1.0;
         const BimaterialConstants bad(std::nullopt, ip);
         const auto law = InterfaceLaw::in_plane(10, 2, 3);
         const InPlaneLoading load = asymmetric_opening_loading(1.0, 1.0);
         Mode12Problem::create(bad, law, load, build_grid(100, 100, 20, 20, 3));
       }},
      {"indefinite K", ErrorCode::invalid_interface,
       [&] {
         Scenario s = fig6s;
         s.interface.k12 = 6.0;
         run_scenario(s);
       }},
      {"negative discriminant", ErrorCode::unsupported_regime, [] { denominator_roots(1.0, 1.0, 1.0); }},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    const auto t0 = Clock::now();
    std::string got = "none";
    try {
      c.run();
    } catch (const Error& e) {
      got = error_code_name(e.code());
    }
    const double t = seconds_since(t0);
    // A refusal before any assembly or solve returns in well under a tenth of a second.
    const bool ok = got == error_code_name(c.expected) && t < 0.1;
    pass = pass && ok;
    detail += c.name + " -> " + got + " (" + fmt("%.1f ms", 1e3 * t) + "); ";
  }
  report(10, pass, "validation refusals", detail);
}

}  // namespace

int main() {
  kernel_closed_forms();
  asymptotics();
  auxiliary_relation();
  const Fig2Result fig2 = cross_formulation();
  mode3_oracle();
  fig2_ordering(fig2);
  tip_consistency(fig2);
  mode12_algebra();
  fig6();
  validation();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
