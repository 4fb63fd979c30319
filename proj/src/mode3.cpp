#include "crackline/mode3.hpp"

#include <cmath>
#include <sstream>

#include "crackline/errors.hpp"
#include "crackline/operators.hpp"
#include "crackline/specfun.hpp"

namespace crackline {
namespace detail {

struct Mode3System {
  Eigen::MatrixXd T_crack;   // T * u at crack targets
  Eigen::MatrixXd T_iface;   // T * u at interface targets
  Eigen::MatrixXd Sd_crack;  // S * u' (with end jumps) at crack targets
  Eigen::MatrixXd Sd_iface;
  Eigen::VectorXd load;      // <p> + (delta3/2)[p] at crack nodes
  SampledConvolution load_crack;
  SampledConvolution load_iface;
  std::vector<double> load_sources;
  Eigen::VectorXd load_values;
};

}  // namespace detail

namespace {

using detail::Mode3System;

Eigen::VectorXd sample_effective_load(const Loading& load, double delta3, const std::vector<double>& xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = load.average(xs[i]) + 0.5 * delta3 * load.jump(xs[i]);
  }
  return v;
}

Eigen::MatrixXd derivative_matrix(const ConvolutionMatrices& c, double a, const std::vector<double>& targets,
                                  Part part, double L_neg) {
  Eigen::MatrixXd m = c.S_slope;
  const Eigen::Index last = m.cols() - 1;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    m(r, last) -= kernel_S_sided(a, targets[i], part);
    const double d = targets[i] + L_neg;
    m(r, 0) += d == 0.0 ? kernel_S_limit(true) : kernel_S(a, d);
  }
  return m;
}

std::shared_ptr<const Mode3System> build_system(double a, double delta3, const Loading& load, const Grid& grid,
                                                int refinement) {
  auto sys = std::make_shared<Mode3System>();
  const ConvolutionMatrices cc = convolution_matrices(a, grid.crack, grid.crack);
  const ConvolutionMatrices ci = convolution_matrices(a, grid.interface, grid.crack);
  sys->T_crack = cc.T_hat;
  sys->T_iface = ci.T_hat;
  sys->Sd_crack = derivative_matrix(cc, a, grid.crack, Part::singular, grid.L_neg);
  sys->Sd_iface = derivative_matrix(ci, a, grid.interface, Part::compact, grid.L_neg);
  sys->load = sample_effective_load(load, delta3, grid.crack);
  sys->load_sources = grid.refined(refinement).crack;
  sys->load_values = sample_effective_load(load, delta3, sys->load_sources);
  sys->load_crack = convolve_sampled(a, grid.crack, Part::singular, sys->load_sources, sys->load_values);
  sys->load_iface = convolve_sampled(a, grid.interface, Part::compact, sys->load_sources, sys->load_values);
  return sys;
}

bool uses_T_on_jump(Mode3Formulation f) {
  return f == Mode3Formulation::t_only || f == Mode3Formulation::mixed;
}
bool uses_T_on_load(Mode3Formulation f) {
  return f == Mode3Formulation::t_only || f == Mode3Formulation::coupled;
}

struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

LinearSystem crack_equations(const Mode3Problem& p, Mode3Formulation f) {
  const Mode3System& s = p.system();
  const double k = p.kappa();
  const double h = p.scale();
  const Eigen::Index n = s.T_crack.rows();
  LinearSystem ls;
  if (uses_T_on_jump(f)) {
    ls.A = -(h / (kPi * k)) * s.T_crack - Eigen::MatrixXd::Identity(n, n) / k;
  } else {
    ls.A = s.Sd_crack / (kPi * k);
  }
  if (uses_T_on_load(f)) {
    ls.b = -(h / kPi) * s.load_crack.T;
  } else {
    ls.b = s.load_crack.S_derivative / kPi + s.load;
  }
  return ls;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

SolutionProfile make_profile(const Mode3Problem& p, const Eigen::VectorXd& jump, const Eigen::VectorXd& traction) {
  const Grid& g = p.grid();
  SolutionProfile prof;
  const std::size_t nc = g.crack.size();
  const std::size_t ni = g.interface.size();
  prof.jump.resize(static_cast<Eigen::Index>(nc + ni), 1);
  prof.traction.resize(static_cast<Eigen::Index>(nc + ni), 1);
  for (std::size_t i = 0; i < nc; ++i) {
    prof.x1.push_back(g.crack[i]);
    prof.region.push_back(Region::crack);
    prof.jump(static_cast<Eigen::Index>(i), 0) = jump(static_cast<Eigen::Index>(i));
    prof.traction(static_cast<Eigen::Index>(i), 0) = p.loading().average(g.crack[i]);
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const auto r = static_cast<Eigen::Index>(nc + i);
    prof.x1.push_back(g.interface[i]);
    prof.region.push_back(Region::interface);
    prof.jump(r, 0) = p.kappa() * traction(static_cast<Eigen::Index>(i));
    prof.traction(r, 0) = traction(static_cast<Eigen::Index>(i));
  }
  return prof;
}

}  // namespace

std::string to_string(Mode3Formulation f) {
  switch (f) {
    case Mode3Formulation::coupled: return "coupled";
    case Mode3Formulation::mixed: return "mixed";
    case Mode3Formulation::t_only: return "t-only";
    case Mode3Formulation::s_only: return "s-only";
  }
  return "t-only";
}

Mode3Formulation parse_mode3_formulation(const std::string& name) {
  for (auto f : all_mode3_formulations())
    if (to_string(f) == name) return f;
  fail(ErrorCode::config_error, "unknown mode III formulation '" + name + "' (coupled, mixed, t-only, s-only)");
}

std::vector<Mode3Formulation> all_mode3_formulations() {
  return {Mode3Formulation::coupled, Mode3Formulation::mixed, Mode3Formulation::t_only, Mode3Formulation::s_only};
}

Mode3Problem Mode3Problem::create(const BimaterialConstants& constants, double kappa, const Loading& loading,
                                  const Grid& grid) {
  return create(constants, kappa, loading, grid, Options{});
}

Mode3Problem Mode3Problem::create(const BimaterialConstants& constants, double kappa, const Loading& loading,
                                  const Grid& grid, const Options& options) {
  InterfaceLaw::out_of_plane(kappa).validate_mode3();
  const OutOfPlaneConstants& c = constants.out_of_plane();
  const BalanceReport balance = validate_self_balance(loading);
  if (!balance.balanced) {
    std::ostringstream os;
    os << "crack-face loading is not self-balanced: int (p+ - p-) dx = " << balance.residual;
    fail(ErrorCode::unbalanced_loading, os.str());
  }
  const double kappa_star = kappa / (loading.max_length() * c.root_I);
  if (kappa_star < 1e-3) {
    std::ostringstream os;
    os << "kappa* = " << kappa_star
       << " < 1e-3 is outside the imperfect-interface range; use perfect-interface crack solutions";
    fail(ErrorCode::unsupported_regime, os.str());
  }
  grid.validate_for_solve();
  if (options.load_refinement < 1) fail(ErrorCode::config_error, "load refinement must be >= 1");

  Mode3Problem p;
  p.h33_ = c.h33;
  p.delta3_ = c.delta3;
  p.kappa_ = kappa;
  p.loading_ = loading;
  p.grid_ = grid;
  p.formulation_ = options.formulation;
  p.system_ = build_system(p.scale(), p.delta3_, loading, grid, options.load_refinement);
  return p;
}

Mode3Problem Mode3Problem::with_formulation(Mode3Formulation f) const {
  Mode3Problem p = *this;
  p.formulation_ = f;
  return p;
}

Grid default_mode3_grid(const BimaterialConstants& constants, double kappa, const Loading& loading,
                        const GridOptions& options) {
  InterfaceLaw::out_of_plane(kappa).validate_mode3();
  return default_grid(constants.out_of_plane().h33 / kappa, loading.max_length(), options);
}

Eigen::VectorXd evaluate_traction(const Mode3Problem& p, const Eigen::VectorXd& jump) {
  const Mode3System& s = p.system();
  const double k = p.kappa();
  const double h = p.scale();
  const Mode3Formulation f = p.formulation();
  Eigen::VectorXd t = uses_T_on_jump(f) ? Eigen::VectorXd(-(h / (kPi * k)) * (s.T_iface * jump))
                                        : Eigen::VectorXd((s.Sd_iface * jump) / (kPi * k));
  // On x > 0 the loading vanishes, so the S-form carries no standalone load term.
  if (uses_T_on_load(f)) {
    t += (h / kPi) * s.load_iface.T;
  } else {
    t -= s.load_iface.S_derivative / kPi;
  }
  return t;
}

double formulation_residual(const Mode3Problem& p, const Eigen::VectorXd& jump, Mode3Formulation f) {
  const LinearSystem ls = crack_equations(p, f);
  const double scale = max_abs(ls.b);
  const double r = max_abs(ls.A * jump - ls.b);
  return scale > 0.0 ? r / scale : r;
}

Mode3Solution solve_mode3(const Mode3Problem& p, const SolverOptions& options) {
  const Mode3Formulation f = p.formulation();
  const LinearSystem ls = crack_equations(p, f);
  Mode3Solution sol;
  sol.grid = p.grid();
  sol.formulation = f;
  sol.kappa = p.kappa();

  if (options.fixed_point) {
    if (!uses_T_on_jump(f)) {
      fail(ErrorCode::config_error, "fixed-point iteration needs a formulation with T acting on the jump");
    }
    // u <- -kappa b - (H/pi) T u, relaxed.
    const double k = p.kappa();
    const double h = p.scale();
    const Eigen::VectorXd c = -k * ls.b;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(ls.b.size());
    bool converged = false;
    int it = 0;
    for (it = 1; it <= options.max_iterations; ++it) {
      const Eigen::VectorXd target = c - (h / kPi) * (p.system().T_crack * u);
      const Eigen::VectorXd next = (1.0 - options.relaxation) * u + options.relaxation * target;
      const double update = max_abs(next - u);
      const double size = max_abs(next);
      u = next;
      if (update <= options.tolerance * std::max(size, 1e-300) || size == 0.0) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "fixed-point iteration did not reach relative update " << options.tolerance << " in "
         << options.max_iterations << " iterations";
      fail(ErrorCode::non_convergence, os.str());
    }
    sol.jump = u;
    sol.diagnostics.method = "fixed-point";
    sol.diagnostics.iterations = it;
  } else {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(ls.A);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
      std::ostringstream os;
      os << "discrete system is numerically singular (rcond = " << rcond << ")";
      fail(ErrorCode::singular_system, os.str());
    }
    sol.jump = lu.solve(ls.b);
    sol.diagnostics.method = "dense-lu";
    sol.diagnostics.rcond = rcond;
  }
  const double bn = max_abs(ls.b);
  const double rn = max_abs(ls.A * sol.jump - ls.b);
  sol.diagnostics.residual = bn > 0.0 ? rn / bn : rn;
  sol.traction = evaluate_traction(p, sol.jump);
  sol.profile = make_profile(p, sol.jump, sol.traction);
  return sol;
}

Eigen::VectorXd evaluate_traction_at(const Mode3Problem& p, const Eigen::VectorXd& jump,
                                     const std::vector<double>& xs) {
  const Mode3System& s = p.system();
  const double a = p.scale();
  const ConvolutionMatrices c = convolution_matrices(a, xs, p.grid().crack);
  const SampledConvolution lc = convolve_sampled(a, xs, Part::compact, s.load_sources, s.load_values);
  return -(a / (kPi * p.kappa())) * (c.T_hat * jump) + (a / kPi) * lc.T;
}

Eigen::VectorXd evaluate_jump_at(const Mode3Problem& p, const Eigen::VectorXd& jump, const std::vector<double>& xs) {
  const Mode3System& s = p.system();
  const double a = p.scale();
  const ConvolutionMatrices c = convolution_matrices(a, xs, p.grid().crack);
  const SampledConvolution lc = convolve_sampled(a, xs, Part::singular, s.load_sources, s.load_values);
  const Eigen::VectorXd tu = c.T_hat * jump;
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (xs[i] <= 0.0) {
      // u = (H33/pi) T*P - (H/pi) T*u for x <= 0.
      out(r) = (p.h33() / kPi) * lc.T(r) - (a / kPi) * tu(r);
    } else {
      // u = kappa t = -(H/pi) T*u + (H33/pi) T*P for x > 0.
      out(r) = -(a / kPi) * tu(r) + (p.h33() / kPi) * lc.T(r);
    }
  }
  return out;
}

double tip_mismatch(const Mode3Solution& sol) {
  const auto& xi = sol.grid.interface;
  const double u0 = sol.jump(sol.jump.size() - 1);
  const double t1 = sol.traction(1);
  const double t2 = sol.traction(2);
  const double t0 = t1 - (t2 - t1) * xi[1] / (xi[2] - xi[1]);
  const double denom = std::abs(u0);
  const double diff = std::abs(u0 - sol.kappa * t0);
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace crackline
