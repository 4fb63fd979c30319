#include "crackline/mode12.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "crackline/errors.hpp"
#include "crackline/operators.hpp"
#include "crackline/specfun.hpp"

namespace crackline {
namespace detail {

struct Mode12System {
  Eigen::MatrixXd crack_derivative;  // 2N x 2N
  Eigen::MatrixXd crack_free;
  Eigen::MatrixXd iface_derivative;  // 2M x 2N
  Eigen::MatrixXd iface_free;
  Eigen::VectorXd rhs_crack;  // C * <p> + A * [p] at crack nodes
  Eigen::VectorXd rhs_iface;
  std::vector<double> load_sources;
  std::array<Eigen::VectorXd, 2> average;
  std::array<Eigen::VectorXd, 2> jump;
};

}  // namespace detail

namespace {

using detail::Mode12System;
using std::complex;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void add_kron(Eigen::MatrixXd& big, const Eigen::Matrix2d& coef, const Eigen::MatrixXd& op, double scale) {
  const Eigen::Index nt = op.rows();
  const Eigen::Index ns = op.cols();
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < 2; ++k)
      if (coef(c, k) != 0.0) big.block(c * nt, k * ns, nt, ns) += (scale * coef(c, k)) * op;
}

void finish_family(MatrixFamily& f, const InPlaneConstants& c) {
  f.R1 = f.R - f.R_dag * c.xi1;
  f.R2 = -f.R + f.R_dag * c.xi2;
  f.I1 = f.I - f.I_dag * c.xi1;
  f.I2 = -f.I + f.I_dag * c.xi2;
}

// Columns act on nodal values; rows give K * u'_total including the tip and end jumps.
Eigen::MatrixXd with_jumps(Eigen::MatrixXd m, const std::vector<double>& targets, double L_neg,
                           const std::function<double(double)>& at_tip, const std::function<double(double)>& at_end) {
  const Eigen::Index last = m.cols() - 1;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    m(r, last) -= at_tip(targets[i]);
    m(r, 0) += at_end(targets[i] + L_neg);
  }
  return m;
}

Eigen::MatrixXd operator_rows(const InPlaneConstants& c, const PartialFractionSet& pf, const Grid& grid,
                              const std::vector<double>& targets, Part part, Mode12Form form) {
  const ConvolutionMatrices m1 = convolution_matrices(c.xi1, targets, grid.crack);
  const ConvolutionMatrices m2 = convolution_matrices(c.xi2, targets, grid.crack);
  const Eigen::Index nt = static_cast<Eigen::Index>(targets.size());
  const Eigen::Index ns = static_cast<Eigen::Index>(grid.crack.size());
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * nt, 2 * ns);
  const double w = 1.0 / (kPi * c.d2 * (c.xi2 - c.xi1));
  const MatrixFamily& B = pf.B;
  if (form == Mode12Form::derivative) {
    // B_R2 = -B_R1, so the T terms combine into the finite difference T_xi1 - T_xi2.
    auto tdiff = [&](double x) { return kernel_T_difference(c.xi1, c.xi2, x); };
    auto s_tip = [&](double a) {
      return [a, part](double x) { return kernel_S_sided(a, x, part); };
    };
    auto s_end = [](double a) {
      return [a](double d) { return d == 0.0 ? kernel_S_limit(true) : kernel_S(a, d); };
    };
    const Eigen::MatrixXd Td = with_jumps(m1.T_slope - m2.T_slope, targets, grid.L_neg, tdiff, tdiff);
    const Eigen::MatrixXd Sd1 = with_jumps(m1.S_slope, targets, grid.L_neg, s_tip(c.xi1), s_end(c.xi1));
    const Eigen::MatrixXd Sd2 = with_jumps(m2.S_slope, targets, grid.L_neg, s_tip(c.xi2), s_end(c.xi2));
    add_kron(big, B.R1, Td, -w);
    add_kron(big, B.I1, Sd1, -w);
    add_kron(big, B.I2, Sd2, -w);
  } else {
    add_kron(big, B.I1, m1.T_hat, w * c.xi1);
    add_kron(big, B.I2, m2.T_hat, w * c.xi2);
    add_kron(big, B.R1, c.xi1 * m1.S_hat - c.xi2 * m2.S_hat, -w);
    if (part == Part::singular) {
      add_kron(big, B.I_dag / c.d2, Eigen::MatrixXd::Identity(nt, ns), 1.0);
    }
  }
  return big;
}

Eigen::VectorXd loading_rhs(const InPlaneConstants& c, const PartialFractionSet& pf, const Mode12System& s,
                            const std::vector<double>& targets, Part part) {
  const Eigen::Index nt = static_cast<Eigen::Index>(targets.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * nt);
  const double w = -1.0 / (kPi * c.d2 * (c.xi2 - c.xi1));
  for (int j = 0; j < 2; ++j) {
    const double a = j == 0 ? c.xi1 : c.xi2;
    const Eigen::Matrix2d& CR = j == 0 ? pf.C.R1 : pf.C.R2;
    const Eigen::Matrix2d& CI = j == 0 ? pf.C.I1 : pf.C.I2;
    const Eigen::Matrix2d& AR = j == 0 ? pf.A.R1 : pf.A.R2;
    const Eigen::Matrix2d& AI = j == 0 ? pf.A.I1 : pf.A.I2;
    for (int k = 0; k < 2; ++k) {
      if (s.average[k].cwiseAbs().maxCoeff() > 0.0) {
        const SampledConvolution v = convolve_sampled(a, targets, part, s.load_sources, s.average[k]);
        for (int ci = 0; ci < 2; ++ci)
          r.segment(ci * nt, nt) += (w * pf.C.scale) * (CR(ci, k) * v.T + CI(ci, k) * v.S);
      }
      if (s.jump[k].cwiseAbs().maxCoeff() > 0.0) {
        const SampledConvolution v = convolve_sampled(a, targets, part, s.load_sources, s.jump[k]);
        for (int ci = 0; ci < 2; ++ci)
          r.segment(ci * nt, nt) += (w * pf.A.scale) * (AR(ci, k) * v.T + AI(ci, k) * v.S);
      }
    }
  }
  return r;
}

Eigen::VectorXd stack(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  v << m.col(0), m.col(1);
  return v;
}

Eigen::MatrixXd unstack(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size() / 2;
  Eigen::MatrixXd m(n, 2);
  m.col(0) = v.head(n);
  m.col(1) = v.tail(n);
  return m;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

DenominatorRoots denominator_roots(double d0, double d1, double d2) {
  if (!(d0 > 0.0) || !(d1 > 0.0) || !(d2 > 0.0)) {
    std::ostringstream os;
    os << "denominator coefficients must be positive (d0 = " << d0 << ", d1 = " << d1 << ", d2 = " << d2 << ")";
    fail(ErrorCode::unsupported_regime, os.str());
  }
  const double disc = d1 * d1 - 4.0 * d2 * d0;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "denominator has complex roots (discriminant d1^2 - 4 d0 d2 = " << disc << " < 0)";
    fail(ErrorCode::unsupported_regime, os.str());
  }
  const double q = d1 + std::sqrt(disc);
  DenominatorRoots r;
  r.xi1 = 2.0 * d0 / q;
  r.xi2 = q / (2.0 * d2);
  if ((r.xi2 - r.xi1) < 1e-6 * r.xi2) {
    std::ostringstream os;
    os << "denominator roots are (nearly) double: xi1 = " << r.xi1 << ", xi2 = " << r.xi2;
    fail(ErrorCode::degenerate_roots, os.str());
  }
  return r;
}

double InPlaneConstants::root_h() const { return std::sqrt(h11 * h22); }

Eigen::Matrix2d InPlaneConstants::K() const {
  Eigen::Matrix2d k;
  k << k11, k12, k12, k22;
  return k;
}

InPlaneConstants in_plane_constants(const BimaterialConstants& constants, const InterfaceLaw& law) {
  law.validate_mode12();
  const InPlaneBimaterial& b = constants.in_plane();
  if (!(std::abs(b.beta) < 1.0)) {
    std::ostringstream os;
    os << "|beta| = " << std::abs(b.beta) << " >= 1: inadmissible bimaterial for the in-plane problem";
    fail(ErrorCode::inadmissible_bimaterial, os.str());
  }
  InPlaneConstants c;
  c.h11 = b.h11;
  c.h22 = b.h22;
  c.beta = b.beta;
  c.gamma = b.gamma;
  c.delta1 = b.delta1;
  c.delta2 = b.delta2;
  c.k11 = law.k11;
  c.k12 = law.k12;
  c.k22 = law.k22;
  c.d0 = c.h11 * c.h22 * (1.0 - c.beta * c.beta);
  c.d1 = c.k11 * c.h22 + c.k22 * c.h11;
  c.d2 = c.k11 * c.k22 - c.k12 * c.k12;
  const DenominatorRoots r = denominator_roots(c.d0, c.d1, c.d2);
  c.xi1 = r.xi1;
  c.xi2 = r.xi2;
  const double vieta_prod = c.xi1 * c.xi2 * c.d2 / c.d0 - 1.0;
  const double vieta_sum = (c.xi1 + c.xi2) * c.d2 / c.d1 - 1.0;
  if (std::abs(vieta_prod) > 1e-12 || std::abs(vieta_sum) > 1e-12) {
    fail(ErrorCode::domain_error, "denominator roots fail the Vieta identities");
  }
  return c;
}

TransformMatrices abc_at_xi(const InPlaneConstants& c, double xi) {
  const complex<double> i(0.0, 1.0);
  const double s = sgn(xi);
  const double a = std::abs(xi);
  const double r = c.root_h();
  const double H11 = c.h11, H22 = c.h22, b = c.beta, g = c.gamma, d1 = c.delta1, d2 = c.delta2;
  const double K11 = c.k11, K12 = c.k12, K22 = c.k22;
  const double D = c.d0 + c.d1 * a + c.d2 * a * a;
  TransformMatrices m;
  m.A(0, 0) = H11 * H22 * (d1 + b * g) + a * (d1 * H11 * K22 - i * g * K12 * r * s);
  m.A(0, 1) = -i * s * H22 * r * (g + b * d2) - a * (i * g * K22 * r * s + d2 * H22 * K12);
  m.A(1, 0) = i * s * H11 * r * (d1 * b + g) - a * (d1 * H11 * K12 - i * g * K11 * r * s);
  m.A(1, 1) = H11 * H22 * (b * g + d2) + a * (d2 * H22 * K11 + i * g * K12 * r * s);
  m.A /= 2.0 * D;
  m.B(0, 0) = -i * (xi * K22 + H22 * s);
  m.B(0, 1) = i * xi * K12 - b * r;
  m.B(1, 0) = i * xi * K12 + b * r;
  m.B(1, 1) = -i * (xi * K11 + H11 * s);
  m.B /= D;
  m.C(0, 0) = H11 * H22 * (1.0 - b * b) + a * (H11 * K22 + i * b * K12 * r * s);
  m.C(0, 1) = -a * (H22 * K12 - i * b * s * K22 * r);
  m.C(1, 0) = -a * (H11 * K12 + i * b * s * K11 * r);
  m.C(1, 1) = H11 * H22 * (1.0 - b * b) + a * (H22 * K11 - i * b * K12 * r * s);
  m.C /= D;
  return m;
}

PartialFractionSet invert_abc(const InPlaneConstants& c) {
  const double r = c.root_h();
  const double H11 = c.h11, H22 = c.h22, b = c.beta, g = c.gamma, d1 = c.delta1, d2 = c.delta2;
  const double K11 = c.k11, K12 = c.k12, K22 = c.k22;
  PartialFractionSet pf;

  pf.A.name = "A";
  pf.A.scale = 0.5;
  pf.A.R << H11 * H22 * (d1 + b * g), 0.0, 0.0, H11 * H22 * (d2 + b * g);
  pf.A.R_dag << d1 * H11 * K22, -d2 * H22 * K12, -d1 * H11 * K12, d2 * H22 * K11;
  pf.A.I << 0.0, -H22 * (d2 * b + g), H11 * (d1 * b + g), 0.0;
  pf.A.I *= r;
  pf.A.I_dag << -K12, -K22, K11, K12;
  pf.A.I_dag *= g * r;

  pf.B.name = "B";
  pf.B.R << 0.0, -1.0, 1.0, 0.0;
  pf.B.R *= b * r;
  pf.B.I << -H22, 0.0, 0.0, -H11;
  pf.B.I_dag << -K22, K12, K12, -K11;

  pf.C.name = "C";
  pf.C.R << H11 * H22 * (1.0 - b * b), 0.0, 0.0, H11 * H22 * (1.0 - b * b);
  pf.C.R_dag << H11 * K22, -H22 * K12, -H11 * K12, H22 * K11;
  pf.C.I_dag << K12, K22, -K11, -K12;
  pf.C.I_dag *= b * r;

  finish_family(pf.A, c);
  finish_family(pf.B, c);
  finish_family(pf.C, c);
  return pf;
}

Eigen::Matrix2cd reconstruct(const MatrixFamily& f, const InPlaneConstants& c, double xi) {
  const double a = std::abs(xi);
  const complex<double> i(0.0, 1.0);
  const double w = f.scale / (c.d2 * (c.xi2 - c.xi1));
  Eigen::Matrix2cd m = (w / (a + c.xi1)) * (f.R1.cast<complex<double>>() + i * f.I1.cast<complex<double>>()) +
                       (w / (a + c.xi2)) * (f.R2.cast<complex<double>>() + i * f.I2.cast<complex<double>>());
  return xi < 0.0 ? Eigen::Matrix2cd(m.conjugate()) : m;
}

Eigen::Matrix2d inverse_transform(const MatrixFamily& f, const InPlaneConstants& c, double x) {
  const double w = -f.scale / (kPi * c.d2 * (c.xi2 - c.xi1));
  return w * (f.R1 * kernel_T(c.xi1, x) + f.R2 * kernel_T(c.xi2, x) + f.I1 * kernel_S(c.xi1, x) +
              f.I2 * kernel_S(c.xi2, x));
}

InPlaneLoading asymmetric_opening_loading(double F, double l) {
  return {Loading{}, asymmetric_exponential_loading(F, l)};
}

std::string to_string(Mode12Form f) { return f == Mode12Form::derivative ? "derivative" : "derivative-free"; }

Mode12Form parse_mode12_form(const std::string& name) {
  if (name == "derivative") return Mode12Form::derivative;
  if (name == "derivative-free") return Mode12Form::derivative_free;
  fail(ErrorCode::config_error, "unknown in-plane form '" + name + "' (derivative, derivative-free)");
}

Mode12Problem Mode12Problem::create(const BimaterialConstants& constants, const InterfaceLaw& law,
                                    const InPlaneLoading& loading, const Grid& grid) {
  return create(constants, law, loading, grid, Options{});
}

Mode12Problem Mode12Problem::create(const BimaterialConstants& constants, const InterfaceLaw& law,
                                    const InPlaneLoading& loading, const Grid& grid, const Options& options) {
  const InPlaneConstants c = in_plane_constants(constants, law);
  double l_max = 0.0;
  for (int k = 0; k < 2; ++k) {
    const BalanceReport balance = validate_self_balance(loading[k]);
    if (!balance.balanced) {
      std::ostringstream os;
      os << "crack-face loading component " << k + 1
         << " is not self-balanced: int (p+ - p-) dx = " << balance.residual;
      fail(ErrorCode::unbalanced_loading, os.str());
    }
    if (!loading[k].is_zero()) l_max = std::max(l_max, loading[k].max_length());
  }
  if (l_max == 0.0) l_max = 1.0;
  if (c.xi2 * l_max > 2e3) {
    std::ostringstream os;
    os << "xi2 l = " << c.xi2 * l_max
       << " > 2e3 is outside the imperfect-interface range; use perfect-interface crack solutions";
    fail(ErrorCode::unsupported_regime, os.str());
  }
  grid.validate_for_solve();
  if (options.load_refinement < 1) fail(ErrorCode::config_error, "load refinement must be >= 1");

  Mode12Problem p;
  p.constants_ = c;
  p.fractions_ = invert_abc(c);
  p.loading_ = loading;
  p.grid_ = grid;

  auto sys = std::make_shared<Mode12System>();
  sys->crack_derivative = operator_rows(c, p.fractions_, grid, grid.crack, Part::singular, Mode12Form::derivative);
  sys->crack_free = operator_rows(c, p.fractions_, grid, grid.crack, Part::singular, Mode12Form::derivative_free);
  sys->iface_derivative =
      operator_rows(c, p.fractions_, grid, grid.interface, Part::compact, Mode12Form::derivative);
  sys->iface_free = operator_rows(c, p.fractions_, grid, grid.interface, Part::compact, Mode12Form::derivative_free);
  sys->load_sources = grid.refined(options.load_refinement).crack;
  for (int k = 0; k < 2; ++k) {
    sys->average[k].resize(static_cast<Eigen::Index>(sys->load_sources.size()));
    sys->jump[k].resize(static_cast<Eigen::Index>(sys->load_sources.size()));
    for (std::size_t i = 0; i < sys->load_sources.size(); ++i) {
      sys->average[k](static_cast<Eigen::Index>(i)) = loading[k].average(sys->load_sources[i]);
      sys->jump[k](static_cast<Eigen::Index>(i)) = loading[k].jump(sys->load_sources[i]);
    }
  }
  sys->rhs_crack = loading_rhs(c, p.fractions_, *sys, grid.crack, Part::singular);
  sys->rhs_iface = loading_rhs(c, p.fractions_, *sys, grid.interface, Part::compact);
  p.system_ = sys;
  return p;
}

Grid default_mode12_grid(const BimaterialConstants& constants, const InterfaceLaw& law, const InPlaneLoading& loading,
                         const GridOptions& options) {
  const InPlaneConstants c = in_plane_constants(constants, law);
  double l_max = 0.0;
  for (const auto& l : loading)
    if (!l.is_zero()) l_max = std::max(l_max, l.max_length());
  return default_grid(c.xi1, l_max > 0.0 ? l_max : 1.0, options);
}

Mode12Solution solve_mode12(const Mode12Problem& p, Mode12Form form) {
  const Mode12System& s = p.system();
  const Eigen::MatrixXd& A = form == Mode12Form::derivative ? s.crack_derivative : s.crack_free;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "discrete in-plane system is numerically singular (rcond = " << rcond << ")";
    fail(ErrorCode::singular_system, os.str());
  }
  const Eigen::VectorXd z = lu.solve(s.rhs_crack);
  Mode12Solution sol;
  sol.grid = p.grid();
  sol.form = form;
  sol.jump = unstack(z);
  const Eigen::MatrixXd& Ai = form == Mode12Form::derivative ? s.iface_derivative : s.iface_free;
  sol.traction = unstack(Ai * z - s.rhs_iface);
  sol.diagnostics.method = "dense-lu";
  sol.diagnostics.rcond = rcond;
  const double bn = max_abs(s.rhs_crack);
  const double rn = max_abs(A * z - s.rhs_crack);
  sol.diagnostics.residual = bn > 0.0 ? rn / bn : rn;

  const Grid& g = p.grid();
  const std::size_t nc = g.crack.size();
  const std::size_t ni = g.interface.size();
  SolutionProfile& prof = sol.profile;
  prof.jump.resize(static_cast<Eigen::Index>(nc + ni), 2);
  prof.traction.resize(static_cast<Eigen::Index>(nc + ni), 2);
  const Eigen::Matrix2d K = p.constants().K();
  for (std::size_t i = 0; i < nc; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    prof.x1.push_back(g.crack[i]);
    prof.region.push_back(Region::crack);
    prof.jump.row(r) = sol.jump.row(r);
    for (int k = 0; k < 2; ++k) prof.traction(r, k) = p.loading()[k].average(g.crack[i]);
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const auto r = static_cast<Eigen::Index>(nc + i);
    const Eigen::Vector2d t = sol.traction.row(static_cast<Eigen::Index>(i)).transpose();
    prof.x1.push_back(g.interface[i]);
    prof.region.push_back(Region::interface);
    prof.jump.row(r) = (K * t).transpose();
    prof.traction.row(r) = t.transpose();
  }
  return sol;
}

double mode12_residual(const Mode12Problem& p, const Eigen::MatrixXd& jump, Mode12Form form) {
  const Mode12System& s = p.system();
  const Eigen::MatrixXd& A = form == Mode12Form::derivative ? s.crack_derivative : s.crack_free;
  const double bn = max_abs(s.rhs_crack);
  const double rn = max_abs(A * stack(jump) - s.rhs_crack);
  return bn > 0.0 ? rn / bn : rn;
}

namespace {

// Non-local part of B * u'_total minus the loading terms; equals -K^{-1} u + (this) = 0 on x < 0
// and the traction on x > 0.
Eigen::MatrixXd nonlocal_minus_load(const Mode12Problem& p, const Eigen::MatrixXd& jump,
                                    const std::vector<double>& xs) {
  const Eigen::MatrixXd rows =
      operator_rows(p.constants(), p.fractions(), p.grid(), xs, Part::compact, Mode12Form::derivative_free);
  const Eigen::VectorXd r = loading_rhs(p.constants(), p.fractions(), p.system(), xs, Part::compact);
  return unstack(rows * stack(jump) - r);
}

}  // namespace

Eigen::MatrixXd evaluate_jump_at(const Mode12Problem& p, const Eigen::MatrixXd& jump, const std::vector<double>& xs) {
  const Eigen::MatrixXd g = nonlocal_minus_load(p, jump, xs);
  return g * p.constants().K().transpose();
}

Eigen::MatrixXd evaluate_traction_at(const Mode12Problem& p, const Eigen::MatrixXd& jump,
                                     const std::vector<double>& xs) {
  for (double x : xs)
    if (x < 0.0) fail(ErrorCode::domain_error, "interfacial traction is defined for x >= 0");
  return nonlocal_minus_load(p, jump, xs);
}

}  // namespace crackline
