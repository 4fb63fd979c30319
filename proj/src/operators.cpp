#include "crackline/operators.hpp"

#include <array>
#include <cmath>

#include "crackline/errors.hpp"
#include "crackline/specfun.hpp"

namespace crackline {
namespace {

// Gauss-Legendre rules on [-1, 1], positive half (symmetric).
constexpr std::array<double, 2> kG4x = {0.3399810435848562648026658, 0.8611363115940525752239465};
constexpr std::array<double, 2> kG4w = {0.6521451548625461426269361, 0.3478548451374538573730639};
constexpr std::array<double, 4> kG8x = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                        0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kG8w = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                        0.2223810344533744705443560, 0.1012285362903762591525314};

template <std::size_t N>
ElementMoments gauss_moments(double a, double x, double t0, double h, const std::array<double, N>& gx,
                             const std::array<double, N>& gw) {
  ElementMoments m;
  const double c = t0 + 0.5 * h;
  for (std::size_t k = 0; k < N; ++k) {
    for (int side = -1; side <= 1; side += 2) {
      const double u = side * gx[k];
      const double t = c + 0.5 * h * u;
      const double w = 0.5 * h * gw[k];
      const KernelValues kv = kernels(a, x - t);
      const double frac = 0.5 * (1.0 + u);
      m.S0 += w * kv.S;
      m.T0 += w * kv.T;
      m.S1 += w * kv.S * frac;
      m.T1 += w * kv.T * frac;
    }
  }
  return m;
}

}  // namespace

std::string DiscreteOperator::tag() const {
  std::string s = kernel == Kernel::S ? "S" : "T";
  s += part == Part::singular ? "_singular" : "_compact";
  if (basis == Basis::slope) s += "_slope";
  return s;
}

ElementMoments element_moments(double a, double x, double t0, double t1) {
  const double h = t1 - t0;
  const double dist = x < t0 ? t0 - x : (x > t1 ? x - t1 : 0.0);
  if (dist >= 8.0 * h) return gauss_moments(a, x, t0, h, kG4x, kG4w);
  if (dist >= 2.0 * h) return gauss_moments(a, x, t0, h, kG8x, kG8w);
  // Closed form through the antiderivatives: with s = x - t,
  //   int_e K = I1(s0) - I1(s1),  int_e K (t - t0)/h = (I2(s0) - I2(s1) - h I1(s1))/h.
  const double s0 = x - t0;
  const double s1 = x - t1;
  const KernelPrimitives p0 = kernel_primitives(a, s0);
  const KernelPrimitives p1 = kernel_primitives(a, s1);
  ElementMoments m;
  m.S0 = p0.i1_S - p1.i1_S;
  m.T0 = p0.i1_T - p1.i1_T;
  m.S1 = (p0.i2_S - p1.i2_S - h * p1.i1_S) / h;
  m.T1 = (p0.i2_T - p1.i2_T - h * p1.i1_T) / h;
  return m;
}

ConvolutionMatrices convolution_matrices(double a, const std::vector<double>& targets,
                                         const std::vector<double>& sources) {
  if (!(a > 0.0)) fail(ErrorCode::domain_error, "kernel scale must be positive");
  if (sources.size() < 2) fail(ErrorCode::invalid_grid, "need at least two source nodes");
  const Eigen::Index nt = static_cast<Eigen::Index>(targets.size());
  const Eigen::Index ns = static_cast<Eigen::Index>(sources.size());
  ConvolutionMatrices c;
  c.S_hat = Eigen::MatrixXd::Zero(nt, ns);
  c.T_hat = Eigen::MatrixXd::Zero(nt, ns);
  c.S_slope = Eigen::MatrixXd::Zero(nt, ns);
  c.T_slope = Eigen::MatrixXd::Zero(nt, ns);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double x = targets[static_cast<std::size_t>(i)];
    for (Eigen::Index e = 0; e + 1 < ns; ++e) {
      const double t0 = sources[static_cast<std::size_t>(e)];
      const double t1 = sources[static_cast<std::size_t>(e + 1)];
      const double h = t1 - t0;
      const ElementMoments m = element_moments(a, x, t0, t1);
      c.S_hat(i, e) += m.S0 - m.S1;
      c.S_hat(i, e + 1) += m.S1;
      c.T_hat(i, e) += m.T0 - m.T1;
      c.T_hat(i, e + 1) += m.T1;
      c.S_slope(i, e) -= m.S0 / h;
      c.S_slope(i, e + 1) += m.S0 / h;
      c.T_slope(i, e) -= m.T0 / h;
      c.T_slope(i, e + 1) += m.T0 / h;
    }
  }
  return c;
}

const std::vector<double>& targets_of(Part part, const Grid& grid) {
  return part == Part::singular ? grid.crack : grid.interface;
}

DiscreteOperator assemble(Kernel kernel, Part part, double a, const Grid& grid, Basis basis) {
  const ConvolutionMatrices c = convolution_matrices(a, targets_of(part, grid), grid.crack);
  DiscreteOperator op;
  op.kernel = kernel;
  op.part = part;
  op.basis = basis;
  op.a = a;
  if (kernel == Kernel::S) {
    op.matrix = basis == Basis::hat ? c.S_hat : c.S_slope;
  } else {
    op.matrix = basis == Basis::hat ? c.T_hat : c.T_slope;
  }
  return op;
}

double kernel_S_sided(double a, double x, Part part) {
  if (x == 0.0) return kernel_S_limit(part == Part::compact);
  return kernel_S(a, x);
}

Eigen::VectorXd jump_correction(Part part, double a, const Grid& grid, double value_at_zero) {
  const auto& xs = targets_of(part, grid);
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = kernel_S_sided(a, xs[i], part) * value_at_zero;
  }
  return v;
}

Eigen::VectorXd truncation_correction(Part part, double a, const Grid& grid, double value_at_end) {
  const auto& xs = targets_of(part, grid);
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] + grid.L_neg;
    v(static_cast<Eigen::Index>(i)) = (d == 0.0 ? kernel_S_limit(true) : kernel_S(a, d)) * value_at_end;
  }
  return v;
}

SampledConvolution convolve_sampled(double a, const std::vector<double>& targets, Part part,
                                    const std::vector<double>& sources, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != sources.size()) {
    fail(ErrorCode::invalid_grid, "sampled values do not match source nodes");
  }
  const Eigen::Index nt = static_cast<Eigen::Index>(targets.size());
  SampledConvolution c;
  c.T = Eigen::VectorXd::Zero(nt);
  c.S = Eigen::VectorXd::Zero(nt);
  c.S_derivative = Eigen::VectorXd::Zero(nt);
  const std::size_t ns = sources.size();
  const double f_end = values(static_cast<Eigen::Index>(ns - 1));
  const double f_start = values(0);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double x = targets[static_cast<std::size_t>(i)];
    double t_acc = 0.0, s_acc = 0.0, d_acc = 0.0;
    for (std::size_t e = 0; e + 1 < ns; ++e) {
      const double f0 = values(static_cast<Eigen::Index>(e));
      const double f1 = values(static_cast<Eigen::Index>(e + 1));
      if (f0 == 0.0 && f1 == 0.0) continue;
      const double h = sources[e + 1] - sources[e];
      const ElementMoments m = element_moments(a, x, sources[e], sources[e + 1]);
      t_acc += f0 * (m.T0 - m.T1) + f1 * m.T1;
      s_acc += f0 * (m.S0 - m.S1) + f1 * m.S1;
      d_acc += (f1 - f0) / h * m.S0;
    }
    d_acc -= f_end * kernel_S_sided(a, x - sources.back(), part);
    const double d = x - sources.front();
    if (f_start != 0.0) d_acc += f_start * (d == 0.0 ? kernel_S_limit(true) : kernel_S(a, d));
    c.T(i) = t_acc;
    c.S(i) = s_acc;
    c.S_derivative(i) = d_acc;
  }
  return c;
}

}  // namespace crackline
