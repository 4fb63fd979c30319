#include "crackline/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "crackline/errors.hpp"
#include "crackline/specfun.hpp"

namespace crackline {
namespace {

using cplx = std::complex<double>;

// Wynn epsilon algorithm on a sequence of partial sums; returns the latest even-column estimate.
class EpsilonAccelerator {
 public:
  double push(double s) {
    std::vector<double> next{s};
    for (std::size_t k = 0; k < prev_.size(); ++k) {
      const double diff = next[k] - prev_[k];
      const double left = k == 0 ? 0.0 : prev_[k - 1];
      if (diff == 0.0) break;
      next.push_back(left + 1.0 / diff);
    }
    // Even columns (index 0, 2, 4, ...) approximate the limit; take the deepest one.
    const std::size_t deepest = (next.size() - 1) & ~std::size_t{1};
    estimate_ = next[deepest];
    prev_ = std::move(next);
    return estimate_;
  }
  double estimate() const { return estimate_; }

 private:
  std::vector<double> prev_;
  double estimate_ = 0.0;
};

double panel_integral(const std::function<double(double)>& f, double lo, double hi, double a) {
  using boost::math::quadrature::gauss_kronrod;
  // Split at a, 10a, 100a, ... to resolve the 1/(xi + a) scale inside wide panels.
  std::vector<double> cuts{lo};
  for (double c = a; c < hi; c *= 10.0)
    if (c > lo) cuts.push_back(c);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-13);
  }
  return total;
}

// int_0^inf trig(w xi) / (xi + a) dxi for w > 0, summed over the zeros of the integrand.
double oscillatory_integral(double a, double w, bool sine, int* panels_used) {
  std::function<double(double)> f;
  if (sine) {
    f = [a, w](double t) { return std::sin(w * t) / (t + a); };
  } else {
    f = [a, w](double t) { return std::cos(w * t) / (t + a); };
  }
  const double half = kPi / w;
  auto boundary = [&](int k) {
    if (k == 0) return 0.0;
    return sine ? k * half : (k - 0.5) * half;
  };
  EpsilonAccelerator acc;
  double sum = 0.0;
  double last = 0.0;
  int stable = 0;
  const int max_panels = 400;
  // Accelerate only once panels lie in the smooth tail, beyond xi ~ a.
  const int first = std::max(1, static_cast<int>(std::ceil(4.0 * a / half)));
  int k = 0;
  for (k = 0; k < max_panels; ++k) {
    sum += panel_integral(f, boundary(k), boundary(k + 1), a);
    if (k + 1 < first) continue;
    const double est = acc.push(sum);
    if (k + 1 >= first + 6) {
      if (std::abs(est - last) <= 1e-13 * std::max(1.0, std::abs(est))) {
        if (++stable >= 2) break;
      } else {
        stable = 0;
      }
    }
    last = est;
  }
  if (panels_used) *panels_used = k + 1;
  if (k == max_panels) {
    std::ostringstream os;
    os << "oscillatory quadrature did not settle for a = " << a << ", x = " << w;
    fail(ErrorCode::non_convergence, os.str());
  }
  return acc.estimate();
}

}  // namespace

double kernel_S_quadrature(double a, double x) {
  if (!(a > 0.0)) fail(ErrorCode::domain_error, "kernel scale must be positive");
  if (x == 0.0) fail(ErrorCode::domain_error, "quadrature check needs x != 0");
  const double v = -oscillatory_integral(a, std::abs(x), true, nullptr);
  return x > 0.0 ? v : -v;
}

double kernel_T_quadrature(double a, double x) {
  if (!(a > 0.0)) fail(ErrorCode::domain_error, "kernel scale must be positive");
  if (x == 0.0) fail(ErrorCode::domain_error, "quadrature check needs x != 0");
  return -oscillatory_integral(a, std::abs(x), false, nullptr);
}

KernelCheck kernel_quadrature_check(double a, const std::vector<double>& xs) {
  KernelCheck out;
  for (double x : xs) {
    if (x == 0.0) fail(ErrorCode::domain_error, "quadrature check needs x != 0");
    int ps = 0, pt = 0;
    const double s = (x > 0.0 ? -1.0 : 1.0) * oscillatory_integral(a, std::abs(x), true, &ps);
    const double t = -oscillatory_integral(a, std::abs(x), false, &pt);
    const double dev = std::max(std::abs(s - kernel_S(a, x)), std::abs(t - kernel_T(a, x)));
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst_x = x;
    }
    out.panels = std::max({out.panels, ps, pt});
  }
  return out;
}

SpectralConfig default_spectral_config(double L_neg, double L_pos, double l_min, double a_max) {
  if (!(L_neg > 0.0) || !(L_pos > 0.0) || !(l_min > 0.0) || !(a_max > 0.0)) {
    fail(ErrorCode::config_error, "spectral configuration needs positive lengths and scales");
  }
  SpectralConfig c;
  c.L_neg = L_neg;
  c.L_pos = L_pos;
  const double target = std::min(l_min, 1.0 / a_max) / 32.0;
  const double period = 1.5 * (L_neg + L_pos);
  long n = 1;
  while (static_cast<double>(n) * target < period) n *= 2;
  const long cap = 1L << 21;
  if (n > cap) n = cap;
  double dx = std::max(target, period / static_cast<double>(n));
  dx = L_neg / std::ceil(L_neg / dx);
  if (static_cast<double>(n) * dx < period) n = std::min(cap * 2, n * 2);
  c.dx = dx;
  c.n_xi = static_cast<int>(n);
  c.xi_max = kPi / dx;
  return c;
}

namespace {

// Fourier-domain description of a half-line problem
//   P-[M * u] = P-[C * <p> + A * [p]] on x < 0,  t = P+[M * u - C * <p> - A * [p]] on x > 0,
// with M -> L (constant) as |xi| -> inf and [u] = K t on x > 0.
struct SpectralModel {
  int nc = 1;
  std::function<Eigen::MatrixXcd(double)> M;
  std::function<Eigen::MatrixXcd(double)> C;
  std::function<Eigen::MatrixXcd(double)> A;
  Eigen::MatrixXd L;
  Eigen::MatrixXd K;
  std::vector<Loading> loads;
};

struct FftwBuffers {
  int n;
  double* real;
  fftw_complex* spec;
  fftw_plan forward;
  fftw_plan backward;
  explicit FftwBuffers(int n_) : n(n_) {
    real = fftw_alloc_real(static_cast<std::size_t>(n));
    spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~FftwBuffers() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;
};

class SpectralOperator {
 public:
  SpectralOperator(const SpectralModel& m, const SpectralConfig& cfg)
      : model_(m), n_(cfg.n_xi), nf_(cfg.n_xi / 2 + 1), fft_(cfg.n_xi) {
    const int nc = m.nc;
    nonlocal_.resize(static_cast<std::size_t>(nf_) * nc * nc);
    c_.resize(nonlocal_.size());
    a_.resize(nonlocal_.size());
    const double period = cfg.dx * n_;
    for (int k = 0; k < nf_; ++k) {
      const double xi = 2.0 * kPi * k / period;
      const bool real_bin = k == 0 || k == nf_ - 1;
      Eigen::MatrixXcd Mk = m.M(xi);
      Eigen::MatrixXcd Ck = m.C(xi);
      Eigen::MatrixXcd Ak = m.A(xi);
      Mk -= m.L.cast<cplx>();
      for (int r = 0; r < nc; ++r)
        for (int s = 0; s < nc; ++s) {
          const std::size_t idx = (static_cast<std::size_t>(k) * nc + r) * nc + s;
          // FFTW uses exp(-i w x); the transform here uses exp(+i xi x), so bins take M(-w) = conj M(w).
          nonlocal_[idx] = real_bin ? cplx(Mk(r, s).real(), 0.0) : std::conj(Mk(r, s));
          c_[idx] = real_bin ? cplx(Ck(r, s).real(), 0.0) : std::conj(Ck(r, s));
          a_[idx] = real_bin ? cplx(Ak(r, s).real(), 0.0) : std::conj(Ak(r, s));
        }
    }
  }

  // y_r = sum_s K_rs * f_s for full-period arrays; which = 0 nonlocal, 1 C, 2 A.
  std::vector<Eigen::VectorXd> apply(const std::vector<Eigen::VectorXd>& f, int which) {
    const int nc = model_.nc;
    const auto& table = which == 0 ? nonlocal_ : (which == 1 ? c_ : a_);
    std::vector<std::vector<cplx>> spectra(static_cast<std::size_t>(nc));
    for (int s = 0; s < nc; ++s) {
      std::copy(f[s].data(), f[s].data() + n_, fft_.real);
      fftw_execute(fft_.forward);
      spectra[s].resize(static_cast<std::size_t>(nf_));
      for (int k = 0; k < nf_; ++k) spectra[s][k] = cplx(fft_.spec[k][0], fft_.spec[k][1]);
    }
    std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(nc));
    for (int r = 0; r < nc; ++r) {
      for (int k = 0; k < nf_; ++k) {
        cplx acc = 0.0;
        for (int s = 0; s < nc; ++s) acc += table[(static_cast<std::size_t>(k) * nc + r) * nc + s] * spectra[s][k];
        fft_.spec[k][0] = acc.real();
        fft_.spec[k][1] = acc.imag();
      }
      fftw_execute(fft_.backward);
      out[r] = Eigen::Map<Eigen::VectorXd>(fft_.real, n_) / static_cast<double>(n_);
    }
    return out;
  }

 private:
  const SpectralModel& model_;
  int n_;
  int nf_;
  FftwBuffers fft_;
  std::vector<cplx> nonlocal_, c_, a_;
};

SpectralSolution spectral_solve(const SpectralModel& model, const SpectralConfig& cfg) {
  if (cfg.n_xi < 16 || (cfg.n_xi & (cfg.n_xi - 1)) != 0) fail(ErrorCode::config_error, "n_xi must be a power of two");
  if (!(cfg.dx > 0.0)) fail(ErrorCode::config_error, "spectral step must be positive");
  if (cfg.xi_max * cfg.dx < kPi * (1.0 - 1e-12)) fail(ErrorCode::config_error, "xi_max dx must be at least pi");
  const int nc = model.nc;
  const int n = cfg.n_xi;
  const long k0 = std::lround(cfg.L_neg / cfg.dx);
  const long kp = std::lround(cfg.L_pos / cfg.dx);
  if (k0 + kp + 1 > n) fail(ErrorCode::config_error, "spectral period shorter than the truncated line");
  const int ncrack = static_cast<int>(k0 + 1);
  auto xof = [&](long j) { return static_cast<double>(j - k0) * cfg.dx; };

  SpectralOperator op(model, cfg);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(ncrack);
  w(0) = 0.5;
  w(ncrack - 1) = 0.5;
  const Eigen::VectorXd sw = w.cwiseSqrt();

  // Loading terms C * (w <p>) + A * (w [p]) on the full period.
  std::vector<Eigen::VectorXd> pavg(static_cast<std::size_t>(nc), Eigen::VectorXd::Zero(n));
  std::vector<Eigen::VectorXd> pjump(static_cast<std::size_t>(nc), Eigen::VectorXd::Zero(n));
  bool any_jump = false;
  for (int c = 0; c < nc; ++c)
    for (int j = 0; j < ncrack; ++j) {
      const double x = xof(j);
      pavg[c](j) = w(j) * model.loads[c].average(x);
      pjump[c](j) = w(j) * model.loads[c].jump(x);
      any_jump = any_jump || pjump[c](j) != 0.0;
    }
  std::vector<Eigen::VectorXd> f = op.apply(pavg, 1);
  if (any_jump) {
    const auto fj = op.apply(pjump, 2);
    for (int c = 0; c < nc; ++c) f[c] += fj[c];
  }

  // Symmetrized crack equations in v = W^{1/2} u:  (-L) v - W^{1/2} R N E W^{1/2} v = -W^{1/2} f.
  const Eigen::MatrixXd negL = -model.L;
  auto apply_system = [&](const Eigen::VectorXd& v) {
    std::vector<Eigen::VectorXd> full(static_cast<std::size_t>(nc), Eigen::VectorXd::Zero(n));
    for (int c = 0; c < nc; ++c) full[c].head(ncrack) = sw.cwiseProduct(v.segment(c * ncrack, ncrack));
    const auto y = op.apply(full, 0);
    Eigen::VectorXd out(v.size());
    for (int c = 0; c < nc; ++c) {
      Eigen::VectorXd loc = Eigen::VectorXd::Zero(ncrack);
      for (int s = 0; s < nc; ++s) loc += negL(c, s) * v.segment(s * ncrack, ncrack);
      out.segment(c * ncrack, ncrack) = loc - sw.cwiseProduct(y[c].head(ncrack));
    }
    return out;
  };
  Eigen::VectorXd b(nc * ncrack);
  for (int c = 0; c < nc; ++c) b.segment(c * ncrack, ncrack) = -sw.cwiseProduct(f[c].head(ncrack));

  Eigen::VectorXd v = Eigen::VectorXd::Zero(b.size());
  const double bnorm = b.norm();
  SpectralSolution sol;
  sol.config = cfg;
  if (bnorm > 0.0) {
    // Jacobi-free conjugate gradients; the operator is symmetric positive definite.
    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    int it = 0;
    for (it = 1; it <= cfg.max_iterations; ++it) {
      const Eigen::VectorXd Ap = apply_system(p);
      const double alpha = rr / p.dot(Ap);
      v += alpha * p;
      r -= alpha * Ap;
      const double rr_new = r.squaredNorm();
      if (std::sqrt(rr_new) <= cfg.tolerance * bnorm) {
        rr = rr_new;
        break;
      }
      p = r + (rr_new / rr) * p;
      rr = rr_new;
    }
    if (it > cfg.max_iterations) {
      std::ostringstream os;
      os << "spectral conjugate gradients stalled at relative residual " << std::sqrt(rr) / bnorm << " after "
         << cfg.max_iterations << " iterations";
      fail(ErrorCode::non_convergence, os.str());
    }
    sol.iterations = it;
    sol.residual = (b - apply_system(v)).norm() / bnorm;
  }

  // Jump on the crack, traction on the interface.
  std::vector<Eigen::VectorXd> full(static_cast<std::size_t>(nc), Eigen::VectorXd::Zero(n));
  Eigen::MatrixXd u(ncrack, nc);
  for (int c = 0; c < nc; ++c) {
    u.col(c) = v.segment(c * ncrack, ncrack).cwiseQuotient(sw);
    full[c].head(ncrack) = w.cwiseProduct(u.col(c));
  }
  const auto y = op.apply(full, 0);
  const int nint = static_cast<int>(kp + 1);
  sol.jump.resize(ncrack + nint, nc);
  sol.traction.resize(ncrack + nint, nc);
  for (int j = 0; j < ncrack; ++j) {
    sol.x.push_back(xof(j));
    sol.region.push_back(Region::crack);
    sol.jump.row(j) = u.row(j);
    for (int c = 0; c < nc; ++c) sol.traction(j, c) = model.loads[c].average(xof(j));
  }
  for (int i = 0; i < nint; ++i) {
    const long j = k0 + i;
    Eigen::VectorXd t(nc);
    for (int c = 0; c < nc; ++c) t(c) = y[c](j) - f[c](j);
    sol.x.push_back(xof(j));
    sol.region.push_back(Region::interface);
    sol.traction.row(ncrack + i) = t.transpose();
    sol.jump.row(ncrack + i) = (model.K * t).transpose();
  }
  return sol;
}

SpectralModel mode3_model(const Mode3Problem& p) {
  SpectralModel m;
  m.nc = 1;
  const double kappa = p.kappa();
  const double a = p.scale();
  const double half_delta = 0.5 * p.delta3();
  m.M = [=](double xi) {
    Eigen::MatrixXcd r(1, 1);
    r(0, 0) = -std::abs(xi) / (kappa * (std::abs(xi) + a));
    return r;
  };
  m.C = [=](double xi) {
    Eigen::MatrixXcd r(1, 1);
    r(0, 0) = a / (std::abs(xi) + a);
    return r;
  };
  m.A = [=](double xi) {
    Eigen::MatrixXcd r(1, 1);
    r(0, 0) = half_delta * a / (std::abs(xi) + a);
    return r;
  };
  m.L = Eigen::MatrixXd::Constant(1, 1, -1.0 / kappa);
  m.K = Eigen::MatrixXd::Constant(1, 1, kappa);
  m.loads = {p.loading()};
  return m;
}

SpectralModel mode12_model(const Mode12Problem& p) {
  SpectralModel m;
  m.nc = 2;
  const InPlaneConstants c = p.constants();
  m.M = [c](double xi) -> Eigen::MatrixXcd { return abc_at_xi(c, xi).B * cplx(0.0, -xi); };
  m.C = [c](double xi) -> Eigen::MatrixXcd { return abc_at_xi(c, xi).C; };
  m.A = [c](double xi) -> Eigen::MatrixXcd { return abc_at_xi(c, xi).A; };
  m.K = c.K();
  m.L = -m.K.inverse();
  m.loads = {p.loading()[0], p.loading()[1]};
  return m;
}

double loading_min_length(const std::vector<Loading>& loads) {
  double l = 0.0;
  for (const auto& x : loads)
    if (!x.is_zero()) l = l == 0.0 ? x.min_length() : std::min(l, x.min_length());
  return l > 0.0 ? l : 1.0;
}

RegionDifference region_difference(const std::vector<double>& diffs, double scale) {
  RegionDifference r;
  r.samples = static_cast<int>(diffs.size());
  if (diffs.empty()) return r;
  double mx = 0.0, sum = 0.0;
  for (double d : diffs) {
    mx = std::max(mx, d);
    sum += d;
  }
  const double s = scale > 0.0 ? scale : 1.0;
  r.max_relative = mx / s;
  r.mean_relative = sum / static_cast<double>(diffs.size()) / s;
  return r;
}

template <class Eval>
ComparisonReport compare(const SpectralSolution& sp, double window, Eval nystrom_at) {
  std::vector<double> xs;
  std::vector<int> rows;
  for (std::size_t i = 0; i < sp.x.size(); ++i) {
    if (std::abs(sp.x[i]) <= window) {
      xs.push_back(sp.x[i]);
      rows.push_back(static_cast<int>(i));
    }
  }
  ComparisonReport rep;
  rep.window = window;
  rep.spectral_iterations = sp.iterations;
  if (xs.empty()) return rep;
  const Eigen::MatrixXd ny = nystrom_at(xs);
  double scale = 0.0;
  for (int r : rows) scale = std::max(scale, sp.jump.row(r).cwiseAbs().maxCoeff());
  std::vector<double> dc, di;
  double mx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double d = (ny.row(static_cast<Eigen::Index>(k)) - sp.jump.row(rows[k])).cwiseAbs().maxCoeff();
    (sp.region[rows[k]] == Region::crack ? dc : di).push_back(d);
    mx = std::max(mx, d);
  }
  rep.crack = region_difference(dc, scale);
  rep.interface = region_difference(di, scale);
  rep.max_relative = scale > 0.0 ? mx / scale : mx;
  return rep;
}

}  // namespace

SolutionProfile SpectralSolution::profile() const {
  SolutionProfile p;
  p.x1 = x;
  p.region = region;
  p.jump = jump;
  p.traction = traction;
  return p;
}

SpectralSolution spectral_solve_mode3(const Mode3Problem& problem, const SpectralConfig& cfg) {
  return spectral_solve(mode3_model(problem), cfg);
}

SpectralConfig default_spectral_config(const Mode3Problem& problem) {
  const Grid& g = problem.grid();
  return default_spectral_config(g.L_neg, g.L_pos, loading_min_length({problem.loading()}), problem.scale());
}

SpectralSolution spectral_solve_mode3(const Mode3Problem& problem) {
  return spectral_solve_mode3(problem, default_spectral_config(problem));
}

SpectralSolution spectral_solve_mode12(const Mode12Problem& problem, const SpectralConfig& cfg) {
  return spectral_solve(mode12_model(problem), cfg);
}

SpectralConfig default_spectral_config(const Mode12Problem& problem) {
  const Grid& g = problem.grid();
  const auto& p = problem.loading();
  return default_spectral_config(g.L_neg, g.L_pos, loading_min_length({p[0], p[1]}), problem.constants().xi2);
}

SpectralSolution spectral_solve_mode12(const Mode12Problem& problem) {
  return spectral_solve_mode12(problem, default_spectral_config(problem));
}

ComparisonReport compare_mode3(const Mode3Problem& problem, const Mode3Solution& nystrom,
                               const SpectralSolution& spectral, double window) {
  return compare(spectral, window, [&](const std::vector<double>& xs) -> Eigen::MatrixXd {
    return evaluate_jump_at(problem, nystrom.jump, xs);
  });
}

ComparisonReport compare_mode12(const Mode12Problem& problem, const Mode12Solution& nystrom,
                                const SpectralSolution& spectral, double window) {
  return compare(spectral, window, [&](const std::vector<double>& xs) -> Eigen::MatrixXd {
    return evaluate_jump_at(problem, nystrom.jump, xs);
  });
}

}  // namespace crackline
