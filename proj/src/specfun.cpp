#include "crackline/specfun.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "crackline/errors.hpp"

namespace crackline {
namespace {

void require_positive_argument(double x, const char* fn) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << fn << " requires a positive argument (got " << x << ")";
    fail(ErrorCode::domain_error, os.str());
  }
}

// Quantities shared by the kernel evaluations, with the small-z differences
// (1 - cos z, sin z - z, z - Si z) formed without cancellation.
struct Parts {
  double Si, si, ci, Cin;
  double sn, cs;
  double one_minus_cos, sin_minus_z, z_minus_Si;
};

Parts parts(double z) {
  Parts p{};
  p.sn = std::sin(z);
  p.cs = std::cos(z);
  const double h = std::sin(0.5 * z);
  p.one_minus_cos = 2.0 * h * h;
  if (z <= detail::kSiCiSeam) {
    // Series: Si = sum (-1)^k z^{2k+1}/((2k+1)(2k+1)!), Cin = -sum_{k>=1} (-1)^k z^{2k}/(2k (2k)!).
    const double z2 = z * z;
    double term = z;
    double tail = 0.0;  // Si - z
    for (int k = 1; k < 80; ++k) {
      term *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
      const double add = term / (2.0 * k + 1.0);
      tail += add;
      if (std::abs(add) <= 1e-18 * std::abs(z + tail)) break;
    }
    p.Si = z + tail;
    p.z_minus_Si = -tail;
    double q = 1.0;
    double cin = 0.0;
    for (int k = 1; k < 80; ++k) {
      q *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
      const double add = -q / (2.0 * k);
      cin += add;
      if (std::abs(add) <= 1e-18 * std::abs(cin)) break;
    }
    p.Cin = cin;
    p.si = p.Si - kPi / 2.0;
    p.ci = kEulerGamma + std::log(z) - p.Cin;
    if (z < 0.5) {
      double t = -z * z2 / 6.0;
      double s = t;
      for (int k = 2; k < 12; ++k) {
        t *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
        s += t;
      }
      p.sin_minus_z = s;
    } else {
      p.sin_minus_z = p.sn - z;
    }
  } else {
    const SiCi v = detail::sici_continued_fraction(z);
    p.Si = v.Si;
    p.si = v.si;
    p.ci = v.ci;
    p.Cin = v.Cin;
    p.z_minus_Si = z - p.Si;
    p.sin_minus_z = p.sn - z;
  }
  return p;
}

// S_a(x) + pi/2 for x > 0 as a function of z = a x.
double s_regular_pos(const Parts& p) {
  return p.Si * p.cs + (kPi / 2.0) * p.one_minus_cos - p.ci * p.sn;
}

// T_a(x) - ln z - gamma.
double t_regular_minus_gamma(const Parts& p, double z) {
  const double lz = std::log(z);
  return -(kEulerGamma + lz) * p.one_minus_cos - p.Cin * p.cs + p.si * p.sn;
}

}  // namespace

namespace detail {

SiCi sici_series(double x) {
  require_positive_argument(x, "sici_series");
  const double x2 = x * x;
  double term = x;
  double Si = x;
  for (int k = 1; k < 200; ++k) {
    term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double add = term / (2.0 * k + 1.0);
    Si += add;
    if (std::abs(add) <= 1e-18 * std::abs(Si)) break;
  }
  double q = 1.0;
  double Cin = 0.0;
  for (int k = 1; k < 200; ++k) {
    q *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double add = -q / (2.0 * k);
    Cin += add;
    if (std::abs(add) <= 1e-18 * std::abs(Cin)) break;
  }
  SiCi r;
  r.Si = Si;
  r.Cin = Cin;
  r.si = Si - kPi / 2.0;
  r.ci = kEulerGamma + std::log(x) - Cin;
  return r;
}

SiCi sici_continued_fraction(double x) {
  require_positive_argument(x, "sici_continued_fraction");
  // Modified Lentz evaluation of E1(ix) = -ci(x) + i si(x) times e^{ix}.
  using cd = std::complex<double>;
  const double tiny = 1e-300;
  cd b(1.0, x);
  cd c(1.0 / tiny, 0.0);
  cd d = 1.0 / b;
  cd h = d;
  bool converged = false;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorCode::non_convergence, "si/ci continued fraction did not converge");
  h *= cd(std::cos(x), -std::sin(x));
  SiCi r;
  r.ci = -h.real();
  r.si = h.imag();
  r.Si = r.si + kPi / 2.0;
  r.Cin = kEulerGamma + std::log(x) - r.ci;
  return r;
}

}  // namespace detail

SiCi sici(double x) {
  require_positive_argument(x, "sici");
  return x <= detail::kSiCiSeam ? detail::sici_series(x) : detail::sici_continued_fraction(x);
}

double si(double x) { return sici(x).si; }
double ci(double x) { return sici(x).ci; }

KernelValues kernels(double a, double x) {
  if (x == 0.0) fail(ErrorCode::domain_error, "kernels evaluated at x = 0");
  const double z = a * std::abs(x);
  const SiCi v = sici(z);
  const double sn = std::sin(z);
  const double cs = std::cos(z);
  KernelValues k;
  k.S = (x > 0.0 ? 1.0 : -1.0) * (v.si * cs - v.ci * sn);
  k.T = v.ci * cs + v.si * sn;
  return k;
}

double kernel_S(double a, double x) {
  if (x == 0.0) return 0.0;
  return kernels(a, x).S;
}

double kernel_T(double a, double x) {
  if (x == 0.0) fail(ErrorCode::domain_error, "kernel_T is logarithmically singular at x = 0");
  return kernels(a, x).T;
}

double kernel_S_limit(bool from_above) { return from_above ? -kPi / 2.0 : kPi / 2.0; }

double kernel_S_regular(double a, double x) {
  if (x == 0.0) return 0.0;
  const double z = a * std::abs(x);
  const double r = s_regular_pos(parts(z));
  return x > 0.0 ? r : -r;
}

double kernel_T_regular(double a, double x) {
  if (x == 0.0) return kEulerGamma;
  const double z = a * std::abs(x);
  return kEulerGamma + t_regular_minus_gamma(parts(z), z);
}

double kernel_T_difference(double a1, double a2, double x) {
  const double base = std::log(a1 / a2);
  if (x == 0.0) return base;
  return base + kernel_T_regular(a1, x) - kernel_T_regular(a2, x);
}

KernelPrimitives kernel_primitives(double a, double s) {
  KernelPrimitives r;
  if (s == 0.0) return r;
  const double sg = s > 0.0 ? 1.0 : -1.0;
  const double z = a * std::abs(s);
  const Parts p = parts(z);
  const double lz = std::log(z);
  const double a2 = a * a;

  const double sreg = s_regular_pos(p);
  const double treg = t_regular_minus_gamma(p, z);

  r.i1_T = -sg * sreg / a;
  r.i1_S = treg / a;
  // T_reg - gamma + (pi/2) z, rewritten so every term is O(z^2 ln z).
  const double i2t = -(kEulerGamma + lz) * p.one_minus_cos - p.Cin * p.cs + p.Si * p.sn -
                     (kPi / 2.0) * p.sin_minus_z;
  r.i2_T = -i2t / a2;
  // -S_reg - z(ln z - 1) - gamma z, rewritten likewise.
  const double i2s = p.z_minus_Si + p.Si * p.one_minus_cos - (kPi / 2.0) * p.one_minus_cos +
                     (kEulerGamma + lz) * p.sin_minus_z - p.Cin * p.sn;
  r.i2_S = sg * i2s / a2;
  return r;
}

}  // namespace crackline
