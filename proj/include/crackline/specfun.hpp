#pragma once

namespace crackline {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Sine and cosine integrals in the shifted convention
//   si(x) = -int_x^inf sin(t)/t dt = Si(x) - pi/2,   ci(x) = -int_x^inf cos(t)/t dt.
// Both require x > 0 and are accurate to about 1e-15 absolute.
double si(double x);
double ci(double x);

struct SiCi {
  double Si = 0.0;   // int_0^x sin(t)/t dt
  double si = 0.0;
  double ci = 0.0;
  double Cin = 0.0;  // int_0^x (1 - cos t)/t dt = gamma + ln x - ci(x)
};

SiCi sici(double x);

namespace detail {
// The two evaluation regimes, exposed so the seam at x = 4 can be tested.
SiCi sici_series(double x);
SiCi sici_continued_fraction(double x);
inline constexpr double kSiCiSeam = 4.0;
}  // namespace detail

// S_a(x) = -int_0^inf sin(x xi)/(xi + a) dxi = sign(x)[si(z)cos z - ci(z)sin z], z = a|x|.
// Returns 0 at x = 0 (odd extension); one-sided limits are -+pi/2.
double kernel_S(double a, double x);

// T_a(x) = -int_0^inf cos(x xi)/(xi + a) dxi = ci(z)cos z + si(z)sin z, z = a|x|.
// Logarithmically singular at x = 0, where it throws domain_error.
double kernel_T(double a, double x);

// One-sided limit of S_a at x -> 0 from the given side: +pi/2 from below, -pi/2 from above.
double kernel_S_limit(bool from_above);

// S_a(x) + (pi/2)sign(x); O(a|x| ln(a|x|)) near 0, evaluated without cancellation.
double kernel_S_regular(double a, double x);
// T_a(x) - ln(a|x|); tends to Euler's gamma at x = 0.
double kernel_T_regular(double a, double x);
// T_{a1}(x) - T_{a2}(x), continuous with value ln(a1/a2) at x = 0.
double kernel_T_difference(double a1, double a2, double x);

struct KernelValues {
  double S = 0.0;
  double T = 0.0;
};

// Both kernels from one si/ci evaluation; x != 0.
KernelValues kernels(double a, double x);

// Antiderivatives vanishing at s = 0:
//   i1_x(s) = int_0^s K(r) dr,  i2_x(s) = int_0^s i1_x(r) dr,  K in {S_a, T_a}.
struct KernelPrimitives {
  double i1_S = 0.0;
  double i1_T = 0.0;
  double i2_S = 0.0;
  double i2_T = 0.0;
};

KernelPrimitives kernel_primitives(double a, double s);

}  // namespace crackline
