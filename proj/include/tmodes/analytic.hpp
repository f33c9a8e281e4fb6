#pragma once
#include <cmath>
#include <stdexcept>

#include "params.hpp"

// Closed-form ensemble-averaged occupation of mode a under telegraph phase
// noise, in all regimes of q = g0*tau0:
//
//   <n_a>(t) = N/2 + (na0 - N/2) e^{-t/2tau0} [cos(Om t) + sin(Om t)/(2 tau0 Om)]
//
// with N = na0 + nb0 and Om = sqrt((2 g0)^2 - 1/(2 tau0)^2). For q > 1/4 the
// bracket oscillates (damped Rabi flopping); at q = 1/4 oscillation ceases;
// for q < 1/4 Om is imaginary and the bracket becomes hyperbolic — the
// overdamped branch, where fast phase jumps progressively freeze the transfer
// (a Zeno-like effect, relaxation rate -> 4 g0^2 tau0 as q -> 0).

namespace tmodes {

struct Regime {
  enum class Kind {
    wcr,       // "weak coupling" (noise-weak): q > 1/4, damped oscillation
    critical,  // |q - 1/4| <= 1e-12
    scr        // "strong coupling" (noise-strong): q < 1/4, overdamped
  };
  Kind kind = Kind::wcr;
  double omega = 0.0;  // |Om|; real frequency for wcr, hyperbolic rate for scr, 0 at critical
  double g0tau0 = 0.0;
};

inline const char* regime_label(Regime::Kind k) {
  switch (k) {
    case Regime::Kind::wcr: return "WCR";
    case Regime::Kind::critical: return "Critical";
    default: return "SCR";
  }
}

// Signed Om^2 in the factored form: exact zero when 2 g0 == 1/(2 tau0) and
// well-conditioned near the boundary.
inline double omega_squared(double g0, double tau0) {
  const double a = 1.0 / (2.0 * tau0);
  return (2.0 * g0 - a) * (2.0 * g0 + a);
}

inline Regime classify_regime(double g0, double tau0) {
  if (!(g0 > 0.0) || !(tau0 > 0.0))
    throw std::domain_error("classify_regime: g0 and tau0 must be > 0");
  Regime r;
  r.g0tau0 = g0 * tau0;
  if (std::abs(r.g0tau0 - 0.25) <= 1e-12) {
    r.kind = Regime::Kind::critical;
    r.omega = 0.0;
  } else {
    const double om2 = omega_squared(g0, tau0);
    r.kind = om2 > 0.0 ? Regime::Kind::wcr : Regime::Kind::scr;
    r.omega = std::sqrt(std::abs(om2));
  }
  return r;
}

inline Regime omega(double g0, double tau0) { return classify_regime(g0, tau0); }

// The decaying bracket e^{-t/2tau0}[cos(Om t) + sin(Om t)/(2 tau0 Om)],
// evaluated on the numerically safe branch:
//  - |Om^2 t^2| < 1e-6 (i.e. |Om t| < 1e-3): even Taylor series in (Om t)^2,
//    truncation below 1e-30, continuous across the sign change of Om^2;
//  - oscillatory branch: direct trig form;
//  - overdamped branch: recast as a sum of two decaying exponentials, which
//    avoids the cosh/sinh overflow that the textbook form hits for t large.
inline double occupation_envelope(double t, double g0, double tau0) {
  const double a = 1.0 / (2.0 * tau0);
  const double om2 = omega_squared(g0, tau0);
  const double x = om2 * t * t;
  if (std::abs(x) < 1e-6) {
    const double c = 1.0 + x * (-1.0 / 2 + x * (1.0 / 24 + x * (-1.0 / 720 + x / 40320)));
    const double s = 1.0 + x * (-1.0 / 6 + x * (1.0 / 120 + x * (-1.0 / 5040 + x / 362880)));
    return std::exp(-a * t) * (c + a * t * s);
  }
  if (om2 > 0.0) {
    const double om = std::sqrt(om2);
    return std::exp(-a * t) * (std::cos(om * t) + a / om * std::sin(om * t));
  }
  const double w = std::sqrt(-om2);  // < a always
  return 0.5 * ((1.0 + a / w) * std::exp(-(a - w) * t) +
                (1.0 - a / w) * std::exp(-(a + w) * t));
}

inline double mean_na(double t, const SimParams& p) {
  if (!(t >= 0.0)) throw std::domain_error("mean_na: t must be >= 0");
  const double half = 0.5 * p.total();
  return half + (p.na0 - half) * occupation_envelope(t, p.g0, p.tau0);
}

// Oscillatory-regime form as conventionally written,
//   (N_b e^{-t/2tau0}/2) [e^{t/2tau0} - cos(Om t) - sin(Om t)/(2 tau0 Om)],
// for mode b initially in a number state |N_b> and mode a in vacuum. Kept as
// an independent evaluation route from mean_na; the two agree to ~1e-14.
inline double wcr_na(double t, double nb, double g0, double tau0) {
  if (!(g0 * tau0 > 0.25))
    throw std::domain_error("wcr_na: requires g0*tau0 > 0.25");
  if (!(t >= 0.0)) throw std::domain_error("wcr_na: t must be >= 0");
  const double a = 1.0 / (2.0 * tau0);
  const double om = std::sqrt(omega_squared(g0, tau0));
  return 0.5 * nb * std::exp(-a * t) *
         (std::exp(a * t) - std::cos(om * t) - a / om * std::sin(om * t));
}

// Overdamped-regime hyperbolic form,
//   (N_b/2) {1 - e^{-t/2tau0} [cosh(|Om| t) + sinh(|Om| t)/(2 tau0 |Om|)]}.
// Literal cosh/sinh evaluation while it stays finite (|Om| t < 700); beyond
// that the mathematically identical two-exponential form takes over.
inline double scr_na(double t, double nb, double g0, double tau0) {
  if (!(g0 * tau0 < 0.25))
    throw std::domain_error("scr_na: requires g0*tau0 < 0.25");
  if (!(t >= 0.0)) throw std::domain_error("scr_na: t must be >= 0");
  const double a = 1.0 / (2.0 * tau0);
  const double w = std::sqrt(-omega_squared(g0, tau0));
  double bracket;
  if (w * t < 700.0) {
    bracket = std::exp(-a * t) * (std::cosh(w * t) + a / w * std::sinh(w * t));
  } else {
    bracket = 0.5 * ((1.0 + a / w) * std::exp(-(a - w) * t) +
                     (1.0 - a / w) * std::exp(-(a + w) * t));
  }
  return 0.5 * nb * (1.0 - bracket);
}

// Photon/exciton damping rates; the telegraph model maps onto a damped
// polariton oscillation with tau0 = 1/gamma, gamma = gamma_p + gamma_ex.
struct DampingParams {
  double gamma_p = 0.0;
  double gamma_ex = 0.0;
  double gamma() const { return gamma_p + gamma_ex; }

  void validate() const {
    if (!(gamma_p >= 0.0) || !(gamma_ex >= 0.0))
      throw std::domain_error("DampingParams: rates must be >= 0");
  }
};

// Damped polariton oscillation (N_b/2)[1 - e^{-gamma t/2} cos(2 g0 t)]:
// the large-g0*tau0 limit of wcr_na, where Om ~ 2 g0 and the sin term is
// suppressed by 1/(2 tau0 Om).
inline double polariton_na(double t, double nb, double g0, const DampingParams& d) {
  d.validate();
  if (!(t >= 0.0)) throw std::domain_error("polariton_na: t must be >= 0");
  return 0.5 * nb * (1.0 - std::exp(-0.5 * d.gamma() * t) * std::cos(2.0 * g0 * t));
}

// Slowest relaxation rate toward N/2 in the overdamped/critical regime:
// 1/(2 tau0) - |Om|, computed in the cancellation-free equivalent form
// 4 g0^2 / (1/(2 tau0) + |Om|). Tends to 4 g0^2 tau0 as g0*tau0 -> 0.
inline double effective_rate(double g0, double tau0) {
  const Regime r = classify_regime(g0, tau0);
  if (r.kind == Regime::Kind::wcr)
    throw std::domain_error("effective_rate: defined for g0*tau0 <= 0.25 only");
  const double a = 1.0 / (2.0 * tau0);
  return 4.0 * g0 * g0 / (a + r.omega);
}

}  // namespace tmodes
