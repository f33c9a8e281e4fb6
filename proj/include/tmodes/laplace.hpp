#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigfloat.hpp"
#include "propagator.hpp"

// Laplace-domain solution of the ensemble occupation. With the substitution
// f(t) = mean_na(t) e^{t/tau0}, the renewal equation becomes a convolution
// equation whose transform is rational:
//
//   f_hat(s) = na0 s / D(s) + 2 N g0^2 / ((s - 1/tau0) D(s)),
//   D(s)     = s^2 - s/tau0 + 4 g0^2.
//
// Equivalently, in terms of the elementary kernel transforms
//   g_hat = s/(s^2 + 4 g0^2),  h_hat = 1/(s - 1/tau0),
//   j_hat = 2 g0^2 / (s (s^2 + 4 g0^2)),
// one has f_hat = [na0 g_hat + N j_hat + (N/tau0) h_hat j_hat] / [1 - g_hat/tau0].
//
// mean_na(t) is recovered as e^{-t/tau0} * invert(f_hat)(t), either exactly by
// residues (simple poles at 1/tau0 and the two roots of D) or numerically by
// Gaver-Stehfest inversion, which is carried out in arbitrary precision
// because the weights grow combinatorially.

namespace tmodes {

struct LaplaceParams {
  double g0 = 1.0;
  double tau0 = 1.0;
  double na0 = 0.0;
  double N = 2.0;

  void validate() const {
    if (!(g0 > 0.0) || !std::isfinite(g0))
      throw std::domain_error("LaplaceParams: g0 must be finite and > 0");
    if (!(tau0 > 0.0) || !std::isfinite(tau0))
      throw std::domain_error("LaplaceParams: tau0 must be finite and > 0");
    if (!(na0 >= 0.0) || !(N > 0.0) || na0 > N)
      throw std::domain_error("LaplaceParams: need 0 <= na0 <= N with N > 0");
  }
};

// the three simple poles of f_hat: 1/tau0 and the roots of D(s)
inline std::array<cplx, 3> f_hat_poles(const LaplaceParams& p) {
  p.validate();
  const cplx disc = cplx(1.0 / (p.tau0 * p.tau0) - 16.0 * p.g0 * p.g0, 0.0);
  const cplx root = std::sqrt(disc);
  return {cplx(1.0 / p.tau0, 0.0), 0.5 * (cplx(1.0 / p.tau0) + root),
          0.5 * (cplx(1.0 / p.tau0) - root)};
}

namespace detail {
inline void guard_poles(const cplx& s, const LaplaceParams& p) {
  for (const cplx& q : f_hat_poles(p))
    if (std::abs(s - q) <= 1e-12 * std::max(1.0, std::abs(q)))
      throw std::domain_error("f_hat: s is within 1e-12 of a pole");
}
}  // namespace detail

inline cplx f_hat(const cplx& s, const LaplaceParams& p) {
  p.validate();
  detail::guard_poles(s, p);
  const cplx D = s * s - s / p.tau0 + 4.0 * p.g0 * p.g0;
  return p.na0 * s / D + 2.0 * p.N * p.g0 * p.g0 / ((s - 1.0 / p.tau0) * D);
}

struct KernelTransforms {
  cplx g_hat;  // transform of cos(2 g0 t)
  cplx h_hat;  // transform of e^{t/tau0}   (converges for Re s > 1/tau0)
  cplx j_hat;  // transform of sin^2(g0 t)
};

// Elementary transforms entering the convolution identity. The h_hat integral
// converges only for Re s > 1/tau0; the rational expression below is its
// analytic continuation and is what numerical inversion nodes evaluate, so
// the region of convergence is documented rather than enforced. Only actual
// pole hits are rejected.
inline KernelTransforms kernel_transforms(const cplx& s, double g0, double tau0) {
  if (!(g0 > 0.0) || !(tau0 > 0.0))
    throw std::domain_error("kernel_transforms: g0 and tau0 must be > 0");
  const cplx osc = s * s + 4.0 * g0 * g0;
  const cplx ip(0.0, 2.0 * g0);
  if (std::abs(s - ip) <= 1e-12 * std::max(1.0, 2.0 * g0) ||
      std::abs(s + ip) <= 1e-12 * std::max(1.0, 2.0 * g0))
    throw std::domain_error("kernel_transforms: s is within 1e-12 of +-2i g0");
  if (std::abs(s - 1.0 / tau0) <= 1e-12 * std::max(1.0, 1.0 / tau0))
    throw std::domain_error("kernel_transforms: s is within 1e-12 of 1/tau0");
  if (std::abs(s) <= 1e-12)
    throw std::domain_error("kernel_transforms: s is within 1e-12 of 0");
  KernelTransforms k;
  k.g_hat = s / osc;
  k.h_hat = 1.0 / (s - 1.0 / tau0);
  k.j_hat = 2.0 * g0 * g0 / (s * osc);
  return k;
}

inline cplx f_hat_from_kernels(const cplx& s, const LaplaceParams& p) {
  p.validate();
  detail::guard_poles(s, p);
  const KernelTransforms k = kernel_transforms(s, p.g0, p.tau0);
  const cplx numer = p.na0 * k.g_hat + p.N * k.j_hat + (p.N / p.tau0) * k.h_hat * k.j_hat;
  return numer / (1.0 - k.g_hat / p.tau0);
}

// arbitrary-precision evaluation on the real axis, for Stehfest nodes
inline big::Big f_hat_big(const big::Big& s, const LaplaceParams& p) {
  using big::Big;
  const Big D = s * s - s / p.tau0 + Big(4.0 * p.g0 * p.g0);
  return Big(p.na0) * s / D +
         Big(2.0 * p.N * p.g0 * p.g0) / ((s - 1.0 / p.tau0) * D);
}

inline auto f_hat_transform(const LaplaceParams& p) {
  p.validate();
  return [p](const big::Big& s) { return f_hat_big(s, p); };
}

// --- Gaver-Stehfest inversion -----------------------------------------------
//
// `order` counts Gaver extrapolation stages; the summation uses 2*order
// terms. Working precision must grow with the order because the weights
// alternate with magnitude ~10^{order}.

namespace detail {
inline void check_order(int order) {
  if (order < 8 || order % 2 != 0)
    throw std::domain_error("inversion order must be even and >= 8");
}
}  // namespace detail

inline std::vector<big::Big> stehfest_weights(int order) {
  detail::check_order(order);
  using big::Big;
  const unsigned long M = static_cast<unsigned long>(order);
  const unsigned long N = 2 * M;
  // tabulate factorials and j^M once; the inner loop is then O(1) big-ops
  std::vector<Big> fact(N + 1);
  fact[0] = Big(1.0);
  for (unsigned long i = 1; i <= N; ++i) fact[i] = fact[i - 1] * double(i);
  std::vector<Big> jpow(M + 1);
  for (unsigned long j = 1; j <= M; ++j) jpow[j] = big::ui_pow_ui(j, M);
  std::vector<Big> V;
  V.reserve(N);
  for (unsigned long k = 1; k <= N; ++k) {
    Big sum(0.0);
    const unsigned long j_lo = (k + 1) / 2;
    const unsigned long j_hi = std::min(k, M);
    for (unsigned long j = j_lo; j <= j_hi; ++j) {
      Big term = jpow[j] * fact[2 * j];
      term /= fact[M - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
      sum += term;
    }
    if ((k + M) % 2 != 0) sum = -sum;
    V.push_back(std::move(sum));
  }
  return V;
}

// invert a transform F (Big -> Big, evaluated at real nodes k ln2 / t)
template <class F>
double invert_numeric(F&& transform, double t, int order) {
  detail::check_order(order);
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("invert_numeric: t must be finite and > 0");
  using big::Big;
  const unsigned long N = 2 * static_cast<unsigned long>(order);
  const mpfr_prec_t bits =
      static_cast<mpfr_prec_t>(std::ceil(9.3 * double(N))) + 64;
  big::PrecisionGuard guard(bits);
  const std::vector<Big> V = stehfest_weights(order);
  const Big lt = big::ln2() / t;
  Big acc(0.0);
  for (unsigned long k = 1; k <= N; ++k) acc += V[k - 1] * transform(lt * double(k));
  const double out = (acc * lt).to_double();
  if (!std::isfinite(out))
    throw std::runtime_error("invert_numeric: transform produced a non-finite sum");
  return out;
}

struct InvertResult {
  double value = 0.0;
  double delta = 0.0;  // |value - cross-check at adjacent order|
  bool converged = false;
  int order_used = 0;
};

// invert at `order` and cross-check against the adjacent even order; the
// result is flagged unconverged when the two differ by more than
// tol * max(1, |value|).
template <class F>
InvertResult invert_checked(F&& transform, double t, int order, double tol = 1e-9) {
  detail::check_order(order);
  InvertResult r;
  r.value = invert_numeric(transform, t, order);
  const int cross = (order - 2 >= 8) ? order - 2 : order + 2;
  const double check = invert_numeric(transform, t, cross);
  r.delta = std::abs(r.value - check);
  r.converged = r.delta <= tol * std::max(1.0, std::abs(r.value));
  r.order_used = order;
  return r;
}

// doubling ladder 8, 16, 32, ... up to max_order; returns the first converged
// result, else the plateau (smallest successive delta) flagged unconverged.
template <class F>
InvertResult convergence_scan(F&& transform, double t, double tol = 1e-9,
                              int max_order = 256) {
  detail::check_order(max_order);
  InvertResult best;
  best.delta = std::numeric_limits<double>::infinity();
  double prev = invert_numeric(transform, t, 8);
  for (int order = 16; order <= max_order; order *= 2) {
    const double cur = invert_numeric(transform, t, order);
    const double delta = std::abs(cur - prev);
    if (delta < best.delta) {
      best.value = cur;
      best.delta = delta;
      best.order_used = order;
    }
    if (delta <= tol * std::max(1.0, std::abs(cur))) {
      best.value = cur;
      best.delta = delta;
      best.order_used = order;
      best.converged = true;
      return best;
    }
    prev = cur;
  }
  return best;
}

// undo the e^{t/tau0} substitution: mean_na(t) = e^{-t/tau0} f(t)
inline double unwrap_na(double f_value, double t, double tau0) {
  if (!(tau0 > 0.0)) throw std::domain_error("unwrap_na: tau0 must be > 0");
  return f_value * std::exp(-t / tau0);
}

// exact inversion by residues (simple poles only; rejects the critical case
// where the two roots of D coalesce). Returns mean_na(t) directly.
inline double residue_reconstruction(double t, const LaplaceParams& p) {
  p.validate();
  if (!(t >= 0.0)) throw std::domain_error("residue_reconstruction: t must be >= 0");
  const auto poles = f_hat_poles(p);
  const cplx pp = poles[1], pm = poles[2];
  if (std::abs(pp - pm) <= 1e-9 * std::max(1.0, std::abs(pp)))
    throw std::domain_error(
        "residue_reconstruction: degenerate (near-critical) poles");
  const double inv_tau = 1.0 / p.tau0;
  const auto residue = [&](const cplx& a, const cplx& b) {
    return (p.na0 * a + 2.0 * p.N * p.g0 * p.g0 / (a - inv_tau)) / (a - b);
  };
  // shift every exponent by -1/tau0 (the unwrap factor) before exponentiating
  const cplx term = residue(pp, pm) * std::exp((pp - inv_tau) * t) +
                    residue(pm, pp) * std::exp((pm - inv_tau) * t);
  return 0.5 * p.N + term.real();
}

}  // namespace tmodes
