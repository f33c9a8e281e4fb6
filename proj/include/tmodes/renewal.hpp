#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "params.hpp"

// Renewal (Volterra) integral equations for the jump-averaged density matrix.
// Averaging over the time of the last phase jump gives, for the populations
// y = (rho11, rho22) in unit-trace normalization,
//
//   y(tau) = K(tau) y(0) + (1/tau0) Integral_0^tau K(tau - t) y(t) dt,
//   K(D)   = e^{-D/tau0} [[cos^2(g0 D), sin^2(g0 D)],
//                         [sin^2(g0 D), cos^2(g0 D)]],
//
// and for the coherence a scalar equation with kernel e^{-D/tau0} cos^2(g0 D).
//
// Solver: march on a uniform grid with product-trapezoidal quadrature — the
// density is taken piecewise linear and each panel integral against the exact
// kernel is evaluated by 5-point Gauss-Legendre (error ~(h/scale)^11, far
// below the O(h^2) interpolation error, so effectively exact weights). The
// Delta = 0 panel couples to the unknown endpoint; the constant 2x2 system
// (I - A0/tau0) y_n = ... is pre-inverted. Because the weights integrate the
// kernel exactly, the trace fixed point Sum_i y_i = const holds to roundoff,
// not just to O(h^2).

namespace tmodes {

namespace detail {

// panel weights against the linear nodal basis:
//   A[m] = Integral_{mh}^{(m+1)h} f(D) (1 - (D - mh)/h) dD   (weight of node n-m)
//   B[m] = Integral_{mh}^{(m+1)h} f(D) (D - mh)/h dD         (weight of node n-m-1)
template <class F>
void panel_weights(F&& f, double h, std::size_t n, std::vector<double>& A,
                   std::vector<double>& B) {
  static constexpr double gx[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                   -0.9061798459386640, 0.9061798459386640};
  static constexpr double gw[5] = {0.5688888888888889, 0.4786286704993665,
                                   0.4786286704993665, 0.2369268850561891,
                                   0.2369268850561891};
  A.assign(n, 0.0);
  B.assign(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double lo = double(m) * h;
    double a = 0.0, b = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double xi = 0.5 * (gx[q] + 1.0);  // in [0,1]
      const double fv = gw[q] * f(lo + xi * h);
      a += fv * (1.0 - xi);
      b += fv * xi;
    }
    A[m] = 0.5 * h * a;
    B[m] = 0.5 * h * b;
  }
}

inline void check_resolution(double g0, double tau0, double h) {
  const double cap = std::min(tau0, 1.0 / g0) / 20.0;
  if (!(h > 0.0) || h > cap)
    throw std::domain_error("renewal solver: step h = " + std::to_string(h) +
                            " under-resolves the kernel; need h <= " + std::to_string(cap));
}

}  // namespace detail

struct RenewalGrid {
  double h = 0.0;
  std::size_t n_steps = 0;
  std::vector<double> times;
  std::vector<double> rho11, rho22;  // unit-trace populations
};

// March the coupled population equations. Initial populations come from
// params.rho0 when provided, else (na0, nb0)/(na0 + nb0).
inline RenewalGrid solve_populations(const SimParams& p, double h, std::size_t n_steps) {
  detail::check_resolution(p.g0, p.tau0, h);
  if (n_steps < 1) throw std::domain_error("solve_populations: n_steps must be >= 1");
  double y0_1, y0_2;
  if (p.rho0) {
    y0_1 = p.rho0->e11.real();
    y0_2 = p.rho0->e22.real();
  } else {
    const double N = p.total();
    if (!(N > 0.0))
      throw std::domain_error("solve_populations: na0 + nb0 must be > 0 without rho0");
    y0_1 = p.na0 / N;
    y0_2 = p.nb0 / N;
  }

  const double inv_tau = 1.0 / p.tau0;
  std::vector<double> Acc, Bcc, Ass, Bss;
  detail::panel_weights(
      [&](double d) {
        const double c = std::cos(p.g0 * d);
        return std::exp(-d * inv_tau) * c * c;
      },
      h, n_steps, Acc, Bcc);
  detail::panel_weights(
      [&](double d) {
        const double s = std::sin(p.g0 * d);
        return std::exp(-d * inv_tau) * s * s;
      },
      h, n_steps, Ass, Bss);

  // constant implicit 2x2 system (I - A0/tau0), pre-inverted
  const double mcc = 1.0 - Acc[0] * inv_tau, mss = -Ass[0] * inv_tau;
  const double det = mcc * mcc - mss * mss;
  const double i11 = mcc / det, i12 = -mss / det;

  RenewalGrid out;
  out.h = h;
  out.n_steps = n_steps;
  out.times.resize(n_steps + 1);
  out.rho11.resize(n_steps + 1);
  out.rho22.resize(n_steps + 1);
  out.times[0] = 0.0;
  out.rho11[0] = y0_1;
  out.rho22[0] = y0_2;

  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double tau = double(n) * h;
    const double c = std::cos(p.g0 * tau), s = std::sin(p.g0 * tau);
    const double e = std::exp(-tau * inv_tau);
    double r1 = e * (c * c * y0_1 + s * s * y0_2);
    double r2 = e * (s * s * y0_1 + c * c * y0_2);
    // memory sum: node 0 carries B[n-1], node j in (0, n) carries A[n-j] + B[n-j-1]
    double s1 = Bcc[n - 1] * y0_1 + Bss[n - 1] * y0_2;
    double s2 = Bss[n - 1] * y0_1 + Bcc[n - 1] * y0_2;
    for (std::size_t j = 1; j < n; ++j) {
      const double wc = Acc[n - j] + Bcc[n - j - 1];
      const double ws = Ass[n - j] + Bss[n - j - 1];
      s1 += wc * out.rho11[j] + ws * out.rho22[j];
      s2 += ws * out.rho11[j] + wc * out.rho22[j];
    }
    r1 += inv_tau * s1;
    r2 += inv_tau * s2;
    out.rho11[n] = i11 * r1 + i12 * r2;
    out.rho22[n] = i12 * r1 + i11 * r2;
    out.times[n] = tau;
  }
  return out;
}

struct CoherenceGrid {
  double h = 0.0;
  std::size_t n_steps = 0;
  std::vector<double> times;
  std::vector<cplx> rho12;
};

// Scalar renewal equation for the averaged coherence rho12; requires an
// initial state with a nonzero off-diagonal element.
inline CoherenceGrid solve_coherence(const SimParams& p, double h, std::size_t n_steps) {
  detail::check_resolution(p.g0, p.tau0, h);
  if (n_steps < 1) throw std::domain_error("solve_coherence: n_steps must be >= 1");
  if (!p.rho0) throw std::domain_error("solve_coherence: rho0 not provided");
  const cplx y0 = p.rho0->e12;
  if (std::abs(y0) == 0.0)
    throw std::domain_error("solve_coherence: rho0 off-diagonal element is zero");

  const double inv_tau = 1.0 / p.tau0;
  std::vector<double> Acc, Bcc;
  detail::panel_weights(
      [&](double d) {
        const double c = std::cos(p.g0 * d);
        return std::exp(-d * inv_tau) * c * c;
      },
      h, n_steps, Acc, Bcc);

  const double lhs = 1.0 - Acc[0] * inv_tau;

  CoherenceGrid out;
  out.h = h;
  out.n_steps = n_steps;
  out.times.resize(n_steps + 1);
  out.rho12.resize(n_steps + 1);
  out.times[0] = 0.0;
  out.rho12[0] = y0;

  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double tau = double(n) * h;
    const double c = std::cos(p.g0 * tau);
    cplx rhs = std::exp(-tau * inv_tau) * c * c * y0 + inv_tau * Bcc[n - 1] * y0;
    for (std::size_t j = 1; j < n; ++j)
      rhs += inv_tau * (Acc[n - j] + Bcc[n - j - 1]) * out.rho12[j];
    out.rho12[n] = rhs / lhs;
    out.times[n] = tau;
  }
  return out;
}

namespace detail {

// adaptive Simpson with absolute tolerance
template <class F>
double simpson_rec(F&& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 40) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, depth);
}

// C1 cubic interpolant through a sampled series (Hermite with 3-point slopes);
// used to feed sampled candidates into the integral-equation residual.
class CubicSeries {
 public:
  CubicSeries(const std::vector<double>& t, const std::vector<double>& y) : t_(t), y_(y) {
    const std::size_t n = t.size();
    if (n < 3 || y.size() != n)
      throw std::domain_error("CubicSeries: need >= 3 points and matching lengths");
    d_.resize(n);
    auto quad_slope = [&](std::size_t i, std::size_t a, std::size_t b, std::size_t c) {
      const double ta = t[a], tb = t[b], tc = t[c], x = t[i];
      return y[a] * (2.0 * x - tb - tc) / ((ta - tb) * (ta - tc)) +
             y[b] * (2.0 * x - ta - tc) / ((tb - ta) * (tb - tc)) +
             y[c] * (2.0 * x - ta - tb) / ((tc - ta) * (tc - tb));
    };
    d_[0] = quad_slope(0, 0, 1, 2);
    for (std::size_t i = 1; i + 1 < n; ++i) d_[i] = quad_slope(i, i - 1, i, i + 1);
    d_[n - 1] = quad_slope(n - 1, n - 3, n - 2, n - 1);
  }

  double operator()(double x) const {
    const std::size_t n = t_.size();
    if (x <= t_.front()) return y_.front();
    if (x >= t_.back()) return y_.back();
    std::size_t i =
        std::size_t(std::upper_bound(t_.begin(), t_.end(), x) - t_.begin()) - 1;
    if (i >= n - 1) i = n - 2;
    const double hseg = t_[i + 1] - t_[i];
    const double u = (x - t_[i]) / hseg;
    const double u2 = u * u, u3 = u2 * u;
    return y_[i] * (2 * u3 - 3 * u2 + 1) + d_[i] * hseg * (u3 - 2 * u2 + u) +
           y_[i + 1] * (-2 * u3 + 3 * u2) + d_[i + 1] * hseg * (u3 - u2);
  }

 private:
  std::vector<double> t_, y_, d_;
};

}  // namespace detail

// Substitute a candidate occupation series n_a(t) into the occupation-form
// renewal equation
//   n(tau) = e^{-tau/tau0} [c^2 na0 + s^2 nb0]
//            + (1/tau0) Integral_0^tau e^{-D/tau0} [c^2(g0 D) n(tau - D)
//                                                   + s^2(g0 D) (N - n(tau - D))] dD
// and return the max absolute residual over the series grid. g0 = 0 is
// admitted (the equation degenerates gracefully); the candidate between grid
// points is the C1 cubic interpolant of the series.
inline double residual_check(const TimeSeries& series, const SimParams& p) {
  if (!(p.tau0 > 0.0)) throw std::domain_error("residual_check: tau0 must be > 0");
  if (!(p.g0 >= 0.0)) throw std::domain_error("residual_check: g0 must be >= 0");
  if (series.times.size() < 3 || series.times.size() != series.mean.size())
    throw std::domain_error("residual_check: series needs >= 3 aligned points");
  if (std::abs(series.times.front()) > 1e-15)
    throw std::domain_error("residual_check: series must start at t = 0");

  const double N = p.total();
  const double inv_tau = 1.0 / p.tau0;
  const detail::CubicSeries cand(series.times, series.mean);
  const double tol = 1e-10 * std::max(1.0, N);

  double worst = 0.0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double tau = series.times[i];
    const double c0 = std::cos(p.g0 * tau), s0 = std::sin(p.g0 * tau);
    const double inhom = std::exp(-tau * inv_tau) * (c0 * c0 * p.na0 + s0 * s0 * p.nb0);
    const double mem =
        detail::adaptive_simpson(
            [&](double d) {
              const double s = std::sin(p.g0 * d);
              const double s2 = s * s;
              const double n_at = cand(tau - d);
              return std::exp(-d * inv_tau) * (N * s2 + (1.0 - 2.0 * s2) * n_at);
            },
            0.0, tau, tol) *
        inv_tau;
    worst = std::max(worst, std::abs(inhom + mem - series.mean[i]));
  }
  return worst;
}

}  // namespace tmodes
