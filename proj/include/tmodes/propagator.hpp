#pragma once
#include <cmath>
#include <complex>
#include <stdexcept>

// Exact 2x2 complex algebra and the constant-phase segment propagator
//   U(g0, phi, dt) = [[cos(g0 dt), e^{i phi} sin(g0 dt)],
//                     [-e^{-i phi} sin(g0 dt), cos(g0 dt)]]
// for two linearly coupled modes in the interaction picture. Free-mode
// frequencies never enter: they commute with the excitation-number operators
// measured here, so they live in SimParams as metadata only.

namespace tmodes {

using cplx = std::complex<double>;

struct Complex2x2 {
  cplx e11{}, e12{}, e21{}, e22{};

  friend Complex2x2 operator*(const Complex2x2& x, const Complex2x2& y) {
    return {x.e11 * y.e11 + x.e12 * y.e21, x.e11 * y.e12 + x.e12 * y.e22,
            x.e21 * y.e11 + x.e22 * y.e21, x.e21 * y.e12 + x.e22 * y.e22};
  }
  friend Complex2x2 operator+(const Complex2x2& x, const Complex2x2& y) {
    return {x.e11 + y.e11, x.e12 + y.e12, x.e21 + y.e21, x.e22 + y.e22};
  }
  friend Complex2x2 operator-(const Complex2x2& x, const Complex2x2& y) {
    return {x.e11 - y.e11, x.e12 - y.e12, x.e21 - y.e21, x.e22 - y.e22};
  }
  friend Complex2x2 operator*(cplx a, const Complex2x2& x) {
    return {a * x.e11, a * x.e12, a * x.e21, a * x.e22};
  }

  Complex2x2 adjoint() const {
    return {std::conj(e11), std::conj(e21), std::conj(e12), std::conj(e22)};
  }
  cplx trace() const { return e11 + e22; }
  cplx det() const { return e11 * e22 - e12 * e21; }

  double max_abs() const {
    return std::max(std::max(std::abs(e11), std::abs(e12)),
                    std::max(std::abs(e21), std::abs(e22)));
  }
  bool finite() const {
    auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return ok(e11) && ok(e12) && ok(e21) && ok(e22);
  }
};

inline Complex2x2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

// max entry magnitude of U U^dagger - I
inline double unitarity_defect(const Complex2x2& m) {
  return (m * m.adjoint() - identity2()).max_abs();
}

inline double hermiticity_defect(const Complex2x2& m) {
  return (m - m.adjoint()).max_abs();
}

// 2x2 unitary validated at construction: per-entry defect of U U^dagger and
// |det U| - 1 within 1e-12 (1e2 x double epsilon; products of up to ~50 exact
// rotations stay well inside this without renormalization).
class Unitary2 {
 public:
  explicit Unitary2(const Complex2x2& m) : m_(m) {
    if (!m.finite()) throw std::domain_error("Unitary2: non-finite entries");
    if (unitarity_defect(m) > 1e-12)
      throw std::domain_error("Unitary2: matrix not unitary within 1e-12");
    if (std::abs(std::abs(m.det()) - 1.0) > 1e-12)
      throw std::domain_error("Unitary2: |det| deviates from 1 beyond 1e-12");
  }
  const Complex2x2& mat() const { return m_; }

 private:
  Complex2x2 m_;
};

// Segment propagator for coupling amplitude g0, coupling phase phi, duration dt.
inline Unitary2 propagator(double g0, double phi, double dt) {
  if (!(dt >= 0.0)) throw std::domain_error("propagator: dt must be >= 0");
  if (!(g0 >= 0.0)) throw std::domain_error("propagator: g0 must be >= 0");
  const double th = g0 * dt;
  const double c = std::cos(th), s = std::sin(th);
  const cplx ph{std::cos(phi), std::sin(phi)};
  return Unitary2{Complex2x2{c, ph * s, -std::conj(ph) * s, c}};
}

// later * earlier (rightmost factor acts first)
inline Unitary2 compose(const Unitary2& later, const Unitary2& earlier) {
  return Unitary2{later.mat() * earlier.mat()};
}

// U rho U^dagger. rho must be Hermitian (either unit-trace or occupation
// normalization); the conjugation preserves trace and Hermiticity exactly in
// exact arithmetic, to ~1e-15 in floating point.
inline Complex2x2 conjugate_density(const Unitary2& U, const Complex2x2& rho) {
  if (!rho.finite()) throw std::domain_error("conjugate_density: non-finite rho");
  if (hermiticity_defect(rho) > 1e-9)
    throw std::domain_error("conjugate_density: rho not Hermitian within 1e-9");
  return U.mat() * rho * U.mat().adjoint();
}

}  // namespace tmodes
