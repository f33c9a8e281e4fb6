#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "propagator.hpp"
#include "rng.hpp"
#include "telegraph.hpp"

// Phase-averaged bilinear propagator products
//   G^{im}(dt)_{lk} = < U(dt)_{ik} * conj(U(dt)_{ml}) >_phi,  phi ~ U[0, 2pi).
// Every term carrying a surviving e^{i phi} or e^{2 i phi} factor averages to
// zero, leaving real entries built from cos^2(g0 dt) and sin^2(g0 dt); these
// are the memory kernels of the renewal integral equations.

namespace tmodes {

using Mat2 = std::array<std::array<double, 2>, 2>;

struct GSet {
  double dt = 0.0;
  Mat2 g11{}, g12{}, g21{}, g22{};  // [l][k] indexing, 0-based
};

inline GSet g_matrices(double g0, double dt) {
  if (!(g0 >= 0.0) || !(dt >= 0.0))
    throw std::domain_error("g_matrices: g0 and dt must be >= 0");
  const double c = std::cos(g0 * dt), s = std::sin(g0 * dt);
  const double c2 = c * c, s2 = s * s;
  GSet g;
  g.dt = dt;
  g.g11 = {{{c2, 0.0}, {0.0, s2}}};
  g.g22 = {{{s2, 0.0}, {0.0, c2}}};
  g.g12 = {{{0.0, 0.0}, {c2, 0.0}}};  // entry (l=2, k=1)
  g.g21 = {{{0.0, c2}, {0.0, 0.0}}};  // transpose of g12
  return g;
}

struct GSetMc {
  GSet value;           // real parts of the sample means
  double max_imag = 0;  // largest |Im| among the 16 averaged entries
};

// Direct Monte Carlo phase average of all 16 products; converges to
// g_matrices at the usual 1/sqrt(samples) rate. dt = 0 reproduces the exact
// values bit-for-bit since the integrand is then constant.
inline GSetMc g_matrices_mc(double g0, double dt, std::size_t samples,
                            std::uint64_t seed) {
  if (samples < 1000) throw std::domain_error("g_matrices_mc: samples must be >= 1000");
  if (!(g0 >= 0.0) || !(dt >= 0.0))
    throw std::domain_error("g_matrices_mc: g0 and dt must be >= 0");
  const double c = std::cos(g0 * dt), s = std::sin(g0 * dt);
  rng::Xoshiro256pp g(seed);
  cplx acc[2][2][2][2] = {};
  for (std::size_t n = 0; n < samples; ++n) {
    const double phi = sample_phase(g);
    const cplx e{std::cos(phi), std::sin(phi)};
    const cplx u[2][2] = {{c, e * s}, {-std::conj(e) * s, c}};
    for (int i = 0; i < 2; ++i)
      for (int m = 0; m < 2; ++m)
        for (int l = 0; l < 2; ++l)
          for (int k = 0; k < 2; ++k) acc[i][m][l][k] += u[i][k] * std::conj(u[m][l]);
  }
  GSetMc out;
  out.value.dt = dt;
  const double inv = 1.0 / double(samples);
  auto put = [&](Mat2& dst, int i, int m) {
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k) {
        const cplx v = acc[i][m][l][k] * inv;
        dst[l][k] = v.real();
        out.max_imag = std::max(out.max_imag, std::abs(v.imag()));
      }
  };
  put(out.value.g11, 0, 0);
  put(out.value.g12, 0, 1);
  put(out.value.g21, 1, 0);
  put(out.value.g22, 1, 1);
  return out;
}

}  // namespace tmodes
