#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tmodes/fastmath.hpp"
#include "tmodes/propagator.hpp"

using namespace tmodes;

TEST_CASE("segment propagator matches its defining matrix") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ug(0.0, 5.0), up(0.0, 6.28), ud(0.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double g0 = ug(gen), phi = up(gen), dt = ud(gen);
    const Complex2x2 u = propagator(g0, phi, dt).mat();
    const double c = std::cos(g0 * dt), s = std::sin(g0 * dt);
    const cplx e{std::cos(phi), std::sin(phi)};
    REQUIRE(std::abs(u.e11 - c) <= 1e-15);
    REQUIRE(std::abs(u.e22 - c) <= 1e-15);
    REQUIRE(std::abs(u.e12 - e * s) <= 1e-15);
    REQUIRE(std::abs(u.e21 + std::conj(e) * s) <= 1e-15);
    REQUIRE(unitarity_defect(u) <= 1e-14);
    REQUIRE(std::abs(u.det() - cplx{1.0, 0.0}) <= 1e-14);
  }
}

TEST_CASE("zero-duration propagator is the identity exactly") {
  const Complex2x2 u = propagator(1.7, 2.9, 0.0).mat();
  REQUIRE(u.e11 == cplx{1.0, 0.0});
  REQUIRE(u.e12 == cplx{0.0, 0.0});
  REQUIRE(u.e21 == cplx{0.0, 0.0});
  REQUIRE(u.e22 == cplx{1.0, 0.0});
}

TEST_CASE("propagator rejects negative duration and coupling") {
  REQUIRE_THROWS_AS(propagator(1.0, 0.0, -0.1), std::domain_error);
  REQUIRE_THROWS_AS(propagator(-1.0, 0.0, 0.1), std::domain_error);
}

TEST_CASE("compose applies the later factor on the left") {
  const Unitary2 u1 = propagator(1.0, 0.3, 0.7);
  const Unitary2 u2 = propagator(2.0, 4.1, 0.4);
  const Complex2x2 manual = u2.mat() * u1.mat();
  const Complex2x2 got = compose(u2, u1).mat();
  REQUIRE(std::abs(got.e11 - manual.e11) == 0.0);
  REQUIRE(std::abs(got.e12 - manual.e12) == 0.0);
  // order matters: the reversed product differs for non-commuting factors
  const Complex2x2 rev = u1.mat() * u2.mat();
  REQUIRE((manual - rev).max_abs() > 1e-3);
}

TEST_CASE("long products stay unitary without renormalization") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> up(0.0, 6.28), ud(0.0, 0.5);
  Unitary2 u = propagator(1.0, 0.0, 0.0);
  for (int i = 0; i < 20000; ++i) u = compose(propagator(1.0, up(gen), ud(gen)), u);
  REQUIRE(unitarity_defect(u.mat()) <= 1e-12);
}

TEST_CASE("density conjugation: beamsplitter fixture and invariants") {
  // quarter-period rotation at phase 0 sends |a> to an equal superposition
  const Unitary2 u = propagator(1.0, 0.0, std::atan(1.0));  // g0 dt = pi/4
  const Complex2x2 rho{1.0, 0.0, 0.0, 0.0};
  const Complex2x2 out = conjugate_density(u, rho);
  REQUIRE(std::abs(out.e11 - cplx{0.5, 0.0}) <= 1e-15);
  REQUIRE(std::abs(out.e22 - cplx{0.5, 0.0}) <= 1e-15);
  REQUIRE(std::abs(out.e12 - cplx{-0.5, 0.0}) <= 1e-15);
  REQUIRE(std::abs(out.e21 - cplx{-0.5, 0.0}) <= 1e-15);

  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ur(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double p11 = std::abs(ur(gen));
    const cplx off{0.3 * ur(gen), 0.3 * ur(gen)};
    const Complex2x2 r{p11, off, std::conj(off), 1.0 - p11};
    const Unitary2 v = propagator(std::abs(ur(gen)) * 3.0, ur(gen) * 3.0, std::abs(ur(gen)) * 2.0);
    const Complex2x2 s = conjugate_density(v, r);
    REQUIRE(std::abs(s.trace() - r.trace()) <= 1e-14);
    REQUIRE(hermiticity_defect(s) <= 1e-14);
  }
}

TEST_CASE("density conjugation rejects non-Hermitian input") {
  const Unitary2 u = propagator(1.0, 0.0, 0.5);
  const Complex2x2 bad{1.0, cplx{0.2, 0.1}, cplx{0.2, 0.1}, 0.0};  // e21 != conj(e12)
  REQUIRE_THROWS_AS(conjugate_density(u, bad), std::domain_error);
}

TEST_CASE("unitary validation rejects non-unitary matrices") {
  const Complex2x2 shrunk{1.0, 0.0, 0.0, 0.5};
  REQUIRE_THROWS_AS(Unitary2{shrunk}, std::domain_error);
  const Complex2x2 poisoned{std::nan(""), 0.0, 0.0, 1.0};
  REQUIRE_THROWS_AS(Unitary2{poisoned}, std::domain_error);
}

TEST_CASE("fast sine/cosine kernels match libm to sub-ulp accuracy") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 32.0);
  double worst = 0.0;
  for (int i = 0; i < 2000000; ++i) {
    const double x = u(gen);
    double s, c;
    detail::fast_sincos(x, s, c);
    worst = std::fmax(worst, std::fmax(std::fabs(s - std::sin(x)), std::fabs(c - std::cos(x))));
  }
  REQUIRE(worst < 5e-16);

  // the dispatching wrapper across its three branches
  worst = 0.0;
  std::uniform_real_distribution<double> v(0.0, 100.0);
  for (int i = 0; i < 500000; ++i) {
    for (double x : {3e-4 * v(gen) / 100.0, 6.28 * v(gen) / 100.0, v(gen)}) {
      double s, c;
      detail::sincos_angle(x, s, c);
      worst = std::fmax(worst, std::fmax(std::fabs(s - std::sin(x)), std::fabs(c - std::cos(x))));
    }
  }
  REQUIRE(worst < 1e-15);
}
