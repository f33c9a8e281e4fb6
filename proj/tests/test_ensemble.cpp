#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tmodes/analytic.hpp"
#include "tmodes/ensemble.hpp"

using namespace tmodes;

namespace {

SimParams grid_params(double g0, double tau0, double na0, double nb0, std::vector<double> grid,
                      std::size_t M = 10000, std::uint64_t seed = 42) {
  SimParams p;
  p.g0 = g0;
  p.tau0 = tau0;
  p.na0 = na0;
  p.nb0 = nb0;
  p.t_grid = std::move(grid);
  p.ensemble = M;
  p.base_seed = seed;
  return p;
}

}  // namespace

TEST_CASE("a jump-free trajectory undergoes pure Rabi flopping") {
  Trajectory traj;
  traj.horizon = 10.0;
  traj.phases = {1.234};
  traj.validate();
  const SimParams p = grid_params(1.3, 1.0, 0.0, 2.0, {1.0});
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    const double want = 2.0 * std::pow(std::sin(1.3 * t), 2);
    REQUIRE(std::fabs(occupation_on_trajectory(traj, p, t) - want) <= 1e-13);
  }
}

TEST_CASE("a one-jump trajectory matches explicit propagator composition") {
  Trajectory traj;
  traj.horizon = 5.0;
  traj.jump_times = {0.8};
  traj.phases = {2.1, 5.9};
  traj.validate();
  const double g0 = 1.7, t = 2.0;
  const SimParams p = grid_params(g0, 1.0, 0.25, 1.75, {1.0});

  const Complex2x2 U =
      compose(propagator(g0, traj.phases[1], t - 0.8), propagator(g0, traj.phases[0], 0.8)).mat();
  const double want = std::norm(U.e11) * p.na0 + std::norm(U.e12) * p.nb0;
  REQUIRE(std::fabs(occupation_on_trajectory(traj, p, t) - want) <= 1e-13);
}

TEST_CASE("trajectory evaluation guards its time domain") {
  Trajectory traj;
  traj.horizon = 2.0;
  traj.phases = {0.5};
  const SimParams p = grid_params(1.0, 1.0, 0.0, 2.0, {1.0});
  REQUIRE_THROWS_AS(occupation_on_trajectory(traj, p, 2.5), std::domain_error);
  REQUIRE_THROWS_AS(occupation_on_trajectory(traj, p, -0.1), std::domain_error);
  REQUIRE(occupation_on_trajectory(traj, p, 0.0) == p.na0);  // identity evolution
}

TEST_CASE("single-excitation density and occupation routes coincide") {
  Trajectory traj;
  traj.horizon = 6.0;
  traj.jump_times = {0.9, 2.2, 4.4};
  traj.phases = {0.1, 3.3, 1.7, 4.9};
  traj.validate();
  SimParams p = grid_params(2.0, 1.0, 0.5, 1.5, {1.0});
  const double N = p.total();
  p.rho0 = Complex2x2{p.na0 / N, 0.0, 0.0, p.nb0 / N};
  for (double t : {0.0, 0.5, 1.3, 2.2, 3.0, 5.9}) {
    const Complex2x2 rho = density_on_trajectory(traj, p, t);
    REQUIRE(std::fabs(N * rho.e11.real() - occupation_on_trajectory(traj, p, t)) <= 1e-13);
    REQUIRE(std::fabs(rho.trace().real() - 1.0) <= 1e-14);
    REQUIRE(hermiticity_defect(rho) <= 1e-14);
  }

  SimParams no_rho = p;
  no_rho.rho0.reset();
  REQUIRE_THROWS_AS(density_on_trajectory(traj, no_rho, 1.0), std::domain_error);
}

TEST_CASE("streamed and materialized walks visit identical states") {
  const double tau0 = 0.8, g0 = 1.0;
  const std::uint64_t seed = 777;
  const std::vector<double> grid = uniform_grid(12.0, 25);
  const NoiseParams np{tau0, seed};
  for (std::uint64_t i = 0; i < 200; ++i) {
    std::vector<double> streamed, materialized;
    {
      detail::StreamSource src(seed, i, tau0);
      detail::walk_grid(g0, grid, src, [&](std::size_t, const detail::Su2State& s) {
        streamed.push_back(s.br * s.br + s.bi * s.bi);
      });
    }
    {
      const Trajectory traj = sample_trajectory(np, 12.0, i);
      detail::TrajSource src{&traj};
      detail::walk_grid(g0, grid, src, [&](std::size_t, const detail::Su2State& s) {
        materialized.push_back(s.br * s.br + s.bi * s.bi);
      });
    }
    REQUIRE(streamed == materialized);
  }
}

TEST_CASE("ensemble averaging needs at least two trajectories") {
  SimParams p = grid_params(1.0, 1.0, 0.0, 2.0, {0.0, 1.0}, 1);
  REQUIRE_THROWS_AS(mc_average_occupation(p), std::domain_error);
}

TEST_CASE("swapping the initial occupations swaps the output channels exactly") {
  const std::vector<double> grid = uniform_grid(8.0, 33);
  const SimParams pa = grid_params(1.0, 0.7, 2.0, 0.0, grid, 2048, 11);
  const SimParams pb = grid_params(1.0, 0.7, 0.0, 2.0, grid, 2048, 11);
  const OccupationEnsemble ea = mc_average_occupation(pa);
  const OccupationEnsemble eb = mc_average_occupation(pb);
  REQUIRE(ea.na.mean == eb.nb.mean);
  REQUIRE(ea.nb.mean == eb.na.mean);
  REQUIRE(ea.na.stderr_ == eb.nb.stderr_);
}

TEST_CASE("standard error shrinks as 1/sqrt(M)") {
  const std::vector<double> grid = uniform_grid(10.0, 21);
  const OccupationEnsemble small =
      mc_average_occupation(grid_params(1.0, 1.0, 0.0, 2.0, grid, 2500, 5));
  const OccupationEnsemble large =
      mc_average_occupation(grid_params(1.0, 1.0, 0.0, 2.0, grid, 10000, 5));
  double ratio_sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (large.na.stderr_[i] < 1e-8) continue;  // t = 0 slot is deterministic
    ratio_sum += small.na.stderr_[i] / large.na.stderr_[i];
    ++count;
  }
  REQUIRE(count >= 15);
  const double mean_ratio = ratio_sum / count;
  REQUIRE(mean_ratio > 1.8);
  REQUIRE(mean_ratio < 2.2);
}

TEST_CASE("results are independent of the worker count, bit for bit") {
  const std::vector<double> grid = uniform_grid(6.0, 13);
  const SimParams p = grid_params(1.0, 0.5, 0.5, 1.5, grid, 3000, 21);
  const OccupationEnsemble w1 = mc_average_occupation(p, 1);
  const OccupationEnsemble w4 = mc_average_occupation(p, 4);
  REQUIRE(w1.na.mean == w4.na.mean);
  REQUIRE(w1.na.stderr_ == w4.na.stderr_);
  REQUIRE(w1.nb.mean == w4.nb.mean);
  REQUIRE(w1.nb.stderr_ == w4.nb.stderr_);
  REQUIRE(w1.max_conservation_defect == w4.max_conservation_defect);
}

TEST_CASE("ensemble mean matches the closed form within sampling error") {
  const SimParams p = grid_params(1.0, 1.0, 0.0, 2.0, {0.0, 0.5, 1.0}, 100000, 4242);
  const OccupationEnsemble e = mc_average_occupation(p);
  REQUIRE(e.na.mean[0] == 0.0);
  REQUIRE(e.na.stderr_[0] == 0.0);
  REQUIRE(e.na.ensemble == 100000);
  // high-precision closed-form references
  const double want05 = 0.39294515083296433041;
  const double want10 = 1.0706445509194640292;
  REQUIRE(std::fabs(e.na.mean[1] - want05) <= 4.0 * (e.na.stderr_[1] + 1e-12));
  REQUIRE(std::fabs(e.na.mean[2] - want10) <= 4.0 * (e.na.stderr_[2] + 1e-12));
  // two-mode exchange conserves total occupation trajectory by trajectory
  REQUIRE(e.max_conservation_defect <= 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    REQUIRE(std::fabs(e.na.mean[i] + e.nb.mean[i] - 2.0) <= 1e-12);
}

TEST_CASE("density-matrix ensemble: trace, coherence decay, occupation consistency") {
  const std::vector<double> grid = uniform_grid(5.0, 11);
  SimParams p = grid_params(1.0, 1.0, 0.5, 1.5, grid, 20000, 77);
  p.rho0 = Complex2x2{0.25, 0.0, 0.0, 0.75};
  const DensityEnsemble d = mc_average_density(p);
  REQUIRE(d.ensemble == 20000);
  REQUIRE(d.max_trace_defect <= 1e-12);

  const OccupationEnsemble e = mc_average_occupation(p);
  const double N = p.total();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(std::fabs(d.mean[i].trace().real() - 1.0) <= 1e-12);
    REQUIRE(std::fabs(N * d.mean[i].e11.real() - e.na.mean[i]) <= 1e-13);
    // a population-diagonal initial state keeps zero mean coherence
    REQUIRE(std::fabs(d.mean[i].e12.real()) <= 5.0 * (d.stderr_re12[i] + 1e-12));
    REQUIRE(std::fabs(d.mean[i].e12.imag()) <= 5.0 * (d.stderr_im12[i] + 1e-12));
    REQUIRE(d.mean[i].e21 == std::conj(d.mean[i].e12));
  }

  SimParams no_rho = p;
  no_rho.rho0.reset();
  REQUIRE_THROWS_AS(mc_average_density(no_rho), std::domain_error);
  SimParams tiny = p;
  tiny.ensemble = 1;
  REQUIRE_THROWS_AS(mc_average_density(tiny), std::domain_error);
}

TEST_CASE("density ensemble is worker-count independent") {
  const std::vector<double> grid = uniform_grid(4.0, 9);
  SimParams p = grid_params(1.0, 0.8, 0.5, 1.5, grid, 2000, 3);
  p.rho0 = Complex2x2{0.25, cplx{0.2, 0.1}, cplx{0.2, -0.1}, 0.75};
  const DensityEnsemble d1 = mc_average_density(p, 1);
  const DensityEnsemble d4 = mc_average_density(p, 4);
  REQUIRE(d1.stderr_re12 == d4.stderr_re12);
  REQUIRE(d1.max_trace_defect == d4.max_trace_defect);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(d1.mean[i].e11 == d4.mean[i].e11);
    REQUIRE(d1.mean[i].e12 == d4.mean[i].e12);
  }
}
