#pragma once
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "propagator.hpp"

namespace tmodes {

// Shared simulation parameters. omega_a/omega_b are carried as metadata only:
// every observable here is an interaction-picture excitation number, on which
// the free-mode phases act trivially.
struct SimParams {
  double g0 = 1.0;    // coupling amplitude [1/time]
  double tau0 = 1.0;  // mean phase-jump interval [time]
  double na0 = 0.0;   // initial mean occupation, mode a
  double nb0 = 2.0;   // initial mean occupation, mode b
  std::optional<Complex2x2> rho0;  // single-excitation density matrix (Hermitian, unit trace)
  std::vector<double> t_grid;      // strictly increasing sample times, first >= 0
  std::size_t ensemble = 10000;    // Monte Carlo trajectory count M
  std::uint64_t base_seed = 42;
  double omega_a = 0.0, omega_b = 0.0;  // metadata only (see note above)

  double total() const { return na0 + nb0; }

  void validate() const {
    auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!pos(g0)) throw std::domain_error("SimParams: g0 must be > 0");
    if (!pos(tau0)) throw std::domain_error("SimParams: tau0 must be > 0");
    if (!(na0 >= 0.0) || !std::isfinite(na0))
      throw std::domain_error("SimParams: na0 must be >= 0");
    if (!(nb0 >= 0.0) || !std::isfinite(nb0))
      throw std::domain_error("SimParams: nb0 must be >= 0");
    if (ensemble < 1) throw std::domain_error("SimParams: ensemble size must be >= 1");
    if (t_grid.empty()) throw std::domain_error("SimParams: t_grid must be non-empty");
    if (!(t_grid.front() >= 0.0))
      throw std::domain_error("SimParams: t_grid must start at t >= 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
      if (!(t_grid[i] > t_grid[i - 1]))
        throw std::domain_error("SimParams: t_grid must be strictly increasing");
    if (rho0) {
      if (hermiticity_defect(*rho0) > 1e-9)
        throw std::domain_error("SimParams: rho0 must be Hermitian within 1e-9");
      if (std::abs(rho0->trace() - cplx{1.0, 0.0}) > 1e-9)
        throw std::domain_error("SimParams: rho0 must have unit trace");
    }
  }
};

inline std::vector<double> uniform_grid(double t_max, std::size_t points) {
  if (!(t_max > 0.0)) throw std::domain_error("uniform_grid: t_max must be > 0");
  if (points < 2) throw std::domain_error("uniform_grid: need at least 2 points");
  std::vector<double> g(points);
  const double dt = t_max / double(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = double(i) * dt;
  g.back() = t_max;
  return g;
}

// One averaged observable on a time grid with its Monte Carlo standard error
// (unbiased sample standard deviation / sqrt(M)).
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t ensemble = 0;
};

}  // namespace tmodes
