#pragma once
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "ensemble.hpp"
#include "renewal.hpp"

// Builders that turn a RunConfig into the CsvSeries each command writes.
// Kept apart from the executable so the verification suite can check
// byte-level reproducibility of the exact tables the CLI emits.

namespace tmodes {

// closed-form occupations on the configured grid
inline CsvSeries analytic_series(const RunConfig& cfg) {
  const SimParams p = cfg.to_sim_params();
  const double N = p.total();
  CsvSeries out;
  out.metadata = metadata_echo(cfg);
  out.columns = {"t", "na", "nb"};
  for (double t : p.t_grid) {
    const double na = mean_na(t, p);
    out.rows.push_back({t, na, N - na});
  }
  out.validate();
  return out;
}

// Monte Carlo ensemble averages on the configured grid. With rho12_0 == 0 the
// table carries occupations; otherwise the normalized density-matrix entries.
inline CsvSeries simulate_series(const RunConfig& cfg, unsigned workers) {
  const SimParams p = cfg.to_sim_params();
  CsvSeries out;
  out.metadata = metadata_echo(cfg);
  if (cfg.rho12_0 == 0.0) {
    const OccupationEnsemble occ = mc_average_occupation(p, workers);
    out.metadata.emplace_back("max_conservation_defect",
                              format_double(occ.max_conservation_defect));
    out.columns = {"t", "na_mean", "na_stderr", "nb_mean", "nb_stderr"};
    for (std::size_t i = 0; i < p.t_grid.size(); ++i)
      out.rows.push_back({p.t_grid[i], occ.na.mean[i], occ.na.stderr_[i],
                          occ.nb.mean[i], occ.nb.stderr_[i]});
  } else {
    const DensityEnsemble de = mc_average_density(p, workers);
    out.metadata.emplace_back("max_trace_defect", format_double(de.max_trace_defect));
    out.columns = {"t",       "rho11",          "rho11_stderr", "rho22",
                   "rho22_stderr", "rho12_re", "rho12_re_stderr", "rho12_im",
                   "rho12_im_stderr"};
    for (std::size_t i = 0; i < p.t_grid.size(); ++i)
      out.rows.push_back({p.t_grid[i], de.mean[i].e11.real(), de.stderr_rho11[i],
                          de.mean[i].e22.real(), de.stderr_rho22[i],
                          de.mean[i].e12.real(), de.stderr_re12[i],
                          de.mean[i].e12.imag(), de.stderr_im12[i]});
  }
  out.validate();
  return out;
}

// integral-equation solution marched at the configured step
inline CsvSeries renewal_series(const RunConfig& cfg) {
  const SimParams p = cfg.to_sim_params();
  const double hstep = cfg.resolved_h();
  const std::size_t n_steps =
      static_cast<std::size_t>(std::ceil(cfg.resolved_t_max() / hstep - 1e-12));
  const RenewalGrid grid = solve_populations(p, hstep, n_steps);
  CsvSeries out;
  out.metadata = metadata_echo(cfg);
  out.metadata.emplace_back("n_steps", std::to_string(n_steps));
  if (cfg.rho12_0 == 0.0) {
    out.columns = {"t", "rho11", "rho22"};
    for (std::size_t i = 0; i <= n_steps; ++i)
      out.rows.push_back({grid.times[i], grid.rho11[i], grid.rho22[i]});
  } else {
    const CoherenceGrid coh = solve_coherence(p, hstep, n_steps);
    out.columns = {"t", "rho11", "rho22", "rho12_re", "rho12_im"};
    for (std::size_t i = 0; i <= n_steps; ++i)
      out.rows.push_back({grid.times[i], grid.rho11[i], grid.rho22[i],
                          coh.rho12[i].real(), coh.rho12[i].imag()});
  }
  out.validate();
  return out;
}

}  // namespace tmodes
