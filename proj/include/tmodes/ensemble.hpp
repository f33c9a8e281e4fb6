#pragma once
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fastmath.hpp"
#include "params.hpp"
#include "propagator.hpp"
#include "rng.hpp"
#include "telegraph.hpp"

// Monte Carlo ensemble dynamics. Each trajectory is evolved exactly: the
// propagator is a product of constant-phase segment rotations, and a product
// of such rotations keeps the form [[a, b], [-conj(b), conj(a)]], so only the
// first row (a, b) is tracked. Occupations follow as Heisenberg-picture
// moments, n_a(t) = |U11|^2 na0 + |U12|^2 nb0 (cross terms vanish per
// trajectory for initial product number states, which have <a^dag b> = 0);
// this makes arbitrary occupations exact at 2x2 cost, since the quadratic
// Hamiltonian closes on the mode operators.
//
// Determinism: trajectories are grouped in fixed blocks of 64; each block's
// moments are accumulated independently (Welford) and blocks are merged in
// index order (Chan's formula), so results are bit-identical for any worker
// count or schedule. Trajectory i derives its private RNG from (base_seed, i).

namespace tmodes {

namespace detail {

// first row of the product propagator: U = [[a, b], [-conj(b), conj(a)]]
struct Su2State {
  double ar = 1.0, ai = 0.0, br = 0.0, bi = 0.0;
  double norm2() const { return ar * ar + ai * ai + br * br + bi * bi; }
};

// apply one segment rotation of angle theta with phase factor (cphi + i sphi)
inline void su2_rotate(const Su2State& s, double theta, double sphi, double cphi,
                       Su2State& out) {
  double st, ct;
  sincos_angle(theta, st, ct);
  const double wr = st * cphi, wi = st * sphi;
  out.ar = ct * s.ar - (wr * s.br + wi * s.bi);
  out.ai = ct * s.ai - (wi * s.br - wr * s.bi);
  out.br = ct * s.br + (wr * s.ar + wi * s.ai);
  out.bi = ct * s.bi + (wi * s.ar - wr * s.ai);
}

// Telegraph sources for the grid walker. Both expose the same telegraph
// draw-order contract (see telegraph.hpp), so a streamed walk and a walk over
// the materialized Trajectory of the same (seed, index) visit bit-identical
// states.
struct StreamSource {
  rng::Xoshiro256pp g;
  double tau0;
  double t_acc = 0.0;
  StreamSource(std::uint64_t base_seed, std::uint64_t index, double tau0_)
      : g(rng::trajectory_stream(base_seed, index)), tau0(tau0_) {}
  double initial_phase() { return sample_phase(g); }
  double next_jump() {
    t_acc += sample_interval(g, tau0);
    return t_acc;
  }
  double jump_phase() { return sample_phase(g); }
};

struct TrajSource {
  const Trajectory* tr;
  std::size_t k = 0;
  double initial_phase() { return tr->phases[0]; }
  double next_jump() {
    return k < tr->jump_times.size() ? tr->jump_times[k]
                                     : std::numeric_limits<double>::infinity();
  }
  double jump_phase() {
    ++k;
    return tr->phases[k];
  }
};

// March an increasing time grid through the piecewise-constant-phase
// evolution; visit(g, state) receives the product state at grid[g]. Grid
// points are evaluated from the current segment start without committing, so
// the committed chain depends only on the jump structure, not on the grid.
template <class Source, class Visit>
void walk_grid(double g0, const std::vector<double>& grid, Source& src, Visit&& visit) {
  Su2State cur, at_grid;
  double seg_start = 0.0;
  double sphi, cphi;
  fast_sincos(src.initial_phase(), sphi, cphi);
  double t_next = src.next_jump();
  const std::size_t G = grid.size();
  std::size_t g = 0;
  while (g < G) {
    if (grid[g] <= t_next) {
      su2_rotate(cur, g0 * (grid[g] - seg_start), sphi, cphi, at_grid);
      visit(g, at_grid);
      ++g;
    } else {
      Su2State committed;
      su2_rotate(cur, g0 * (t_next - seg_start), sphi, cphi, committed);
      cur = committed;
      seg_start = t_next;
      fast_sincos(src.jump_phase(), sphi, cphi);
      t_next = src.next_jump();
    }
  }
}

}  // namespace detail

// rho(t) = U rho U^dagger written out for U = [[a, b], [-conj(b), conj(a)]]
inline Complex2x2 density_from_state(const detail::Su2State& s, const Complex2x2& rho) {
  const cplx a{s.ar, s.ai}, b{s.br, s.bi};
  const cplx v11 = a * rho.e11 + b * rho.e21, v12 = a * rho.e12 + b * rho.e22;
  const cplx v21 = -std::conj(b) * rho.e11 + std::conj(a) * rho.e21;
  const cplx v22 = -std::conj(b) * rho.e12 + std::conj(a) * rho.e22;
  return {v11 * std::conj(a) + v12 * std::conj(b), -v11 * b + v12 * a,
          v21 * std::conj(a) + v22 * std::conj(b), -v21 * b + v22 * a};
}

// n_a(t) for one materialized trajectory (exact segment composition up to t).
inline double occupation_on_trajectory(const Trajectory& traj, const SimParams& p, double t) {
  if (!(t >= 0.0) || !(t <= traj.horizon))
    throw std::domain_error("occupation_on_trajectory: t must lie in [0, horizon]");
  double na = p.na0;
  const std::vector<double> grid{t};
  detail::TrajSource src{&traj};
  detail::walk_grid(p.g0, grid, src, [&](std::size_t, const detail::Su2State& s) {
    na = (s.ar * s.ar + s.ai * s.ai) * p.na0 + (s.br * s.br + s.bi * s.bi) * p.nb0;
  });
  return na;
}

// rho(t) for one materialized trajectory; requires p.rho0.
inline Complex2x2 density_on_trajectory(const Trajectory& traj, const SimParams& p, double t) {
  if (!p.rho0) throw std::domain_error("density_on_trajectory: rho0 not provided");
  if (!(t >= 0.0) || !(t <= traj.horizon))
    throw std::domain_error("density_on_trajectory: t must lie in [0, horizon]");
  Complex2x2 out = *p.rho0;
  const std::vector<double> grid{t};
  detail::TrajSource src{&traj};
  detail::walk_grid(p.g0, grid, src, [&](std::size_t, const detail::Su2State& s) {
    out = density_from_state(s, *p.rho0);
  });
  return out;
}

namespace detail {

constexpr std::size_t kMcBlock = 64;

struct BlockMoments {
  double count = 0.0;
  std::vector<double> mean, m2;
  double defect = 0.0;  // max conservation / trace defect seen in the block

  void init(std::size_t slots) {
    count = 0.0;
    mean.assign(slots, 0.0);
    m2.assign(slots, 0.0);
    defect = 0.0;
  }
  void add(const std::vector<double>& row) {
    count += 1.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double d = row[i] - mean[i];
      mean[i] += d / count;
      m2[i] += d * (row[i] - mean[i]);
    }
  }
  void merge_from(const BlockMoments& b) {
    if (b.count == 0.0) return;
    defect = std::max(defect, b.defect);
    if (count == 0.0) {
      count = b.count;
      mean = b.mean;
      m2 = b.m2;
      return;
    }
    const double n = count + b.count;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double d = b.mean[i] - mean[i];
      mean[i] += d * (b.count / n);
      m2[i] += b.m2[i] + d * d * (count * b.count / n);
    }
    count = n;
  }
};

// Run per_traj(index, row, defect) for indices [0, M), reduce block-wise.
template <class PerTraj>
BlockMoments mc_run(std::size_t M, std::size_t slots, int workers, PerTraj&& per_traj) {
  const std::size_t nblocks = (M + kMcBlock - 1) / kMcBlock;
  std::vector<BlockMoments> partial(nblocks);

  auto do_block = [&](std::size_t b) {
    BlockMoments& bm = partial[b];
    bm.init(slots);
    std::vector<double> row(slots);
    const std::size_t lo = b * kMcBlock, hi = std::min(M, lo + kMcBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      double defect = 0.0;
      per_traj(i, row, defect);
      bm.add(row);
      bm.defect = std::max(bm.defect, defect);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t W = workers > 0 ? std::size_t(workers) : std::size_t(hw);
  W = std::min(W, nblocks);

  if (W <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) do_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mx;
    std::vector<std::thread> pool;
    pool.reserve(W);
    for (std::size_t w = 0; w < W; ++w)
      pool.emplace_back([&] {
        try {
          for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            do_block(b);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mx);
          if (!err) err = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  BlockMoments total;
  total.init(slots);
  for (const auto& bm : partial) total.merge_from(bm);
  return total;
}

inline void unpack_series(const BlockMoments& tot, std::size_t stride, std::size_t channel,
                          const std::vector<double>& times, TimeSeries& out) {
  const std::size_t G = times.size();
  out.times = times;
  out.mean.resize(G);
  out.stderr_.resize(G);
  out.ensemble = std::size_t(tot.count);
  const double n = tot.count;
  for (std::size_t g = 0; g < G; ++g) {
    out.mean[g] = tot.mean[stride * g + channel];
    out.stderr_[g] = std::sqrt(tot.m2[stride * g + channel] / (n - 1.0) / n);
  }
}

}  // namespace detail

struct OccupationEnsemble {
  TimeSeries na, nb;
  // max over trajectories and grid times of |n_a(t) + n_b(t) - (na0 + nb0)|
  double max_conservation_defect = 0.0;
};

inline OccupationEnsemble mc_average_occupation(const SimParams& p, int workers = 0) {
  p.validate();
  if (p.ensemble < 2)
    throw std::domain_error(
        "mc_average_occupation: ensemble size must be >= 2 (stderr undefined for M = 1)");
  const std::size_t G = p.t_grid.size();
  const double N = p.total();
  auto per_traj = [&p, N](std::size_t index, std::vector<double>& row, double& defect) {
    detail::StreamSource src(p.base_seed, index, p.tau0);
    double dmax = 0.0;
    detail::walk_grid(p.g0, p.t_grid, src, [&](std::size_t g, const detail::Su2State& s) {
      const double pa = s.ar * s.ar + s.ai * s.ai;
      const double pb = s.br * s.br + s.bi * s.bi;
      row[2 * g] = pa * p.na0 + pb * p.nb0;
      row[2 * g + 1] = pb * p.na0 + pa * p.nb0;
      dmax = std::max(dmax, std::abs(pa + pb - 1.0));
    });
    defect = dmax * N;
  };
  const auto tot = detail::mc_run(p.ensemble, 2 * G, workers, per_traj);
  OccupationEnsemble out;
  detail::unpack_series(tot, 2, 0, p.t_grid, out.na);
  detail::unpack_series(tot, 2, 1, p.t_grid, out.nb);
  out.max_conservation_defect = tot.defect;
  return out;
}

struct DensityEnsemble {
  std::vector<double> times;
  std::vector<Complex2x2> mean;  // Hermitian by construction (rho21 mirrored from rho12)
  std::vector<double> stderr_rho11, stderr_rho22, stderr_re12, stderr_im12;
  std::size_t ensemble = 0;
  double max_trace_defect = 0.0;  // max per-sample |tr rho - 1|
};

inline DensityEnsemble mc_average_density(const SimParams& p, int workers = 0) {
  p.validate();
  if (!p.rho0) throw std::domain_error("mc_average_density: rho0 not provided");
  if (p.ensemble < 2)
    throw std::domain_error(
        "mc_average_density: ensemble size must be >= 2 (stderr undefined for M = 1)");
  const std::size_t G = p.t_grid.size();
  const Complex2x2 rho0 = *p.rho0;
  auto per_traj = [&p, rho0](std::size_t index, std::vector<double>& row, double& defect) {
    detail::StreamSource src(p.base_seed, index, p.tau0);
    double dmax = 0.0;
    detail::walk_grid(p.g0, p.t_grid, src, [&](std::size_t g, const detail::Su2State& s) {
      const Complex2x2 r = density_from_state(s, rho0);
      row[4 * g] = r.e11.real();
      row[4 * g + 1] = r.e22.real();
      row[4 * g + 2] = r.e12.real();
      row[4 * g + 3] = r.e12.imag();
      dmax = std::max(dmax, std::abs(r.e11.real() + r.e22.real() - 1.0));
    });
    defect = dmax;
  };
  const auto tot = detail::mc_run(p.ensemble, 4 * G, workers, per_traj);
  DensityEnsemble out;
  out.times = p.t_grid;
  out.ensemble = std::size_t(tot.count);
  out.max_trace_defect = tot.defect;
  out.mean.resize(G);
  out.stderr_rho11.resize(G);
  out.stderr_rho22.resize(G);
  out.stderr_re12.resize(G);
  out.stderr_im12.resize(G);
  const double n = tot.count;
  for (std::size_t g = 0; g < G; ++g) {
    const double r11 = tot.mean[4 * g], r22 = tot.mean[4 * g + 1];
    const cplx r12{tot.mean[4 * g + 2], tot.mean[4 * g + 3]};
    out.mean[g] = {r11, r12, std::conj(r12), r22};
    auto se = [&](std::size_t c) { return std::sqrt(tot.m2[4 * g + c] / (n - 1.0) / n); };
    out.stderr_rho11[g] = se(0);
    out.stderr_rho22[g] = se(1);
    out.stderr_re12[g] = se(2);
    out.stderr_im12[g] = se(3);
  }
  return out;
}

}  // namespace tmodes
