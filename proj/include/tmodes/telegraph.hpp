#pragma once
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

// Random-telegraph phase process: the coupling phase phi(t) is piecewise
// constant, jumping at exponentially distributed intervals (mean tau0) to a
// fresh value uniform on [0, 2pi). Phases on different segments are
// uncorrelated, and the exponential law is memoryless, so the first segment
// needs no equilibrium-age correction: it simply starts at t = 0 with phi_0.
//
// Draw-order contract for a trajectory stream (relied on by the streaming
// evolver in ensemble.hpp, which must consume randomness identically):
//   phi_0, tau_1, [phi_1, tau_2, [phi_2, tau_3, ...]]
// i.e. after the initial phase, intervals and phases alternate; the final
// interval draw is the one that crosses the horizon and is censored (its
// phase is never drawn).

namespace tmodes {

struct NoiseParams {
  double tau0 = 1.0;       // mean jump interval
  std::uint64_t seed = 42; // base seed; trajectory index selects the stream

  void validate() const {
    if (!(tau0 > 0.0) || !std::isfinite(tau0))
      throw std::domain_error("NoiseParams: tau0 must be > 0");
  }
};

inline double sample_interval(rng::Xoshiro256pp& g, double tau0) {
  return -tau0 * std::log(g.u01_open());
}

inline double sample_phase(rng::Xoshiro256pp& g) {
  return 2.0 * std::numbers::pi * g.u01();
}

// One realization: jump times strictly inside (0, horizon), phases[k] active
// on segment [t_k, t_{k+1}) with t_0 = 0 and t_{jumps+1} = horizon.
struct Trajectory {
  double horizon = 0.0;
  std::vector<double> jump_times;
  std::vector<double> phases;  // size() == jump_times.size() + 1

  void validate() const {
    if (!(horizon > 0.0)) throw std::domain_error("Trajectory: horizon must be > 0");
    if (phases.size() != jump_times.size() + 1)
      throw std::domain_error("Trajectory: phase count must be jump count + 1");
    double prev = 0.0;
    for (double t : jump_times) {
      if (!(t > prev) || !(t < horizon))
        throw std::domain_error("Trajectory: jump times must be strictly increasing in (0, horizon)");
      prev = t;
    }
    for (double p : phases)
      if (!(p >= 0.0) || !(p < 2.0 * std::numbers::pi))
        throw std::domain_error("Trajectory: phases must lie in [0, 2pi)");
  }

  // phase active at time t in [0, horizon]
  double phase_at(double t) const {
    std::size_t k = 0;
    while (k < jump_times.size() && jump_times[k] <= t) ++k;
    return phases[k];
  }
};

inline Trajectory sample_trajectory(const NoiseParams& params, double horizon,
                                    std::uint64_t index = 0) {
  params.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::domain_error("sample_trajectory: horizon must be > 0");
  auto g = rng::trajectory_stream(params.seed, index);
  Trajectory traj;
  traj.horizon = horizon;
  traj.phases.push_back(sample_phase(g));
  double t = 0.0;
  for (;;) {
    t += sample_interval(g, params.tau0);
    if (!(t < horizon)) break;  // censored: beyond-horizon jump is discarded
    traj.jump_times.push_back(t);
    traj.phases.push_back(sample_phase(g));
  }
  return traj;
}

// Debug dump: "# tau0=<val> seed=<val> horizon=<val>" then one line per
// segment start, `t<TAB>phase`; the first line (t = 0) carries phi_0.
inline void dump_trajectory(std::ostream& os, const Trajectory& traj, double tau0,
                            std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# tau0=%.17g seed=%llu horizon=%.17g\n", tau0,
                static_cast<unsigned long long>(seed), traj.horizon);
  os << buf;
  std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", 0.0, traj.phases[0]);
  os << buf;
  for (std::size_t k = 0; k < traj.jump_times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", traj.jump_times[k], traj.phases[k + 1]);
    os << buf;
  }
}

struct DumpedTrajectory {
  Trajectory traj;
  double tau0 = 0.0;
  std::uint64_t seed = 0;
};

inline DumpedTrajectory parse_trajectory(std::istream& is) {
  DumpedTrajectory out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# tau0=", 0) != 0)
    throw std::runtime_error("parse_trajectory: missing header line");
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "# tau0=%lg seed=%llu horizon=%lg", &out.tau0, &seed,
                  &out.traj.horizon) != 3)
    throw std::runtime_error("parse_trajectory: malformed header line");
  out.seed = seed;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double t = 0.0, phi = 0.0;
    if (std::sscanf(line.c_str(), "%lg\t%lg", &t, &phi) != 2)
      throw std::runtime_error("parse_trajectory: malformed segment line");
    if (first) {
      if (t != 0.0) throw std::runtime_error("parse_trajectory: first segment must start at 0");
      first = false;
    } else {
      out.traj.jump_times.push_back(t);
    }
    out.traj.phases.push_back(phi);
  }
  if (first) throw std::runtime_error("parse_trajectory: no segments");
  out.traj.validate();
  return out;
}

}  // namespace tmodes
