#pragma once
#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "params.hpp"

// Run configuration: defaults, overlaid by a `key = value` config file,
// overlaid by command-line flags (flags > file > defaults). Every error names
// the offending key.

namespace tmodes {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Command { analytic, simulate, renewal, verify, sweep, figure };

inline Command parse_command(const std::string& s) {
  if (s == "analytic") return Command::analytic;
  if (s == "simulate") return Command::simulate;
  if (s == "renewal") return Command::renewal;
  if (s == "verify") return Command::verify;
  if (s == "sweep") return Command::sweep;
  if (s == "figure") return Command::figure;
  throw ConfigError("unknown command '" + s +
                    "' (expected analytic|simulate|renewal|verify|sweep|figure)");
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::analytic: return "analytic";
    case Command::simulate: return "simulate";
    case Command::renewal: return "renewal";
    case Command::verify: return "verify";
    case Command::sweep: return "sweep";
    case Command::figure: return "figure";
  }
  return "?";
}

struct SweepSpec {
  std::string param = "g0tau0";  // "g0tau0" or "tau0"
  double min = 0.01;
  double max = 10.0;
  std::size_t count = 50;
  bool log = true;
  std::vector<double> probes{2.0, 10.0};  // in T = g0*t units

  void validate() const {
    if (param != "g0tau0" && param != "tau0")
      throw ConfigError("sweep param must be 'g0tau0' or 'tau0', got '" + param + "'");
    if (count < 2) throw ConfigError("sweep count must be >= 2, got " + std::to_string(count));
    if (!(min < max)) throw ConfigError("sweep min must be < max");
    if (log && !(min > 0.0)) throw ConfigError("sweep min must be > 0 for log spacing");
    if (!(min > 0.0)) throw ConfigError("sweep min must be > 0 (it scales tau0)");
    if (probes.empty()) throw ConfigError("sweep probes must be non-empty");
    for (double p : probes)
      if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("sweep probes must be finite and >= 0");
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double u = double(i) / double(count - 1);
      v[i] = log ? min * std::pow(max / min, u) : min + u * (max - min);
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

struct RunConfig {
  Command command = Command::analytic;

  // the 11 config-file keys
  double g0 = 1.0;
  double tau0 = 1.0;
  double na0 = 0.0;
  double nb0 = 2.0;
  double rho12_0 = 0.0;
  std::optional<double> t_max;   // default 20/g0
  std::size_t grid_points = 400;
  std::size_t ensemble = 10000;
  std::uint64_t seed = 42;
  int order = 32;                // Laplace inversion order
  std::optional<double> h;       // renewal step, default min(tau0, 1/g0)/40

  // command-line-only controls
  std::string out;          // empty -> stdout
  std::string config_path;  // empty -> none
  bool quick = false;
  bool no_timestamp = false;
  unsigned workers = 0;  // 0 -> hardware concurrency
  std::string figure_id;  // fig2|fig3|fig4
  SweepSpec sweep;

  double resolved_t_max() const { return t_max ? *t_max : 20.0 / g0; }
  double resolved_h() const { return h ? *h : std::min(tau0, 1.0 / g0) / 40.0; }

  SimParams to_sim_params() const {
    SimParams p;
    p.g0 = g0;
    p.tau0 = tau0;
    p.na0 = na0;
    p.nb0 = nb0;
    p.ensemble = ensemble;
    p.base_seed = seed;
    if (rho12_0 != 0.0) {
      const double N = na0 + nb0;
      if (!(N > 0.0))
        throw ConfigError("rho12_0 requires na0 + nb0 > 0 to define a unit-trace state");
      p.rho0 = Complex2x2{cplx(na0 / N, 0.0), cplx(rho12_0, 0.0), cplx(rho12_0, 0.0),
                          cplx(nb0 / N, 0.0)};
    }
    p.t_grid = uniform_grid(resolved_t_max(), grid_points);
    try {
      p.validate();
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
    return p;
  }

  void validate() const {
    if (!(g0 > 0.0) || !std::isfinite(g0)) throw ConfigError("g0 must be finite and > 0");
    if (t_max && (!(*t_max > 0.0) || !std::isfinite(*t_max)))
      throw ConfigError("t_max must be finite and > 0");
    if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
    if (h && !(*h > 0.0)) throw ConfigError("h must be > 0");
    if (order < 8 || order % 2 != 0) throw ConfigError("order must be even and >= 8");
    (void)to_sim_params();
    if (command == Command::sweep) sweep.validate();
    if (command == Command::figure && figure_id != "fig2" && figure_id != "fig3" &&
        figure_id != "fig4")
      throw ConfigError("figure id must be fig2|fig3|fig4, got '" + figure_id + "'");
  }
};

namespace detail {

inline double parse_num(const std::string& key, const std::string& value) {
  const char* p = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(p, &end);
  if (end == p || *end != '\0')
    throw ConfigError("non-numeric value for key '" + key + "': '" + value + "'");
  return v;
}

inline unsigned long long parse_uint(const std::string& key, const std::string& value) {
  // plain decimal integer
  {
    const char* p = value.c_str();
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(p, &end, 10);
    if (end != p && *end == '\0' && errno == 0 && value[0] != '-') return v;
  }
  // otherwise accept an exactly-integral numeric form like 1e4
  const double d = parse_num(key, value);
  if (!(d >= 0.0) || d != std::floor(d) || d > 9.0e15)
    throw ConfigError("key '" + key + "' needs a non-negative integer, got '" + value + "'");
  return static_cast<unsigned long long>(d);
}

}  // namespace detail

// apply one key=value pair (config-file vocabulary) onto a RunConfig
inline void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "g0") cfg.g0 = detail::parse_num(key, value);
  else if (key == "tau0") cfg.tau0 = detail::parse_num(key, value);
  else if (key == "na0") cfg.na0 = detail::parse_num(key, value);
  else if (key == "nb0") cfg.nb0 = detail::parse_num(key, value);
  else if (key == "rho12_0") cfg.rho12_0 = detail::parse_num(key, value);
  else if (key == "t_max") cfg.t_max = detail::parse_num(key, value);
  else if (key == "grid_points") cfg.grid_points = static_cast<std::size_t>(detail::parse_uint(key, value));
  else if (key == "ensemble") cfg.ensemble = static_cast<std::size_t>(detail::parse_uint(key, value));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_uint(key, value));
  else if (key == "order") {
    const auto v = detail::parse_uint(key, value);
    if (v > 100000) throw ConfigError("key 'order' unreasonably large");
    cfg.order = static_cast<int>(v);
  } else if (key == "h") cfg.h = detail::parse_num(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

// parse a `key = value` config file; '#' starts a comment, blank lines skipped
inline std::vector<std::pair<std::string, std::string>> parse_config_file(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> kvs;
  std::string line;
  auto trim = [](std::string t) {
    const char* ws = " \t\r\n";
    const auto b = t.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const auto e = t.find_last_not_of(ws);
    return t.substr(b, e - b + 1);
  };
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not 'key = value': '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has empty key");
    kvs.emplace_back(key, value);
  }
  return kvs;
}

// resolved-parameter echo for output headers (sorted, deterministic; excludes
// execution-only controls like worker count so outputs stay byte-identical)
inline std::vector<std::pair<std::string, std::string>> metadata_echo(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> m;
  m.emplace_back("command", command_name(cfg.command));
  m.emplace_back("ensemble", std::to_string(cfg.ensemble));
  m.emplace_back("g0", format_double(cfg.g0));
  m.emplace_back("grid_points", std::to_string(cfg.grid_points));
  m.emplace_back("h", format_double(cfg.resolved_h()));
  m.emplace_back("na0", format_double(cfg.na0));
  m.emplace_back("nb0", format_double(cfg.nb0));
  m.emplace_back("order", std::to_string(cfg.order));
  m.emplace_back("rho12_0", format_double(cfg.rho12_0));
  m.emplace_back("seed", std::to_string(cfg.seed));
  m.emplace_back("t_max", format_double(cfg.resolved_t_max()));
  m.emplace_back("tau0", format_double(cfg.tau0));
  return m;
}

}  // namespace tmodes
