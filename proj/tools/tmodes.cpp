// tmodes: two linearly coupled bosonic modes whose coupling phase is a
// random-telegraph process. Subcommands evaluate the closed-form ensemble
// occupation (analytic), Monte Carlo trajectory averages (simulate), the
// integral-equation solution (renewal), regime sweeps (sweep), canonical
// figure tables (figure), and the cross-validation suite (verify).

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tmodes/config.hpp"
#include "tmodes/figures.hpp"
#include "tmodes/runners.hpp"
#include "tmodes/verify.hpp"

namespace {

std::string timestamp_iso8601() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> parse_probes(const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) {
    try {
      out.push_back(tmodes::detail::parse_num("probes", tok));
    } catch (const tmodes::ConfigError&) {
      throw tmodes::ConfigError("probes must be a comma-separated list of numbers, got '" + s + "'");
    }
  }
  if (out.empty()) throw tmodes::ConfigError("probes must be non-empty");
  return out;
}

int write_series(const tmodes::RunConfig& cfg, tmodes::CsvSeries series) {
  if (!cfg.no_timestamp)
    series.metadata.insert(series.metadata.begin(), {"generated", timestamp_iso8601()});
  if (cfg.out.empty()) {
    tmodes::write_csv(std::cout, series);
    return 0;
  }
  std::ofstream f(cfg.out);
  if (!f) {
    std::cerr << "error: cannot write output file: " << cfg.out << "\n";
    return 2;
  }
  tmodes::write_csv(f, series);
  if (!f.good()) {
    std::cerr << "error: write failed for output file: " << cfg.out << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using tmodes::Command;
  using tmodes::ConfigError;
  using tmodes::RunConfig;

  CLI::App app{
      "two coupled bosonic modes with random-telegraph coupling-phase noise:\n"
      "closed-form, Monte Carlo, and integral-equation ensemble dynamics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "print help and exit");  // frees -h/--h for the step size

  RunConfig cfg;

  // the config-file keys, accepted as flags (flags > file > defaults)
  const std::vector<std::string> keys = {"g0",   "tau0",        "na0",      "nb0",
                                         "rho12_0", "t_max",    "grid_points",
                                         "ensemble", "seed",    "order",    "h"};
  std::vector<std::string> flag_vals(keys.size());
  std::vector<CLI::Option*> flag_opts(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    flag_opts[i] = app.add_option("--" + keys[i], flag_vals[i]);

  std::string config_path, out_path;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_path, "output file (default: stdout)");
  bool quick = false, no_timestamp = false;
  app.add_flag("--quick", quick, "reduced ensemble, widened statistical gates");
  app.add_flag("--no-timestamp", no_timestamp, "omit the generated-at header line");
  unsigned workers = 0;
  app.add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI::App* c_analytic = app.add_subcommand("analytic", "closed-form mean occupations");
  CLI::App* c_simulate = app.add_subcommand("simulate", "Monte Carlo ensemble averages");
  CLI::App* c_renewal = app.add_subcommand("renewal", "integral-equation solution");
  CLI::App* c_verify = app.add_subcommand("verify", "cross-validation suite");
  CLI::App* c_sweep = app.add_subcommand("sweep", "regime sweep table");
  CLI::App* c_figure = app.add_subcommand("figure", "canonical figure tables");

  std::string figure_id;
  c_figure->add_option("id", figure_id, "fig2 | fig3 | fig4")->required();

  std::string sweep_param = "g0tau0", probes_str;
  double sweep_min = 0.01, sweep_max = 10.0;
  std::size_t sweep_count = 50;
  bool sweep_log = true;
  c_sweep->add_option("--param", sweep_param, "swept parameter: g0tau0 | tau0");
  c_sweep->add_option("--min", sweep_min, "sweep start");
  c_sweep->add_option("--max", sweep_max, "sweep end");
  c_sweep->add_option("--count", sweep_count, "number of sweep points (>= 2)");
  c_sweep->add_flag("--log,!--linear", sweep_log, "log or linear spacing");
  c_sweep->add_option("--probes", probes_str, "comma-separated probe times in T = g0*t");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file: " + config_path);
      for (const auto& [k, v] : tmodes::parse_config_file(f)) tmodes::apply_kv(cfg, k, v);
    }
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (flag_opts[i]->count() > 0) tmodes::apply_kv(cfg, keys[i], flag_vals[i]);

    if (c_analytic->parsed()) cfg.command = Command::analytic;
    if (c_simulate->parsed()) cfg.command = Command::simulate;
    if (c_renewal->parsed()) cfg.command = Command::renewal;
    if (c_verify->parsed()) cfg.command = Command::verify;
    if (c_sweep->parsed()) cfg.command = Command::sweep;
    if (c_figure->parsed()) cfg.command = Command::figure;

    cfg.out = out_path;
    cfg.quick = quick;
    cfg.no_timestamp = no_timestamp;
    cfg.workers = workers;
    cfg.figure_id = figure_id;
    cfg.sweep.param = sweep_param;
    cfg.sweep.min = sweep_min;
    cfg.sweep.max = sweep_max;
    cfg.sweep.count = sweep_count;
    cfg.sweep.log = sweep_log;
    if (!probes_str.empty()) cfg.sweep.probes = parse_probes(probes_str);

    cfg.validate();

    switch (cfg.command) {
      case Command::verify: {
        const auto results = tmodes::run_acceptance(cfg.quick, cfg.workers);
        bool ok;
        if (cfg.out.empty()) {
          ok = tmodes::print_report(std::cout, results);
        } else {
          std::ofstream f(cfg.out);
          if (!f) {
            std::cerr << "error: cannot write output file: " << cfg.out << "\n";
            return 2;
          }
          ok = tmodes::print_report(f, results);
        }
        return ok ? 0 : 1;
      }
      case Command::analytic:
        return write_series(cfg, tmodes::analytic_series(cfg));
      case Command::simulate:
        return write_series(cfg, tmodes::simulate_series(cfg, cfg.workers));
      case Command::renewal:
        return write_series(cfg, tmodes::renewal_series(cfg));
      case Command::sweep:
        return write_series(cfg, tmodes::sweep_series(cfg));
      case Command::figure:
        return write_series(cfg, tmodes::figure_series(cfg.figure_id, cfg.grid_points));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
