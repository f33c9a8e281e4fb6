#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "tmodes/config.hpp"
#include "tmodes/csv.hpp"

using namespace tmodes;

TEST_CASE("CSV tables round-trip through text exactly") {
  CsvSeries s;
  s.metadata = {{"g0", "1.5"}, {"note", "curve 'x' uses y = 3"}};
  s.columns = {"t", "na", "nb"};
  s.rows = {{0.0, 0.1234567890123456789, 2.0},
            {0.3333333333333333, 1.0 / 3.0, std::exp(1.0)},
            {7.25, -1e-300, 1e300}};
  std::ostringstream os;
  write_csv(os, s);

  std::istringstream is(os.str());
  const CsvSeries back = parse_csv(is);
  REQUIRE(back.metadata == s.metadata);
  REQUIRE(back.columns == s.columns);
  REQUIRE(back.rows == s.rows);  // %.17g makes doubles round-trip bit-exactly
  REQUIRE(rows_equal(back.rows, s.rows));
}

TEST_CASE("CSV structural validation") {
  CsvSeries s;
  s.columns = {"t", "v"};
  s.rows = {{0.0, 1.0}, {1.0}};
  REQUIRE_THROWS_AS(s.validate(), std::domain_error);  // ragged
  s.rows = {{1.0, 0.0}, {1.0, 2.0}};
  REQUIRE_THROWS_AS(s.validate(), std::domain_error);  // non-increasing time
  s.rows = {{0.0, 1.0}, {1.0, 2.0}};
  REQUIRE_NOTHROW(s.validate());
  CsvSeries empty;
  REQUIRE_THROWS_AS(empty.validate(), std::domain_error);

  REQUIRE(s.col("v") == 1);
  REQUIRE_THROWS_AS(s.col("missing"), std::domain_error);
}

TEST_CASE("CSV parser rejects malformed numeric rows") {
  {
    std::istringstream is("t,v\n0,1\nbogus,2\n");
    REQUIRE_THROWS_AS(parse_csv(is), std::domain_error);
  }
  {
    std::istringstream is("t,v\n0,1 junk\n");
    REQUIRE_THROWS_AS(parse_csv(is), std::domain_error);
  }
  {
    std::istringstream is("# only = metadata\n");
    REQUIRE_THROWS_AS(parse_csv(is), std::domain_error);  // no header
  }
}

TEST_CASE("NaN cells survive the round trip and compare NaN-aware") {
  CsvSeries s;
  s.columns = {"q", "rate"};
  s.rows = {{0.1, 0.25}, {0.5, std::nan("")}};
  std::ostringstream os;
  write_csv(os, s);
  std::istringstream is(os.str());
  const CsvSeries back = parse_csv(is);
  REQUIRE(std::isnan(back.rows[1][1]));
  REQUIRE(rows_equal(back.rows, s.rows));  // NaN == NaN under rows_equal
  REQUIRE(back.rows != s.rows);            // but not under operator==

  auto other = s.rows;
  other[0][1] = 0.25 + 1e-9;
  REQUIRE(!rows_equal(s.rows, other));
  REQUIRE(rows_equal(s.rows, other, 1e-8));
}

TEST_CASE("17-digit formatting") {
  REQUIRE(format_double(0.1) == "0.10000000000000001");
  REQUIRE(format_double(2.0) == "2");
  REQUIRE(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("every config key applies, unknown keys are named") {
  RunConfig cfg;
  apply_kv(cfg, "g0", "2.5");
  apply_kv(cfg, "tau0", "0.4");
  apply_kv(cfg, "na0", "0.5");
  apply_kv(cfg, "nb0", "1.5");
  apply_kv(cfg, "rho12_0", "0.25");
  apply_kv(cfg, "t_max", "12");
  apply_kv(cfg, "grid_points", "101");
  apply_kv(cfg, "ensemble", "1e4");
  apply_kv(cfg, "seed", "123456789012345");
  apply_kv(cfg, "order", "48");
  apply_kv(cfg, "h", "0.005");
  REQUIRE(cfg.g0 == 2.5);
  REQUIRE(cfg.tau0 == 0.4);
  REQUIRE(cfg.na0 == 0.5);
  REQUIRE(cfg.nb0 == 1.5);
  REQUIRE(cfg.rho12_0 == 0.25);
  REQUIRE(cfg.t_max == 12.0);
  REQUIRE(cfg.grid_points == 101);
  REQUIRE(cfg.ensemble == 10000);  // scientific-notation integer accepted
  REQUIRE(cfg.seed == 123456789012345ULL);
  REQUIRE(cfg.order == 48);
  REQUIRE(cfg.h == 0.005);

  REQUIRE_THROWS_WITH(apply_kv(cfg, "gamma", "1"),
                      Catch::Matchers::ContainsSubstring("gamma"));
  REQUIRE_THROWS_WITH(apply_kv(cfg, "tau0", "abc"),
                      Catch::Matchers::ContainsSubstring("tau0"));
  REQUIRE_THROWS_WITH(apply_kv(cfg, "ensemble", "-5"),
                      Catch::Matchers::ContainsSubstring("ensemble"));
  REQUIRE_THROWS_AS(apply_kv(cfg, "ensemble", "2.5"), ConfigError);
  REQUIRE_THROWS_AS(apply_kv(cfg, "order", "1e9"), ConfigError);
}

TEST_CASE("a negative relaxation scale is rejected naming the key") {
  RunConfig cfg;
  apply_kv(cfg, "tau0", "-1");
  REQUIRE_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("tau0"));
}

TEST_CASE("defaults: the empty configuration is runnable") {
  const RunConfig cfg;
  REQUIRE(cfg.command == Command::analytic);
  REQUIRE(cfg.g0 == 1.0);
  REQUIRE(cfg.tau0 == 1.0);
  REQUIRE(cfg.na0 == 0.0);
  REQUIRE(cfg.nb0 == 2.0);
  REQUIRE(cfg.ensemble == 10000);
  REQUIRE(cfg.grid_points == 400);
  REQUIRE(cfg.seed == 42);
  REQUIRE(cfg.resolved_t_max() == 20.0);  // 20 / g0
  REQUIRE(cfg.resolved_h() == 1.0 / 40.0);
  REQUIRE_NOTHROW(cfg.validate());

  RunConfig fast = cfg;
  fast.g0 = 4.0;
  REQUIRE(fast.resolved_t_max() == 5.0);
  REQUIRE(fast.resolved_h() == 0.25 / 40.0);
  fast.t_max = 7.0;
  fast.h = 0.001;
  REQUIRE(fast.resolved_t_max() == 7.0);
  REQUIRE(fast.resolved_h() == 0.001);
}

TEST_CASE("config files: comments, whitespace, and line-numbered errors") {
  std::istringstream is(
      "# full-line comment\n"
      "\n"
      "g0 = 1.5   # trailing comment\n"
      "  tau0=0.25\n"
      "seed = 7\n");
  const auto kvs = parse_config_file(is);
  REQUIRE(kvs.size() == 3);
  REQUIRE(kvs[0] == std::pair<std::string, std::string>("g0", "1.5"));
  REQUIRE(kvs[1] == std::pair<std::string, std::string>("tau0", "0.25"));
  REQUIRE(kvs[2] == std::pair<std::string, std::string>("seed", "7"));

  std::istringstream bad("g0 = 1\nnot a kv line\n");
  REQUIRE_THROWS_WITH(parse_config_file(bad), Catch::Matchers::ContainsSubstring("line 2"));
  std::istringstream anon("= 3\n");
  REQUIRE_THROWS_AS(parse_config_file(anon), ConfigError);
}

TEST_CASE("file values apply before flag values") {
  // precedence is ordering: defaults, then file pairs, then flag pairs
  RunConfig cfg;
  std::istringstream file("g0 = 1.0\ntau0 = 5\n");
  for (const auto& [k, v] : parse_config_file(file)) apply_kv(cfg, k, v);
  apply_kv(cfg, "tau0", "0.1");  // flag wins
  REQUIRE(cfg.g0 == 1.0);
  REQUIRE(cfg.tau0 == 0.1);
}

TEST_CASE("sweep specification validation and value grids") {
  SweepSpec sw;
  REQUIRE_NOTHROW(sw.validate());  // defaults: g0tau0, [0.01, 10], 50 log pts

  auto v = sw.values();
  REQUIRE(v.size() == 50);
  REQUIRE(v.front() == 0.01);
  REQUIRE(v.back() == 10.0);
  for (std::size_t i = 1; i < v.size(); ++i) REQUIRE(v[i] > v[i - 1]);
  // log spacing: constant successive ratio
  const double r0 = v[1] / v[0];
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    REQUIRE(std::fabs(v[i + 1] / v[i] - r0) <= 1e-12 * r0);

  sw.log = false;
  auto lin = sw.values();
  const double d0 = lin[1] - lin[0];
  for (std::size_t i = 1; i + 1 < lin.size(); ++i)
    REQUIRE(std::fabs(lin[i + 1] - lin[i] - d0) <= 1e-12);

  SweepSpec bad = sw;
  bad.count = 1;
  REQUIRE_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("count"));
  bad = sw;
  bad.param = "g0";
  REQUIRE_THROWS_AS(bad.validate(), ConfigError);
  bad = sw;
  bad.min = 5.0;
  bad.max = 1.0;
  REQUIRE_THROWS_AS(bad.validate(), ConfigError);
  bad = sw;
  bad.min = -1.0;
  REQUIRE_THROWS_AS(bad.validate(), ConfigError);
  bad = sw;
  bad.probes.clear();
  REQUIRE_THROWS_AS(bad.validate(), ConfigError);
  bad = sw;
  bad.probes = {-2.0};
  REQUIRE_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("simulation parameters derived from a configuration") {
  RunConfig cfg;
  cfg.grid_points = 11;
  const SimParams p = cfg.to_sim_params();
  REQUIRE(p.g0 == 1.0);
  REQUIRE(p.t_grid.size() == 11);
  REQUIRE(p.t_grid.front() == 0.0);
  REQUIRE(p.t_grid.back() == 20.0);
  REQUIRE(!p.rho0.has_value());  // diagonal start needs no explicit state

  cfg.rho12_0 = 0.25;
  cfg.na0 = 0.5;
  cfg.nb0 = 1.5;
  const SimParams pr = cfg.to_sim_params();
  REQUIRE(pr.rho0.has_value());
  REQUIRE(pr.rho0->e11 == cplx{0.25, 0.0});
  REQUIRE(pr.rho0->e12 == cplx{0.25, 0.0});
  REQUIRE(pr.rho0->e22 == cplx{0.75, 0.0});

  cfg.na0 = 0.0;
  cfg.nb0 = 0.0;
  REQUIRE_THROWS_AS(cfg.to_sim_params(), ConfigError);

  RunConfig neg;
  neg.na0 = -1.0;
  REQUIRE_THROWS_AS(neg.to_sim_params(), ConfigError);  // rethrown as config error
}

TEST_CASE("run configuration validation") {
  RunConfig cfg;
  cfg.order = 7;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.order = 9;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.order = 32;
  cfg.grid_points = 1;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.grid_points = 400;
  cfg.t_max = -2.0;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.t_max.reset();
  cfg.h = 0.0;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.h.reset();
  cfg.command = Command::figure;
  cfg.figure_id = "fig9";
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.figure_id = "fig3";
  REQUIRE_NOTHROW(cfg.validate());
  cfg.command = Command::sweep;
  cfg.sweep.count = 1;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("command names round-trip") {
  for (const char* name : {"analytic", "simulate", "renewal", "verify", "sweep", "figure"})
    REQUIRE(std::string(command_name(parse_command(name))) == name);
  REQUIRE_THROWS_AS(parse_command("plot"), ConfigError);
}

TEST_CASE("metadata echo is sorted, complete, and worker-independent") {
  RunConfig cfg;
  cfg.workers = 3;
  const auto echo = metadata_echo(cfg);
  RunConfig other = cfg;
  other.workers = 16;
  REQUIRE(metadata_echo(other) == echo);  // execution controls excluded

  REQUIRE(echo.front().first == "command");
  for (std::size_t i = 2; i < echo.size(); ++i) REQUIRE(echo[i - 1].first < echo[i].first);
  auto has = [&](const std::string& k) {
    for (const auto& [key, val] : echo)
      if (key == k) return true;
    return false;
  };
  for (const char* k : {"g0", "tau0", "na0", "nb0", "rho12_0", "t_max", "grid_points",
                        "ensemble", "seed", "order", "h"})
    REQUIRE(has(k));
}
