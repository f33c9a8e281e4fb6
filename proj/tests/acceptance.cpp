// Full-scale acceptance suite. Each case runs one cross-validation check at
// production ensemble sizes (no --quick reductions), prints the same report
// line the `verify` subcommand would, and fails the binary if the check fails.
#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <iostream>

#include "tmodes/verify.hpp"

namespace {

void report(const tmodes::CheckResult& r) {
  char line[160];
  std::snprintf(line, sizeof line, "[%s] %-32s measured=%-12.6g tol=%-12.6g (%.2f s)",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.tolerance, r.seconds);
  std::cout << line << std::endl;
  if (!r.detail.empty()) std::cout << "       " << r.detail << std::endl;
  INFO(r.name << " | measured=" << r.measured << " tol=" << r.tolerance << " | " << r.detail);
  REQUIRE(r.pass);
}

}  // namespace

TEST_CASE("Laplace inversion reproduces the closed-form occupation") {
  report(tmodes::check_laplace_crosscheck(false));
}

TEST_CASE("Monte Carlo ensemble matches the closed form within statistics") {
  report(tmodes::check_mc_vs_closed(false, 0));
}

TEST_CASE("integral-equation solver converges at its design order") {
  report(tmodes::check_renewal_convergence(false));
}

TEST_CASE("closed form satisfies the integral equation it was derived from") {
  report(tmodes::check_closed_solves_renewal(false));
}

TEST_CASE("occupation envelope is continuous across the regime boundary") {
  report(tmodes::check_regime_boundary(false));
}

TEST_CASE("rare-jump limit reduces to coherent two-mode oscillation") {
  report(tmodes::check_coherent_limit(false));
}

TEST_CASE("frozen reference values and canonical tables reproduce") {
  report(tmodes::check_frozen_and_figures(false, 0));
}

TEST_CASE("conservation and bitwise determinism hold at full scale") {
  report(tmodes::check_conservation_determinism(false, 0));
}

TEST_CASE("cross-validation detects a deliberately injected defect") {
  report(tmodes::check_mutation_detector(false, 0));
}
