#pragma once

#include <ostream>
#include <string>

#include "dmnls/solve.hpp"

namespace dmnls {

/// Run configuration after merging defaults <- config file <- flags.
struct CliConfig {
  int n = 128;
  double length = 40.0;
  int m = 32;
  ModelParams model;
  SolverOptions solver;
  std::string out = ".";
  unsigned threads = 0;
};

/// Sets one key (n, length, m, dav, p, lambda, max_iters, step0, backtrack,
/// grad_tol, energy_floor, seed, out, threads). Throws std::invalid_argument on
/// unknown keys or unparsable values.
void apply_config_entry(CliConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; blank lines and '#' comments are skipped.
void apply_config_text(CliConfig& cfg, const std::string& text);

/// Entry point of the dmnls tool. Returns 0 on success, 1 on usage or
/// configuration errors and 2 when a verification fails.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dmnls
