#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spt::cli {

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2, solver_failure = 3 };

struct RunConfig {
  std::string command;  // solve | converge | list | verify | fixture
  std::string problem = "ex1";
  int n_deg = 8;
  int m_deg = 7;
  std::string elements = "auto";
  std::string solver = "direct";
  double tol = 1e-12;
  int max_iter = 1000;
  std::vector<int> sweep_n;
  std::vector<int> sweep_m;
  std::string reference = "exact";
  std::string output;  // empty: standard output
  std::string format = "csv";
  std::string dump_coeffs;
  std::string dump_system;
  int threads = -1;  // -1: OpenMP default, 0: sequential

  std::set<std::string> given;  // flags that appeared on the command line
  bool has(const std::string& flag) const { return given.count(flag) != 0; }
};

/// Parses arguments (without the program name). Throws ConfigError.
RunConfig parse_args(const std::vector<std::string>& args);

/// Rejects inconsistent flag combinations, naming the offending pair.
/// Throws ConfigError.
void validate(const RunConfig& config);

/// Reads SPECTRAL_TRANSPORT_THREADS; -1 when unset. Throws ConfigError.
int threads_from_env();

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + validate + run with exit-code mapping.
int invoke(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spt::cli
