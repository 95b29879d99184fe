#pragma once

#include <stdexcept>
#include <string>

namespace rydsieve {

// Malformed or inconsistent user input (config files, CLI arguments).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to converge or hit its horizon.  Carries
// enough context to tell which cell of a batch job went wrong.
struct SolverError : std::runtime_error {
  double t_reached = 0.0;
  int atom_count = -1;
  double delta_l = 0.0;

  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
  SolverError(const std::string& msg, double t, int n, double dl)
      : std::runtime_error(msg), t_reached(t), atom_count(n), delta_l(dl) {}
};

// A request exceeds a hard resource bound (e.g. brute-force model size).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}
