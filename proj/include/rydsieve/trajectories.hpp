#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rydsieve/params.hpp"
#include "rydsieve/rate_table.hpp"

namespace rydsieve {

// Deterministic per-trajectory seeding: trajectory i uses an engine seeded
// with mix_seed(master, i), so results do not depend on how trajectories
// are distributed over worker threads.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// Draw order inside one trajectory is part of the reproducibility
// contract: (1) initial atom number, (2) one standard normal for the
// detuning shift (drawn even when sigma = 0), (3) one uniform per decay.
int sample_initial_n(std::mt19937_64& rng, double nbar);
double sample_laser_shift(std::mt19937_64& rng, double sigma);

// One jump trajectory: starting from n0 atoms, dwell at occupancy n for an
// Exponential(Gamma(n, delta_l)) time, then lose one atom.  Stops at the
// horizon, at n = 0, or when the current rate is zero (fully protected).
struct TrajectoryRecord {
  int initial_n = 0;
  double delta_l = 0.0;
  std::vector<double> event_times;  // strictly increasing loss times
  int final_n = 0;
  bool failed = false;
  std::string failure;

  // Atom number just after time t (right continuous).
  int n_at(double t) const;
};

TrajectoryRecord sample_trajectory(const LossRateTable& table, int n0,
                                   double delta_l, std::mt19937_64& rng,
                                   double horizon);

struct EnsembleTimeSeries {
  std::vector<double> times;
  std::vector<double> mean_n;
  std::vector<double> var_n;  // >= 0
  std::vector<double> fano;   // var/mean, NaN where mean = 0
  int trajectory_count = 0;   // attempted
  int failures = 0;
  long clamped_draws = 0;  // detuning draws outside the table grid
  std::uint64_t master_seed = 0;
};

struct RunConfig {
  PhysicalParams params;
  NoiseModel noise;
  int trajectories = 0;
  double horizon = 0.0;  // s
  double dt_out = 0.0;   // s
  std::uint64_t seed = 0;
  int n_cap = 0;  // largest atom number simulated; higher draws fail
  int delta_l_grid_points = 17;
  QuasiSteadyOptions solver;
  int threads = 1;
};

struct EnsembleResult {
  EnsembleTimeSeries series;
  std::vector<TrajectoryRecord> records;
};

// Builds the loss-rate table for the configured noise width, then runs the
// ensemble.  The overload taking a table skips the build; trajectories
// whose initial draw exceeds min(n_cap, table n_max) are recorded as
// failures and excluded from the statistics.
EnsembleResult run_ensemble(const RunConfig& cfg);
EnsembleResult run_ensemble(const RunConfig& cfg, const LossRateTable& table);

// First output time at which the ensemble mean has come within eps of
// n_target from above.  Throws SolverError when the horizon is too short.
double stabilization_time(const EnsembleTimeSeries& series, int n_target,
                          double eps = 0.1);

struct Histogram {
  std::vector<int> n;
  std::vector<double> p_empirical;
  std::vector<double> p_poisson;  // same mean as the empirical column
  double mean = 0.0;
};

// Atom-number distribution across non-failed trajectories at time t,
// alongside the Poisson distribution of equal mean.  Rows cover both
// supports; each column sums to 1 within 1e-12.
Histogram histogram_at(const std::vector<TrajectoryRecord>& records, double t);

struct SweepPoint {
  double sigma = 0.0;
  double min_var = 0.0;
  double t_min = 0.0;
  double fano_min = 0.0;
  EnsembleTimeSeries series;
};

// Runs one ensemble per noise width against a shared rate table built on
// the union of the per-sigma detuning grids.  All runs reuse cfg.seed, so
// a single-sigma sweep reproduces run_ensemble exactly.
std::vector<SweepPoint> noise_sweep(const RunConfig& cfg,
                                    const std::vector<double>& sigmas);

}
