#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rydsieve/params.hpp"
#include "rydsieve/steady_state.hpp"

namespace rydsieve {

// Monotone (Fritsch-Carlson) cubic Hermite interpolation.  Shape
// preserving: never overshoots the data, so nonnegative samples give a
// nonnegative interpolant.  Queries outside the grid clamp to the ends.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  const std::vector<double>& knots() const { return x_; }

 private:
  std::vector<double> x_, y_, d_;  // nodes, values, node slopes
};

struct RateTableInfo {
  std::string version;
  std::uint64_t params_hash = 0;
  QuasiSteadyOptions solver;
};

// Collective loss rates Gamma(n, delta_l) tabulated on a detuning grid for
// n = 1..n_max, with monotone cubic interpolation between grid points.
// Invariant (checked at build time): at delta_l = 0 the rate at n_target
// does not exceed any other tabulated rate.
class LossRateTable {
 public:
  int n_target = 0;
  int n_max = 0;
  std::vector<double> delta_l_grid;  // sorted, contains 0
  Eigen::MatrixXd rates;             // row n-1, column = grid index, 1/s
  RateTableInfo info;

  // Gamma(n, delta_l); n = 0 is 0 by convention.  delta_l outside the
  // grid clamps to the nearest end.
  double rate(int n, double delta_l) const;
  bool clamps(double delta_l) const;

  void finalize();  // rebuilds interpolants after rates are filled

 private:
  std::vector<MonotoneCubic> interp_;
};

// Symmetric detuning grid: `points` odd and >= 9 (or exactly 1 when
// sigma = 0), spanning +-4 sigma, always containing 0.
std::vector<double> make_delta_l_grid(double sigma, int points);

// Sorted union of several grids with exact-duplicate removal.
std::vector<double> merge_grids(const std::vector<std::vector<double>>& grids);

LossRateTable build_rate_table(const PhysicalParams& params, int n_max,
                               const std::vector<double>& delta_l_grid,
                               const QuasiSteadyOptions& opts = {},
                               int threads = 1);

// One row per (n, grid point): "n,delta_l_hz,gamma_n_per_s".
void write_rate_table_csv(const LossRateTable& table, std::ostream& out);
LossRateTable read_rate_table_csv(std::istream& in);

}
