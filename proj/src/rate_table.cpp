#include "rydsieve/rate_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rydsieve/basis.hpp"
#include "rydsieve/errors.hpp"
#include "rydsieve/hashing.hpp"
#include "rydsieve/units.hpp"
#include "rydsieve/version.hpp"
#include "parallel.hpp"

namespace rydsieve {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  std::size_t n = x_.size();
  if (n == 0 || n != y_.size())
    throw std::invalid_argument("interpolation needs matching nonempty data");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("interpolation nodes must be increasing");
  d_.assign(n, 0.0);
  if (n == 1) return;

  std::vector<double> h(n - 1), slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    slope[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = slope[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      double w1 = 2.0 * h[i] + h[i - 1];
      double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  auto edge = [](double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return d;
  };
  d_[0] = edge(h[0], h[1], slope[0], slope[1]);
  d_[n - 1] = edge(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
  if (x_.size() == 1) return y_[0];
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  std::size_t hi =
      std::size_t(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  std::size_t lo = hi - 1;
  double h = x_[hi] - x_[lo];
  double t = (x - x_[lo]) / h;
  double t2 = t * t, t3 = t2 * t;
  return y_[lo] * (2.0 * t3 - 3.0 * t2 + 1.0) +
         h * d_[lo] * (t3 - 2.0 * t2 + t) + y_[hi] * (-2.0 * t3 + 3.0 * t2) +
         h * d_[hi] * (t3 - t2);
}

std::vector<double> make_delta_l_grid(double sigma, int points) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (sigma == 0.0) return {0.0};
  if (points < 9 || points % 2 == 0)
    throw std::invalid_argument("detuning grid needs an odd point count >= 9");
  std::vector<double> grid(static_cast<std::size_t>(points));
  double span = 4.0 * sigma;
  for (int k = 0; k < points; ++k)
    grid[std::size_t(k)] = -span + 2.0 * span * k / (points - 1);
  grid[std::size_t(points - 1) / 2] = 0.0;
  return grid;
}

std::vector<double> merge_grids(const std::vector<std::vector<double>>& grids) {
  std::vector<double> all;
  for (const auto& g : grids) all.insert(all.end(), g.begin(), g.end());
  if (all.empty()) throw std::invalid_argument("no grids to merge");
  std::sort(all.begin(), all.end());
  double scale = std::max(std::abs(all.front()), std::abs(all.back()));
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > 1e-12 * std::max(scale, 1.0))
      out.push_back(x);
  // keep an exact zero if one was present
  for (double& x : out)
    if (std::abs(x) <= 1e-12 * std::max(scale, 1.0)) x = 0.0;
  return out;
}

double LossRateTable::rate(int n, double delta_l) const {
  if (n == 0) return 0.0;
  if (n < 0 || n > n_max)
    throw std::domain_error("atom number " + std::to_string(n) +
                            " outside table range");
  if (int(interp_.size()) != n_max)
    throw std::logic_error("rate table not finalized");
  return interp_[std::size_t(n - 1)](delta_l);
}

bool LossRateTable::clamps(double delta_l) const {
  return delta_l < delta_l_grid.front() || delta_l > delta_l_grid.back();
}

void LossRateTable::finalize() {
  interp_.clear();
  interp_.reserve(std::size_t(n_max));
  std::vector<double> row(delta_l_grid.size());
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t g = 0; g < delta_l_grid.size(); ++g)
      row[g] = rates(n - 1, Eigen::Index(g));
    interp_.emplace_back(delta_l_grid, row);
  }
}

static std::uint64_t params_fingerprint(const PhysicalParams& p) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%d|%.17g",
                p.omega_p, p.omega_c, p.omega_s, p.delta_s, p.delta_p,
                p.gamma_e, p.gamma_r, p.n_target, p.loss_branching);
  return fnv1a(buf);
}

LossRateTable build_rate_table(const PhysicalParams& params, int n_max,
                               const std::vector<double>& delta_l_grid,
                               const QuasiSteadyOptions& opts, int threads) {
  check_params(params);
  if (n_max < params.n_target)
    throw std::invalid_argument("n_max must be >= n_target");
  if (n_max > CollectiveBasis::max_atom_count)
    throw ResourceError("n_max " + std::to_string(n_max) +
                        " exceeds the basis cap");
  if (delta_l_grid.empty())
    throw std::invalid_argument("detuning grid is empty");
  std::size_t zero_at = delta_l_grid.size();
  for (std::size_t g = 0; g < delta_l_grid.size(); ++g) {
    if (g > 0 && !(delta_l_grid[g] > delta_l_grid[g - 1]))
      throw std::invalid_argument("detuning grid must be strictly increasing");
    if (delta_l_grid[g] == 0.0) zero_at = g;
  }
  if (zero_at == delta_l_grid.size())
    throw std::invalid_argument("detuning grid must contain 0");

  LossRateTable table;
  table.n_target = params.n_target;
  table.n_max = n_max;
  table.delta_l_grid = delta_l_grid;
  table.rates.resize(n_max, Eigen::Index(delta_l_grid.size()));
  table.info.version = version_string;
  table.info.params_hash = params_fingerprint(params);
  table.info.solver = opts;

  // One task per atom number.  Within a row the plateau state varies slowly
  // with detuning, so each cell seeds its neighbor and skips most of the
  // shared transient.  Chains restart cold after a non-strict exit; those
  // states carry slow-mode contamination that would bias the next cell.
  long cols = long(delta_l_grid.size());
  double scale = params.gamma_e * params.loss_branching;
  parallel_for(long(n_max), threads, [&](long row) {
    int n = int(row) + 1;
    auto solve = [&](long g, const Eigen::VectorXcd& seed) {
      QuasiSteadyOptions cell = opts;
      if (seed.size() > 0) cell.warm_start = &seed;
      QuasiSteadyResult res =
          quasi_steady(params, n, delta_l_grid[std::size_t(g)], cell);
      table.rates(n - 1, Eigen::Index(g)) = scale * res.pe;
      return res.strict_plateau ? res.state : Eigen::VectorXcd();
    };
    Eigen::VectorXcd center = solve(long(zero_at), Eigen::VectorXcd());
    Eigen::VectorXcd seed = center;
    for (long g = long(zero_at) + 1; g < cols; ++g) seed = solve(g, seed);
    seed = center;
    for (long g = long(zero_at) - 1; g >= 0; --g) seed = solve(g, seed);
  });

  double target = table.rates(params.n_target - 1, Eigen::Index(zero_at));
  Eigen::VectorXd at_zero = table.rates.col(Eigen::Index(zero_at));
  double slack = 1e-9 * std::max(at_zero.maxCoeff(), 1e-300);
  if (target > at_zero.minCoeff() + slack)
    throw SolverError(
        "loss rate at the protected atom number is not the column minimum; "
        "the parameter set does not select n_target");

  table.finalize();
  return table;
}

void write_rate_table_csv(const LossRateTable& table, std::ostream& out) {
  out << "# rydsieve " << table.info.version << " params "
      << hex64(table.info.params_hash) << " target " << table.n_target << "\n";
  out << "n,delta_l_hz,gamma_n_per_s\n";
  char buf[64];
  for (int n = 1; n <= table.n_max; ++n)
    for (std::size_t g = 0; g < table.delta_l_grid.size(); ++g) {
      out << n << ',';
      std::snprintf(buf, sizeof buf, "%.9g", rad_to_hz(table.delta_l_grid[g]));
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.9g",
                    table.rates(n - 1, Eigen::Index(g)));
      out << buf << '\n';
    }
}

LossRateTable read_rate_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# rydsieve ", 0) != 0)
    throw ConfigError("rate table must start with a \"# rydsieve\" header");

  LossRateTable table;
  {
    std::istringstream hs(line.substr(2));
    std::string tool, key;
    hs >> tool >> table.info.version;
    while (hs >> key) {
      if (key == "params") {
        std::string hex;
        hs >> hex;
        table.info.params_hash = std::stoull(hex, nullptr, 16);
      } else if (key == "target") {
        hs >> table.n_target;
      }
    }
  }
  if (!std::getline(in, line) || line != "n,delta_l_hz,gamma_n_per_s")
    throw ConfigError("unexpected rate table column header");

  std::vector<double> grid, values;
  int current_n = 0;
  std::size_t col = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int n;
    double dl_hz, g;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &n, &dl_hz, &g) != 3)
      throw ConfigError("malformed rate table row \"" + line + "\"");
    if (n != current_n) {
      if (n != current_n + 1 || (current_n > 0 && col != grid.size()))
        throw ConfigError("rate table rows out of order at n = " +
                          std::to_string(n));
      current_n = n;
      col = 0;
    }
    double dl = hz_to_rad(dl_hz);
    if (current_n == 1) {
      grid.push_back(dl);
    } else {
      if (col >= grid.size() ||
          std::abs(dl - grid[col]) > 1e-6 * std::max(1.0, std::abs(grid[col])))
        throw ConfigError("rate table detuning grid differs between rows");
      dl = grid[col];
    }
    ++col;
    values.push_back(g);
  }
  if (current_n < 1 || col != grid.size())
    throw ConfigError("rate table is empty or truncated");

  table.n_max = current_n;
  table.delta_l_grid = grid;
  table.rates.resize(table.n_max, Eigen::Index(grid.size()));
  for (int n = 1; n <= table.n_max; ++n)
    for (std::size_t g2 = 0; g2 < grid.size(); ++g2)
      table.rates(n - 1, Eigen::Index(g2)) =
          values[std::size_t(n - 1) * grid.size() + g2];
  table.finalize();
  return table;
}

}
