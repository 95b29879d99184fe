#include "rydsieve/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rydsieve/errors.hpp"
#include "parallel.hpp"

namespace rydsieve {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int sample_initial_n(std::mt19937_64& rng, double nbar) {
  if (!(nbar > 0.0)) throw std::invalid_argument("nbar must be > 0");
  std::poisson_distribution<int> dist(nbar);
  return dist(rng);
}

double sample_laser_shift(std::mt19937_64& rng, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  std::normal_distribution<double> dist(0.0, 1.0);
  return sigma * dist(rng);
}

int TrajectoryRecord::n_at(double t) const {
  auto past = std::upper_bound(event_times.begin(), event_times.end(), t);
  return initial_n - int(past - event_times.begin());
}

TrajectoryRecord sample_trajectory(const LossRateTable& table, int n0,
                                   double delta_l, std::mt19937_64& rng,
                                   double horizon) {
  if (n0 < 0) throw std::invalid_argument("initial atom number must be >= 0");
  if (n0 > table.n_max)
    throw std::invalid_argument("initial atom number exceeds the rate table");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");

  TrajectoryRecord rec;
  rec.initial_n = n0;
  rec.delta_l = delta_l;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double t = 0.0;
  int n = n0;
  while (n > 0) {
    double g = table.rate(n, delta_l);
    if (!(g > 0.0)) break;  // protected occupancy, no further decay
    double u;
    do {
      u = uniform(rng);
    } while (u <= 0.0);
    t += -std::log(u) / g;
    if (t > horizon) break;
    rec.event_times.push_back(t);
    --n;
  }
  rec.final_n = n;
  return rec;
}

EnsembleResult run_ensemble(const RunConfig& cfg) {
  check_noise(cfg.noise);
  LossRateTable table = build_rate_table(
      cfg.params, cfg.n_cap,
      make_delta_l_grid(cfg.noise.sigma_delta_l, cfg.delta_l_grid_points),
      cfg.solver, cfg.threads);
  return run_ensemble(cfg, table);
}

EnsembleResult run_ensemble(const RunConfig& cfg, const LossRateTable& table) {
  check_params(cfg.params);
  check_noise(cfg.noise);
  if (cfg.trajectories < 1)
    throw std::invalid_argument("trajectory count must be >= 1");
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (!(cfg.dt_out > 0.0) || cfg.dt_out > cfg.horizon)
    throw std::invalid_argument("dt_out must be in (0, horizon]");
  if (cfg.n_cap < cfg.params.n_target)
    throw std::invalid_argument("n_cap must be >= n_target");

  int cap = std::min(cfg.n_cap, table.n_max);
  long grid_n = long(std::floor(cfg.horizon / cfg.dt_out + 1e-9));

  EnsembleResult out;
  out.records.resize(std::size_t(cfg.trajectories));
  parallel_for(cfg.trajectories, cfg.threads, [&](long i) {
    std::mt19937_64 rng(mix_seed(cfg.seed, std::uint64_t(i)));
    int n0 = sample_initial_n(rng, cfg.noise.nbar_initial);
    double dl = sample_laser_shift(rng, cfg.noise.sigma_delta_l);
    TrajectoryRecord& rec = out.records[std::size_t(i)];
    if (n0 > cap) {
      rec.initial_n = n0;
      rec.delta_l = dl;
      rec.final_n = n0;
      rec.failed = true;
      rec.failure = "initial atom number " + std::to_string(n0) +
                    " above cap " + std::to_string(cap);
      return;
    }
    rec = sample_trajectory(table, n0, dl, rng, cfg.horizon);
  });

  EnsembleTimeSeries& s = out.series;
  s.trajectory_count = cfg.trajectories;
  s.master_seed = cfg.seed;
  s.times.resize(std::size_t(grid_n) + 1);
  for (long k = 0; k <= grid_n; ++k) s.times[std::size_t(k)] = cfg.dt_out * k;

  std::vector<std::uint64_t> sum1(s.times.size(), 0), sum2(s.times.size(), 0);
  long effective = 0;
  for (const TrajectoryRecord& rec : out.records) {
    if (rec.failed) {
      ++s.failures;
      continue;
    }
    if (table.clamps(rec.delta_l)) ++s.clamped_draws;
    ++effective;
    std::size_t ev = 0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      while (ev < rec.event_times.size() && rec.event_times[ev] <= s.times[k])
        ++ev;
      std::uint64_t n = std::uint64_t(rec.initial_n) - ev;
      sum1[k] += n;
      sum2[k] += n * n;
    }
  }

  s.mean_n.assign(s.times.size(), 0.0);
  s.var_n.assign(s.times.size(), 0.0);
  s.fano.assign(s.times.size(), std::numeric_limits<double>::quiet_NaN());
  if (effective > 0) {
    double inv = 1.0 / double(effective);
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      double mean = double(sum1[k]) * inv;
      // exact integer moments, so this difference cannot go negative
      double var =
          (double(sum2[k]) - double(sum1[k]) * double(sum1[k]) * inv) * inv;
      s.mean_n[k] = mean;
      s.var_n[k] = std::max(var, 0.0);
      if (mean > 0.0) s.fano[k] = s.var_n[k] / mean;
    }
  }
  return out;
}

double stabilization_time(const EnsembleTimeSeries& series, int n_target,
                          double eps) {
  if (n_target < 1) throw std::invalid_argument("n_target must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  for (std::size_t k = 0; k < series.times.size(); ++k)
    if (series.mean_n[k] <= n_target + eps) return series.times[k];
  throw SolverError(
      "ensemble mean never reached n_target + eps within the horizon");
}

Histogram histogram_at(const std::vector<TrajectoryRecord>& records, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const TrajectoryRecord& rec : records) {
    if (rec.failed) continue;
    int n = rec.n_at(t);
    if (int(counts.size()) <= n) counts.resize(std::size_t(n) + 1, 0);
    ++counts[std::size_t(n)];
    ++total;
  }
  if (total == 0)
    throw std::invalid_argument("no successful trajectories to histogram");

  Histogram h;
  std::uint64_t weighted = 0;
  for (std::size_t n = 0; n < counts.size(); ++n) weighted += n * counts[n];
  h.mean = double(weighted) / double(total);

  double lambda = h.mean;
  double p = std::exp(-lambda);
  double cum = 0.0;
  for (int n = 0;; ++n) {
    bool in_empirical = n < int(counts.size());
    if (!in_empirical && cum >= 1.0 - 1e-13) break;
    h.n.push_back(n);
    h.p_empirical.push_back(
        in_empirical ? double(counts[std::size_t(n)]) / double(total) : 0.0);
    h.p_poisson.push_back(p);
    cum += p;
    p *= lambda / double(n + 1);
    if (n > 100000) throw std::logic_error("runaway histogram support");
  }
  return h;
}

std::vector<SweepPoint> noise_sweep(const RunConfig& cfg,
                                    const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw std::invalid_argument("sigma list is empty");
  std::vector<std::vector<double>> grids;
  grids.reserve(sigmas.size());
  for (double s : sigmas)
    grids.push_back(make_delta_l_grid(s, cfg.delta_l_grid_points));
  LossRateTable table = build_rate_table(cfg.params, cfg.n_cap,
                                         merge_grids(grids), cfg.solver,
                                         cfg.threads);

  std::vector<SweepPoint> out;
  out.reserve(sigmas.size());
  for (double s : sigmas) {
    RunConfig run = cfg;
    run.noise.sigma_delta_l = s;
    EnsembleResult res = run_ensemble(run, table);
    SweepPoint pt;
    pt.sigma = s;
    std::size_t best = 0;
    for (std::size_t k = 1; k < res.series.var_n.size(); ++k)
      if (res.series.var_n[k] < res.series.var_n[best]) best = k;
    pt.min_var = res.series.var_n[best];
    pt.t_min = res.series.times[best];
    pt.fano_min = res.series.fano[best];
    pt.series = std::move(res.series);
    out.push_back(std::move(pt));
  }
  return out;
}

}
