#include "rydsieve/csv.hpp"

#include <cstdio>
#include <ostream>

#include "rydsieve/units.hpp"
#include "rydsieve/version.hpp"
#include "rydsieve/hashing.hpp"

namespace rydsieve {

namespace {

void banner(std::uint64_t config_hash, std::ostream& out) {
  out << "# rydsieve " << version_string << " config " << hex64(config_hash)
      << "\n";
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_evolution_csv(const EnsembleTimeSeries& series,
                         std::uint64_t config_hash, std::ostream& out) {
  banner(config_hash, out);
  out << "t_s,mean_n,var_n,fano\n";
  for (std::size_t k = 0; k < series.times.size(); ++k)
    out << num(series.times[k]) << ',' << num(series.mean_n[k]) << ','
        << num(series.var_n[k]) << ',' << num(series.fano[k]) << '\n';
}

void write_histogram_csv(const Histogram& hist, std::uint64_t config_hash,
                         std::ostream& out) {
  banner(config_hash, out);
  out << "n,p_empirical,p_poisson\n";
  for (std::size_t i = 0; i < hist.n.size(); ++i)
    out << hist.n[i] << ',' << num(hist.p_empirical[i]) << ','
        << num(hist.p_poisson[i]) << '\n';
}

void write_sweep_csv(const std::vector<SweepPoint>& points,
                     std::uint64_t config_hash, std::ostream& out) {
  banner(config_hash, out);
  out << "sigma_hz,min_var,t_min_s,fano_min\n";
  for (const SweepPoint& p : points)
    out << num(rad_to_hz(p.sigma)) << ',' << num(p.min_var) << ','
        << num(p.t_min) << ',' << num(p.fano_min) << '\n';
}

// Long format, one row per loss event plus a t = 0 row carrying the initial
// atom number, so a staircase N(t) can be drawn per trajectory.  Failed
// trajectories are skipped.
void write_trajectories_csv(const std::vector<TrajectoryRecord>& records,
                            std::uint64_t config_hash, std::ostream& out) {
  banner(config_hash, out);
  out << "trajectory_id,event_index,t_s,n_after\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrajectoryRecord& r = records[i];
    if (r.failed) continue;
    out << i << ",0,0," << r.initial_n << '\n';
    for (std::size_t e = 0; e < r.event_times.size(); ++e)
      out << i << ',' << e + 1 << ',' << num(r.event_times[e]) << ','
          << r.initial_n - int(e) - 1 << '\n';
  }
}

nlohmann::json rate_table_sidecar(const LossRateTable& table,
                                  std::uint64_t config_hash) {
  std::vector<double> grid_hz;
  grid_hz.reserve(table.delta_l_grid.size());
  for (double w : table.delta_l_grid) grid_hz.push_back(rad_to_hz(w));
  return {
      {"version", table.info.version},
      {"config", hex64(config_hash)},
      {"params", hex64(table.info.params_hash)},
      {"n_target", table.n_target},
      {"n_max", table.n_max},
      {"delta_l_grid_hz", grid_hz},
      {"solver",
       {{"plateau_tol", table.info.solver.plateau_tol},
        {"window_factor", table.info.solver.window_factor},
        {"max_horizon_factor", table.info.solver.max_horizon_factor},
        {"samples_per_window", table.info.solver.samples_per_window},
        {"step_tol", table.info.solver.step_tol}}},
      {"columns", {"n", "delta_l_hz", "gamma_n_per_s"}},
  };
}

}
