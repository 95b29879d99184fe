#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rydsieve/config.hpp"
#include "rydsieve/csv.hpp"
#include "rydsieve/errors.hpp"
#include "rydsieve/hashing.hpp"
#include "rydsieve/steady_state.hpp"
#include "rydsieve/units.hpp"
#include "rydsieve/validate.hpp"
#include "rydsieve/version.hpp"

namespace fs = std::filesystem;
using namespace rydsieve;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  CLI::Option* c = cmd->add_option("--config", args.config_path,
                                   "JSON run description");
  if (config_required) c->required();
  cmd->add_option("--out", args.out_dir, "output directory (created if absent)");
  cmd->add_option("--seed", args.seed, "override the configured master seed");
  cmd->add_option("--threads", args.threads,
                  "worker threads; 0 means all hardware threads");
}

// Stand-in used by bare `validate` runs; mirrors configs/fig2.json.
const char* default_config_json = R"({
  "physical": {
    "preset": "rubidium",
    "omega_p_hz": 4.0e5,
    "omega_c_hz": 2.0e6,
    "delta_hz": 2.0e4,
    "delta_s_hz": 3.0e8,
    "n_target": 8
  },
  "noise": {"sigma_delta_l_hz": 0.0, "nbar_initial": 26},
  "run": {"trajectories": 20000, "horizon_s": 5.0e-4, "dt_out_s": 1.0e-6,
          "seed": 12345}
})";

ConfigFile resolve(const CommonArgs& args) {
  ConfigFile cfg = args.config_path.empty()
                       ? parse_config(nlohmann::json::parse(default_config_json))
                       : load_config(args.config_path);
  if (args.seed) cfg.run.seed = *args.seed;
  cfg.run.threads = args.threads > 0
                        ? args.threads
                        : int(std::max(1u, std::thread::hardware_concurrency()));
  for (const std::string& w : cfg.warnings)
    std::cerr << "warning: " << w << "\n";
  return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

void write_json(const fs::path& dir, const std::string& name,
                const nlohmann::json& j) {
  std::ofstream out = open_out(dir, name);
  out << j.dump(2) << "\n";
}

int cmd_loss_rates(const CommonArgs& args, int n_min,
                   std::optional<int> n_max_opt) {
  ConfigFile cfg = resolve(args);
  const RunConfig& run = cfg.run;
  int n_max = n_max_opt.value_or(std::max(run.n_cap, run.params.n_target));
  if (n_min < 1 || n_min > n_max)
    throw ConfigError("--n-min must be in [1, --n-max]");

  // zero laser shift only; the build check needs the target covered even
  // when the requested window starts above it
  int n_build = std::max(n_max, run.params.n_target);
  LossRateTable table =
      build_rate_table(run.params, n_build, {0.0}, run.solver, run.threads);

  std::ofstream csv = open_out(args.out_dir, "loss_rates.csv");
  csv << "# rydsieve " << version_string << " config " << hex64(cfg.hash)
      << "\n";
  csv << "n,gamma_n_per_s,gamma_bloch_per_s\n";
  double prefactor = run.params.gamma_e * run.params.loss_branching;
  int argmin = n_min, argmin_bloch = n_min;
  double gamma_min = table.rate(n_min, 0.0);
  double bloch_min = prefactor * bloch_pe(run.params, n_min);
  char buf[96];
  for (int n = n_min; n <= n_max; ++n) {
    double g = table.rate(n, 0.0);
    double b = prefactor * bloch_pe(run.params, n);
    if (g < gamma_min) gamma_min = g, argmin = n;
    if (b < bloch_min) bloch_min = b, argmin_bloch = n;
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g\n", n, g, b);
    csv << buf;
  }

  nlohmann::json summary = {
      {"config", hex64(cfg.hash)},
      {"params", hex64(table.info.params_hash)},
      {"n_min", n_min},
      {"n_max", n_max},
      {"argmin_n", argmin},
      {"gamma_min_per_s", gamma_min},
      {"argmin_n_bloch", argmin_bloch},
      {"resolved_config", cfg.resolved},
  };
  if (run.params.n_target >= n_min && run.params.n_target < n_max) {
    double at_target = table.rate(run.params.n_target, 0.0);
    double above = table.rate(run.params.n_target + 1, 0.0);
    summary["gamma_at_target_per_s"] = at_target;
    if (at_target > 0.0) summary["contrast_above_target"] = above / at_target;
  }
  write_json(args.out_dir, "loss_rates.json", summary);
  std::cout << "wrote loss_rates.csv (n in [" << n_min << ", " << n_max
            << "]), minimum at n = " << argmin << "\n";
  return 0;
}

int cmd_evolve(const CommonArgs& args, bool emit_trajectories) {
  ConfigFile cfg = resolve(args);
  RunConfig run = cfg.run;

  LossRateTable table = build_rate_table(
      run.params, run.n_cap,
      make_delta_l_grid(run.noise.sigma_delta_l, run.delta_l_grid_points),
      run.solver, run.threads);
  EnsembleResult res = run_ensemble(run, table);

  std::optional<double> t_stab;
  try {
    t_stab = stabilization_time(res.series, run.params.n_target);
  } catch (const SolverError&) {
    std::cerr << "warning: ensemble mean did not reach n_target within the "
                 "horizon\n";
  }
  double t_hist = t_stab.value_or(run.horizon);
  Histogram hist = histogram_at(res.records, t_hist);

  {
    std::ofstream out = open_out(args.out_dir, "rate_table.csv");
    write_rate_table_csv(table, out);
  }
  write_json(args.out_dir, "rate_table.json",
             rate_table_sidecar(table, cfg.hash));
  {
    std::ofstream out = open_out(args.out_dir, "evolution.csv");
    write_evolution_csv(res.series, cfg.hash, out);
  }
  {
    std::ofstream out = open_out(args.out_dir, "histogram.csv");
    write_histogram_csv(hist, cfg.hash, out);
  }
  if (emit_trajectories || cfg.emit_trajectories) {
    std::ofstream out = open_out(args.out_dir, "trajectories.csv");
    write_trajectories_csv(res.records, cfg.hash, out);
  }

  std::size_t last = res.series.times.size() - 1;
  std::size_t k_min = 0;
  for (std::size_t k = 1; k < res.series.var_n.size(); ++k)
    if (res.series.var_n[k] < res.series.var_n[k_min]) k_min = k;
  nlohmann::json summary = {
      {"config", hex64(cfg.hash)},
      {"seed", run.seed},
      {"trajectories", res.series.trajectory_count},
      {"failures", res.series.failures},
      {"clamped_detuning_draws", res.series.clamped_draws},
      {"stabilization_time_s",
       t_stab ? nlohmann::json(*t_stab) : nlohmann::json(nullptr)},
      {"min_var_n", res.series.var_n[k_min]},
      {"t_min_var_s", res.series.times[k_min]},
      {"fano_at_min_var", res.series.fano[k_min]},
      {"histogram_time_s", t_hist},
      {"histogram_mean_n", hist.mean},
      {"final_mean_n", res.series.mean_n[last]},
      {"final_var_n", res.series.var_n[last]},
      {"final_fano", res.series.fano[last]},
      {"resolved_config", cfg.resolved},
  };
  if (t_stab) {
    std::size_t k_stab = 0;
    while (k_stab < res.series.times.size() &&
           res.series.times[k_stab] < *t_stab)
      ++k_stab;
    summary["mean_n_at_stabilization"] = res.series.mean_n[k_stab];
    summary["var_n_at_stabilization"] = res.series.var_n[k_stab];
    summary["fano_at_stabilization"] = res.series.fano[k_stab];
  }
  write_json(args.out_dir, "summary.json", summary);
  std::cout << "wrote evolution.csv, histogram.csv, rate_table.csv ("
            << res.series.trajectory_count << " trajectories, "
            << res.series.failures << " failures)\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& sigmas_hz) {
  ConfigFile cfg = resolve(args);
  if (sigmas_hz.empty()) throw ConfigError("--sigmas-hz needs at least one value");
  std::vector<double> sigmas;
  for (double s : sigmas_hz) {
    if (s < 0.0) throw ConfigError("--sigmas-hz values must be >= 0");
    sigmas.push_back(hz_to_rad(s));
  }

  std::vector<SweepPoint> points = noise_sweep(cfg.run, sigmas);

  {
    std::ofstream out = open_out(args.out_dir, "sweep.csv");
    write_sweep_csv(points, cfg.hash, out);
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SweepPoint& p = points[i];
    std::string series_name = "evolution_sigma_" + std::to_string(i) + ".csv";
    std::ofstream out = open_out(args.out_dir, series_name);
    write_evolution_csv(p.series, cfg.hash, out);
    rows.push_back({{"sigma_hz", rad_to_hz(p.sigma)},
                    {"min_var", p.min_var},
                    {"t_min_s", p.t_min},
                    {"fano_min", p.fano_min},
                    {"series_csv", series_name}});
  }
  nlohmann::json summary = {{"config", hex64(cfg.hash)},
                            {"seed", cfg.run.seed},
                            {"points", rows},
                            {"resolved_config", cfg.resolved}};
  write_json(args.out_dir, "sweep_summary.json", summary);
  std::cout << "wrote sweep.csv (" << points.size() << " noise widths)\n";
  return 0;
}

int cmd_validate(const CommonArgs& args, double perturb) {
  ConfigFile cfg = resolve(args);
  ValidationOptions opts;
  opts.perturbation = perturb;
  std::vector<CheckResult> results = run_validation(cfg, opts);

  nlohmann::json rows = nlohmann::json::array();
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail
              << "\n";
    rows.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  write_json(args.out_dir, "validation.json",
             {{"config", hex64(cfg.hash)},
              {"all_passed", all_passed(results)},
              {"checks", rows}});
  return all_passed(results) ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-loss simulator for dressed-blockade atom-number "
               "stabilization"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(1);

  CommonArgs loss_args, evolve_args, sweep_args, validate_args;
  int n_min = 1;
  std::optional<int> n_max;
  bool emit_traj = false;
  std::vector<double> sigmas_hz;
  double perturb = 0.0;

  CLI::App* loss = app.add_subcommand(
      "loss-rates", "Tabulate collective loss rates over atom number");
  add_common(loss, loss_args);
  loss->add_option("--n-min", n_min, "first atom number to emit");
  loss->add_option("--n-max", n_max, "last atom number (default: run.n_cap)");

  CLI::App* evolve = app.add_subcommand(
      "evolve", "Run a jump-trajectory ensemble and write its statistics");
  add_common(evolve, evolve_args);
  evolve->add_flag("--emit-trajectories", emit_traj,
                   "also write per-trajectory event times");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Repeat the ensemble over a list of detuning-noise widths");
  add_common(sweep, sweep_args);
  sweep->add_option("--sigmas-hz", sigmas_hz, "noise widths to sweep")
      ->required()
      ->delimiter(',');

  CLI::App* validate = app.add_subcommand(
      "validate", "Run the internal consistency checklist");
  add_common(validate, validate_args, false);
  validate->add_option("--perturb", perturb,
                       "inject a relative coupling distortion (for testing "
                       "that the checks can fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return 2;
  }

  try {
    if (loss->parsed()) return cmd_loss_rates(loss_args, n_min, n_max);
    if (evolve->parsed()) return cmd_evolve(evolve_args, emit_traj);
    if (sweep->parsed()) return cmd_sweep(sweep_args, sigmas_hz);
    if (validate->parsed()) return cmd_validate(validate_args, perturb);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
