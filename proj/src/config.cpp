#include "rydsieve/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "rydsieve/basis.hpp"
#include "rydsieve/errors.hpp"
#include "rydsieve/hashing.hpp"
#include "rydsieve/steady_state.hpp"
#include "rydsieve/units.hpp"
#include "rydsieve/version.hpp"

namespace rydsieve {

using nlohmann::json;

namespace {

// Tracks which keys were read so leftovers can be rejected by name.
class Section {
 public:
  Section(const json& parent, const std::string& name) : name_(name) {
    if (parent.contains(name)) {
      if (!parent.at(name).is_object())
        throw ConfigError("section \"" + name + "\" must be an object");
      j_ = &parent.at(name);
    }
  }

  bool has(const std::string& key) {
    return j_ && j_->contains(key);
  }

  double number(const std::string& key) {
    require(key);
    return fetch_number(key);
  }

  double number_or(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return fetch_number(key);
  }

  long integer(const std::string& key) {
    require(key);
    return fetch_integer(key);
  }

  long integer_or(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    return fetch_integer(key);
  }

  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    seen_.insert(key);
    const json& v = j_->at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
      return std::uint64_t(v.get<long long>());
    throw ConfigError(path(key) + " must be a nonnegative integer");
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    seen_.insert(key);
    const json& v = j_->at(key);
    if (!v.is_string()) throw ConfigError(path(key) + " must be a string");
    return v.get<std::string>();
  }

  bool flag_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    seen_.insert(key);
    const json& v = j_->at(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + " must be a boolean");
    return v.get<bool>();
  }

  void done() {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown key \"" + name_ + "." + it.key() + "\"");
  }

 private:
  std::string path(const std::string& key) const { return name_ + "." + key; }

  void require(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key " + path(key));
  }

  double fetch_number(const std::string& key) {
    seen_.insert(key);
    const json& v = j_->at(key);
    if (!v.is_number()) throw ConfigError(path(key) + " must be a number");
    return v.get<double>();
  }

  long fetch_integer(const std::string& key) {
    seen_.insert(key);
    const json& v = j_->at(key);
    if (!v.is_number_integer())
      throw ConfigError(path(key) + " must be an integer");
    return v.get<long>();
  }

  const json* j_ = nullptr;
  std::string name_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigFile parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  static const std::set<std::string> sections = {"physical", "noise", "run",
                                                 "solver"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!sections.count(it.key()))
      throw ConfigError("unknown section \"" + it.key() + "\"");
  if (!doc.contains("physical"))
    throw ConfigError("missing required section \"physical\"");

  ConfigFile cfg;
  try {
    Section phys(doc, "physical");
    Section noise(doc, "noise");
    Section run(doc, "run");
    Section solver(doc, "solver");

    PhysicalParams& p = cfg.run.params;

    std::string preset_name = phys.text_or("preset", "");
    double gamma_e_hz, gamma_r_hz;
    if (!preset_name.empty()) {
      DecayRates preset = decay_preset(preset_name);
      gamma_e_hz = phys.number_or("gamma_e_hz", rad_to_hz(preset.gamma_e));
      gamma_r_hz = phys.number_or("gamma_r_hz", rad_to_hz(preset.gamma_r));
    } else {
      gamma_e_hz = phys.number("gamma_e_hz");
      gamma_r_hz = phys.number("gamma_r_hz");
    }
    p.gamma_e = hz_to_rad(gamma_e_hz);
    p.gamma_r = hz_to_rad(gamma_r_hz);
    p.omega_p = hz_to_rad(phys.number("omega_p_hz"));
    p.omega_c = hz_to_rad(phys.number("omega_c_hz"));
    p.delta_s = hz_to_rad(phys.number("delta_s_hz"));
    p.n_target = int(phys.integer("n_target"));
    p.loss_branching = phys.number_or("loss_branching", 1.0);

    bool have_delta = phys.has("delta_hz");
    bool have_omega_s = phys.has("omega_s_hz");
    if (!have_delta && !have_omega_s)
      throw ConfigError(
          "physical needs delta_hz or omega_s_hz (one fixes the other)");
    if (have_omega_s) {
      p.omega_s = hz_to_rad(phys.number("omega_s_hz"));
      cfg.delta = characteristic_shift(p.omega_s, p.delta_s);
      if (have_delta) {
        double requested = hz_to_rad(phys.number("delta_hz"));
        if (std::abs(cfg.delta - requested) > 0.01 * std::abs(requested))
          throw ConfigError(
              "physical.delta_hz and physical.omega_s_hz disagree by more "
              "than 1%");
      }
    } else {
      double requested = hz_to_rad(phys.number("delta_hz"));
      p.omega_s = solve_omega_s(requested, p.delta_s);
      cfg.delta = characteristic_shift(p.omega_s, p.delta_s);
    }

    bool refine = phys.flag_or("delta_p_refine", false);
    if (phys.has("delta_p_hz_override")) {
      if (refine)
        throw ConfigError(
            "physical.delta_p_refine conflicts with "
            "physical.delta_p_hz_override");
      p.delta_p = hz_to_rad(phys.number("delta_p_hz_override"));
    } else {
      p.delta_p = probe_detuning(p.n_target, p.omega_s, p.delta_s);
    }
    if (refine && p.n_target < 2)
      throw ConfigError("physical.delta_p_refine needs n_target >= 2");

    NoiseModel& nm = cfg.run.noise;
    nm.sigma_delta_l = hz_to_rad(noise.number_or("sigma_delta_l_hz", 0.0));
    nm.nbar_initial = noise.number_or("nbar_initial", 1.0);

    cfg.run.trajectories = int(run.integer_or("trajectories", 20000));
    cfg.run.horizon = run.number_or("horizon_s", 5e-4);
    cfg.run.dt_out = run.number_or("dt_out_s", 1e-6);
    cfg.run.seed = run.unsigned_or("seed", 1);
    long poisson_cap = long(
        std::ceil(nm.nbar_initial + 6.0 * std::sqrt(nm.nbar_initial)));
    long cap = run.integer_or("n_cap", std::max(poisson_cap, long(p.n_target)));
    cfg.run.delta_l_grid_points = int(run.integer_or("delta_l_grid_points", 17));
    cfg.emit_trajectories = run.flag_or("emit_trajectories", false);

    QuasiSteadyOptions& so = cfg.run.solver;
    so.plateau_tol = solver.number_or("plateau_tol", so.plateau_tol);
    so.plateau_floor = solver.number_or("plateau_floor", so.plateau_floor);
    so.window_factor = solver.number_or("window_factor", so.window_factor);
    so.max_horizon_factor =
        solver.number_or("max_horizon_factor", so.max_horizon_factor);
    so.samples_per_window =
        int(solver.integer_or("samples_per_window", so.samples_per_window));
    so.step_tol = solver.number_or("step_tol", so.step_tol);

    phys.done();
    noise.done();
    run.done();
    solver.done();

    cfg.warnings = check_params(p);
    check_noise(nm);

    if (cap < p.n_target)
      throw ConfigError("run.n_cap is below physical.n_target");
    if (cap < poisson_cap)
      throw ConfigError(
          "run.n_cap must cover the initial draw: at least nbar_initial + "
          "6*sqrt(nbar_initial) = " + std::to_string(poisson_cap));
    if (cap > CollectiveBasis::max_atom_count)
      throw ConfigError(
          "run.n_cap (" + std::to_string(cap) + ", derived from nbar_initial " +
          "when not explicit) exceeds the " +
          std::to_string(CollectiveBasis::max_atom_count) +
          "-atom basis cap; lower noise.nbar_initial or set run.n_cap");
    cfg.run.n_cap = int(cap);
    if (cfg.run.trajectories < 1)
      throw ConfigError("run.trajectories must be >= 1");
    if (!(cfg.run.horizon > 0.0))
      throw ConfigError("run.horizon_s must be > 0");
    if (!(cfg.run.dt_out > 0.0) || cfg.run.dt_out > cfg.run.horizon)
      throw ConfigError("run.dt_out_s must be in (0, horizon_s]");
    if (nm.sigma_delta_l > 0.0 && (cfg.run.delta_l_grid_points < 9 ||
                                   cfg.run.delta_l_grid_points % 2 == 0))
      throw ConfigError(
          "run.delta_l_grid_points must be an odd number >= 9");
    if (so.plateau_tol <= 0.0 || so.window_factor <= 0.0 ||
        so.samples_per_window < 2 || so.step_tol <= 0.0 ||
        so.max_horizon_factor <= so.window_factor)
      throw ConfigError("solver settings are out of range");

    // runs a handful of quasi-steady solves, so it comes last, once the
    // whole description is known to be sound
    if (refine) p.delta_p = refine_probe_detuning(p, so, 2);
    cfg.refined = refine;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const PhysicalParams& p = cfg.run.params;
  cfg.resolved = {
      {"version", version_string},
      {"physical",
       {{"gamma_e_hz", rad_to_hz(p.gamma_e)},
        {"gamma_r_hz", rad_to_hz(p.gamma_r)},
        {"omega_p_hz", rad_to_hz(p.omega_p)},
        {"omega_c_hz", rad_to_hz(p.omega_c)},
        {"omega_s_hz", rad_to_hz(p.omega_s)},
        {"delta_hz", rad_to_hz(cfg.delta)},
        {"delta_s_hz", rad_to_hz(p.delta_s)},
        {"delta_p_hz", rad_to_hz(p.delta_p)},
        {"delta_p_refine", cfg.refined},
        {"n_target", p.n_target},
        {"loss_branching", p.loss_branching}}},
      {"noise",
       {{"sigma_delta_l_hz", rad_to_hz(cfg.run.noise.sigma_delta_l)},
        {"nbar_initial", cfg.run.noise.nbar_initial}}},
      {"run",
       {{"trajectories", cfg.run.trajectories},
        {"horizon_s", cfg.run.horizon},
        {"dt_out_s", cfg.run.dt_out},
        {"seed", cfg.run.seed},
        {"n_cap", cfg.run.n_cap},
        {"delta_l_grid_points", cfg.run.delta_l_grid_points},
        {"emit_trajectories", cfg.emit_trajectories}}},
      {"solver",
       {{"plateau_tol", cfg.run.solver.plateau_tol},
        {"plateau_floor", cfg.run.solver.plateau_floor},
        {"window_factor", cfg.run.solver.window_factor},
        {"max_horizon_factor", cfg.run.solver.max_horizon_factor},
        {"samples_per_window", cfg.run.solver.samples_per_window},
        {"step_tol", cfg.run.solver.step_tol}}}};
  cfg.hash = fnv1a(cfg.resolved.dump());
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in \"" + path + "\": " + e.what());
  }
  return parse_config(doc);
}

}
