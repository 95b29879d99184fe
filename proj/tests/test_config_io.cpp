#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rydsieve/config.hpp"
#include "rydsieve/errors.hpp"
#include "rydsieve/params.hpp"
#include "rydsieve/units.hpp"
#include "rydsieve/version.hpp"

using namespace rydsieve;
using nlohmann::json;

namespace {

json base_doc() {
  return json{{"physical",
               {{"preset", "rubidium"},
                {"omega_p_hz", 4.0e5},
                {"omega_c_hz", 2.0e6},
                {"delta_hz", 2.0e4},
                {"delta_s_hz", 3.0e8},
                {"n_target", 8}}}};
}

}  // namespace

TEST_CASE("frequencies enter in Hz and come out in rad/s") {
  ConfigFile cfg = parse_config(base_doc());
  const PhysicalParams& p = cfg.run.params;
  CHECK(p.omega_p == doctest::Approx(two_pi * 4.0e5));
  CHECK(p.omega_c == doctest::Approx(two_pi * 2.0e6));
  CHECK(p.delta_s == doctest::Approx(two_pi * 3.0e8));
  CHECK(p.gamma_e == doctest::Approx(two_pi * 6.0e6));
  CHECK(p.gamma_r == doctest::Approx(two_pi * 100.0));
  CHECK(cfg.delta == doctest::Approx(two_pi * 2.0e4).epsilon(1e-12));
}

TEST_CASE("omitted sections fall back to defaults") {
  ConfigFile cfg = parse_config(base_doc());
  CHECK(cfg.run.trajectories == 20000);
  CHECK(cfg.run.horizon == doctest::Approx(5e-4));
  CHECK(cfg.run.dt_out == doctest::Approx(1e-6));
  CHECK(cfg.run.seed == 1);
  CHECK(cfg.run.delta_l_grid_points == 17);
  CHECK_FALSE(cfg.emit_trajectories);
  CHECK_FALSE(cfg.refined);
  CHECK(cfg.run.noise.sigma_delta_l == 0.0);
  CHECK(cfg.run.noise.nbar_initial == 1.0);
  // nbar 1 caps the initial draw at ceil(1 + 6) = 7, below the target
  CHECK(cfg.run.n_cap == 8);
  CHECK(cfg.run.solver.plateau_tol == doctest::Approx(1e-4));
  CHECK(cfg.run.solver.window_factor == doctest::Approx(5.0));
  CHECK(cfg.run.solver.samples_per_window == 8);
}

TEST_CASE("preset decay rates yield to explicit overrides") {
  json doc = base_doc();
  doc["physical"]["gamma_r_hz"] = 250.0;
  ConfigFile cfg = parse_config(doc);
  CHECK(cfg.run.params.gamma_r == doctest::Approx(two_pi * 250.0));
  CHECK(cfg.run.params.gamma_e == doctest::Approx(two_pi * 6.0e6));

  doc["physical"]["preset"] = "unobtainium";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  json bare = base_doc();
  bare["physical"].erase("preset");
  CHECK_THROWS_AS(parse_config(bare), ConfigError);  // no decay rates left
  bare["physical"]["gamma_e_hz"] = 6.0e6;
  bare["physical"]["gamma_r_hz"] = 100.0;
  CHECK_NOTHROW(parse_config(bare));
}

TEST_CASE("the dressing strength can be fixed from either side") {
  ConfigFile by_delta = parse_config(base_doc());

  json doc = base_doc();
  doc["physical"].erase("delta_hz");
  doc["physical"]["omega_s_hz"] = rad_to_hz(by_delta.run.params.omega_s);
  ConfigFile by_omega = parse_config(doc);
  CHECK(by_omega.run.params.omega_s ==
        doctest::Approx(by_delta.run.params.omega_s).epsilon(1e-12));
  CHECK(by_omega.delta == doctest::Approx(by_delta.delta).epsilon(1e-10));

  // both present and consistent is fine, both present and off by 2% is not
  doc["physical"]["delta_hz"] = 2.0e4;
  CHECK_NOTHROW(parse_config(doc));
  doc["physical"]["delta_hz"] = 2.04e4;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc["physical"].erase("delta_hz");
  doc["physical"].erase("omega_s_hz");
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("probe detuning is derived unless overridden") {
  ConfigFile cfg = parse_config(base_doc());
  const PhysicalParams& p = cfg.run.params;
  CHECK(p.delta_p ==
        doctest::Approx(probe_detuning(8, p.omega_s, p.delta_s)).epsilon(1e-12));

  json doc = base_doc();
  doc["physical"]["delta_p_hz_override"] = -2.2e6;
  ConfigFile forced = parse_config(doc);
  CHECK(forced.run.params.delta_p == doctest::Approx(two_pi * -2.2e6));
}

TEST_CASE("resonance refinement stays within one level spacing") {
  json doc = base_doc();
  doc["physical"]["n_target"] = 3;
  doc["solver"]["plateau_tol"] = 1e-2;
  ConfigFile plain = parse_config(doc);

  doc["physical"]["delta_p_refine"] = true;
  ConfigFile refined = parse_config(doc);
  CHECK(refined.refined);
  CHECK(refined.resolved["physical"]["delta_p_refine"] == true);
  double moved = std::abs(refined.run.params.delta_p - plain.run.params.delta_p);
  CHECK(moved > 0.0);
  CHECK(moved < 2.0 * refined.delta);
  CHECK(refined.hash != plain.hash);

  // refining twice from the same document is reproducible
  ConfigFile again = parse_config(doc);
  CHECK(again.run.params.delta_p == refined.run.params.delta_p);
  CHECK(again.hash == refined.hash);

  doc["physical"]["delta_p_hz_override"] = -1.0e6;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc["physical"].erase("delta_p_hz_override");
  doc["physical"]["n_target"] = 1;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("the atom cap tracks the initial distribution") {
  json doc = base_doc();
  doc["noise"]["nbar_initial"] = 26.0;
  ConfigFile cfg = parse_config(doc);
  CHECK(cfg.run.n_cap == 57);  // ceil(26 + 6 sqrt(26))

  doc["run"]["n_cap"] = 40;  // explicit but below the draw coverage
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc["run"]["n_cap"] = 60;
  CHECK(parse_config(doc).run.n_cap == 60);

  doc["noise"]["nbar_initial"] = 1.0;
  doc["run"]["n_cap"] = 7;  // covers the draw but not the target
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc["run"]["n_cap"] = 81;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc["run"].erase("n_cap");
  doc["noise"]["nbar_initial"] = 500.0;  // derived cap lands above 80
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("unknown names are rejected with their full path") {
  json doc = base_doc();
  doc["physical"]["omega_x_hz"] = 1.0;
  CHECK_THROWS_WITH_AS(parse_config(doc), "unknown key \"physical.omega_x_hz\"",
                       ConfigError);

  doc = base_doc();
  doc["lasers"] = json::object();
  CHECK_THROWS_WITH_AS(parse_config(doc), "unknown section \"lasers\"",
                       ConfigError);

  CHECK_THROWS_AS(parse_config(json{{"noise", json::object()}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  doc = base_doc();
  doc["run"] = 5;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("run and solver limits are enforced") {
  json doc = base_doc();
  doc["run"]["trajectories"] = 0;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["run"]["horizon_s"] = 0.0;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["run"]["dt_out_s"] = 1.0;  // beyond the default half-millisecond horizon
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["run"]["seed"] = -5;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["run"]["emit_trajectories"] = "yes";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["noise"]["sigma_delta_l_hz"] = 6000.0;
  doc["run"]["delta_l_grid_points"] = 8;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc["run"]["delta_l_grid_points"] = 7;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc["run"]["delta_l_grid_points"] = 9;
  CHECK_NOTHROW(parse_config(doc));
  // without noise the grid collapses to a point and the count is unused
  doc["noise"]["sigma_delta_l_hz"] = 0.0;
  doc["run"]["delta_l_grid_points"] = 4;
  CHECK_NOTHROW(parse_config(doc));

  doc = base_doc();
  doc["solver"]["plateau_tol"] = 0.0;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["solver"]["max_horizon_factor"] = 2.0;  // below the window length
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["solver"]["plateau_floor"] = 1e-10;
  doc["solver"]["step_tol"] = 1e-10;
  ConfigFile cfg = parse_config(doc);
  CHECK(cfg.run.solver.plateau_floor == doctest::Approx(1e-10));
  CHECK(cfg.run.solver.step_tol == doctest::Approx(1e-10));
}

TEST_CASE("physics guards reach the config boundary") {
  json doc = base_doc();
  doc["physical"]["omega_c_hz"] = 6.0e5;  // control/probe below 2
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["physical"]["n_target"] = 0;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["noise"]["nbar_initial"] = 0.0;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["physical"]["omega_c_hz"] = 1.2e6;  // ratio 3: passes with a warning
  ConfigFile cfg = parse_config(doc);
  REQUIRE(cfg.warnings.size() == 1);
  CHECK(cfg.warnings[0].find("omega_c/omega_p < 5") != std::string::npos);
  CHECK(parse_config(base_doc()).warnings.empty());
}

TEST_CASE("the resolved echo is complete and fingerprinted") {
  ConfigFile cfg = parse_config(base_doc());
  const json& r = cfg.resolved;
  CHECK(r.at("version") == version_string);
  for (const char* key :
       {"gamma_e_hz", "gamma_r_hz", "omega_p_hz", "omega_c_hz", "omega_s_hz",
        "delta_hz", "delta_s_hz", "delta_p_hz", "delta_p_refine", "n_target",
        "loss_branching"})
    CHECK(r.at("physical").contains(key));
  for (const char* key : {"sigma_delta_l_hz", "nbar_initial"})
    CHECK(r.at("noise").contains(key));
  for (const char* key :
       {"trajectories", "horizon_s", "dt_out_s", "seed", "n_cap",
        "delta_l_grid_points", "emit_trajectories"})
    CHECK(r.at("run").contains(key));
  for (const char* key :
       {"plateau_tol", "plateau_floor", "window_factor", "max_horizon_factor",
        "samples_per_window", "step_tol"})
    CHECK(r.at("solver").contains(key));
  CHECK(r.at("physical").at("delta_p_hz").get<double>() ==
        doctest::Approx(rad_to_hz(cfg.run.params.delta_p)));

  CHECK(cfg.hash != 0);
  CHECK(parse_config(base_doc()).hash == cfg.hash);
  json doc = base_doc();
  doc["run"]["seed"] = 2;
  CHECK(parse_config(doc).hash != cfg.hash);
}

TEST_CASE("files load with comments and fail with context") {
  const char* path = "config_io_scratch.json";
  {
    std::ofstream out(path);
    out << "{\n  // default-heavy run description\n  \"physical\": {\n"
        << "    \"preset\": \"rubidium\",\n    \"omega_p_hz\": 4.0e5,\n"
        << "    \"omega_c_hz\": 2.0e6,\n    \"delta_hz\": 2.0e4,\n"
        << "    \"delta_s_hz\": 3.0e8,\n    \"n_target\": 8\n  }\n}\n";
  }
  ConfigFile cfg = load_config(path);
  CHECK(cfg.run.params.n_target == 8);
  CHECK(cfg.hash == parse_config(base_doc()).hash);

  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}
