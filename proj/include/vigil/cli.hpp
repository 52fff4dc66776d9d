#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vigil/config.hpp"
#include "vigil/sim.hpp"
#include "vigil/trace.hpp"
#include "vigil/version.hpp"

namespace vigil {

namespace detail {

inline std::string default_out_dir() {
  const char* env = std::getenv("VIGIL_OUT_DIR");
  return env && *env ? env : ".";
}

inline std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline std::string fmt_steps(const std::optional<int>& s) {
  return s ? std::to_string(*s) : "never";
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"danger-aware crossing simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = detail::default_out_dir();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> collision_mode;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scenario config file (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory (default: VIGIL_OUT_DIR or .)");
  };

  CLI::App* run = app.add_subcommand("run", "simulate one episode and write trace.csv");
  add_common(run);
  run->add_option("--seed", seed, "override the config's rng seed");
  run->add_option("--collision-mode", collision_mode, "exact or marginal")
      ->check(CLI::IsMember({"exact", "marginal"}));

  CLI::App* sweep = app.add_subcommand("sweep", "run episodes across parameter values");
  add_common(sweep);
  std::string param;
  std::vector<double> values;
  int reps = 1;
  sweep->add_option("--param", param, "config field to vary")->required();
  sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  sweep->add_option("--reps", reps, "episodes per value (seeds increment)")
      ->check(CLI::PositiveNumber);

  CLI::App* forecast = app.add_subcommand("forecast", "dump the occupancy forecast at a step");
  add_common(forecast);
  int at_step = 0;
  forecast->add_option("--at-step", at_step, "episode step to forecast from")
      ->check(CLI::NonNegativeNumber);

  // CLI11 wants argc/argv.
  std::vector<const char*> argv;
  argv.push_back("vigil");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ScenarioConfig cfg = load_config(config_path);
    if (seed) cfg.simulation.rng_seed = *seed;
    if (collision_mode) cfg.prediction.bound_mode = *collision_mode;
    validate(cfg);

    if (run->parsed()) {
      EpisodeResult res = run_episode(cfg);
      std::filesystem::create_directories(out_dir);
      nlohmann::ordered_json manifest = make_manifest(cfg, config_path, out_dir);
      write_trace_csv(detail::join(out_dir, "trace.csv"), res, cfg);
      write_manifest(detail::join(out_dir, "manifest.json"), manifest);
      std::cout << "outcome: " << to_string(res.outcome) << "\n"
                << "steps: " << res.records.size() << "\n"
                << "steps_to_robot_goal: " << detail::fmt_steps(res.steps_to_robot_goal) << "\n"
                << "steps_to_human_goal: " << detail::fmt_steps(res.steps_to_human_goal) << "\n";
      if (!res.records.empty())
        std::cout << "final p_aware: " << format_double(res.records.back().p_aware) << "\n";
      std::cout << "trace: " << detail::join(out_dir, "trace.csv") << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      std::vector<SweepRow> rows = run_sweep(cfg, param, values, reps);
      std::filesystem::create_directories(out_dir);
      nlohmann::ordered_json manifest = make_manifest(cfg, config_path, out_dir);
      manifest["sweep"] = {{"param", param}, {"values", values}, {"reps", reps}};
      write_sweep_csv(detail::join(out_dir, "sweep.csv"), rows, cfg.robot.t_r);
      write_manifest(detail::join(out_dir, "manifest.json"), manifest);
      std::cout << "rows: " << rows.size() << "\n"
                << "sweep: " << detail::join(out_dir, "sweep.csv") << "\n";
      return 0;
    }

    // forecast: replay the episode up to the requested step, then dump the
    // occupancy table along the plan chosen from that state.
    Simulator sim(cfg);
    for (int i = 0; i < at_step; ++i) {
      if (!sim.step())
        throw std::runtime_error("episode ended at step " + std::to_string(sim.t()) +
                                 ", before --at-step " + std::to_string(at_step));
    }
    if (sim.done())
      throw std::runtime_error("episode ended at step " + std::to_string(sim.t()) +
                               ", before --at-step " + std::to_string(at_step));
    PlanResult plan = sim.plan_now();
    std::vector<AgentState> traj(plan.states.begin(), plan.states.begin() + cfg.robot.t_r + 1);
    OccupancyForecast fc = sim.engine().forecast(sim.x_h(), sim.belief(), traj);
    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json manifest = make_manifest(cfg, config_path, out_dir);
    manifest["forecast"] = {{"at_step", at_step}};
    write_forecast_csv(detail::join(out_dir, "forecast.csv"), sim.engine().grid(), fc);
    write_manifest(detail::join(out_dir, "manifest.json"), manifest);
    std::cout << "forecast at step " << at_step << " (horizon " << fc.horizon << ")\n"
              << "forecast: " << detail::join(out_dir, "forecast.csv") << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace vigil
