#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "vigil/config.hpp"
#include "vigil/grid.hpp"
#include "vigil/prediction.hpp"
#include "vigil/sim.hpp"
#include "vigil/version.hpp"

namespace vigil {

// Shortest round-trippable decimal form. Output files are expected to be
// byte-identical across reruns, so everything numeric goes through here.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("refusing to write non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

inline void append_vec(std::string& line, const AgentState& v) {
  for (int i = 0; i < v.size(); ++i) {
    line += ',';
    line += format_double(v[i]);
  }
}

}  // namespace detail

inline void write_trace_csv(const std::string& path, const EpisodeResult& result,
                            const ScenarioConfig& cfg) {
  const int dims = static_cast<int>(cfg.robot.goal.size());
  const int t_r = cfg.robot.t_r;
  std::ofstream out = detail::open_out(path);

  std::string header = "t";
  auto vec_cols = [&](const std::string& name) {
    for (int i = 0; i < dims; ++i) header += "," + name + "_" + std::to_string(i);
  };
  vec_cols("x_r");
  vec_cols("x_h");
  vec_cols("u_r");
  vec_cols("u_h");
  header += ",d_r,p_aware";
  for (int k = 1; k <= t_r; ++k) header += ",p_coll_" + std::to_string(k);
  vec_cols("x_r_est_human");
  header += ",fallback_used";
  out << header << '\n';

  for (const StepRecord& r : result.records) {
    std::string line = std::to_string(r.t);
    detail::append_vec(line, r.x_r);
    detail::append_vec(line, r.x_h);
    detail::append_vec(line, r.u_r);
    detail::append_vec(line, r.u_h);
    line += ',';
    line += std::to_string(r.d_r);
    line += ',';
    line += format_double(r.p_aware);
    for (double p : r.p_coll) {
      line += ',';
      line += format_double(p);
    }
    detail::append_vec(line, r.x_r_est_human);
    line += ',';
    line += r.fallback_used ? '1' : '0';
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, int t_r) {
  std::ofstream out = detail::open_out(path);
  std::string header = "param,value,rep,seed,outcome,steps_to_robot_goal,steps_to_human_goal,collision";
  for (int k = 1; k <= t_r; ++k) header += ",entropy_" + std::to_string(k);
  out << header << '\n';
  for (const SweepRow& r : rows) {
    std::string line = r.param;
    line += ',' + format_double(r.value);
    line += ',' + std::to_string(r.rep);
    line += ',' + std::to_string(r.seed);
    line += ',';
    line += to_string(r.outcome);
    line += ',';
    if (r.steps_to_robot_goal) line += std::to_string(*r.steps_to_robot_goal);
    line += ',';
    if (r.steps_to_human_goal) line += std::to_string(*r.steps_to_human_goal);
    line += ',';
    line += r.collision ? '1' : '0';
    for (double h : r.entropy) {
      line += ',';
      line += format_double(h);
    }
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

inline void write_forecast_csv(const std::string& path, const Grid& grid,
                               const OccupancyForecast& fc) {
  const int dims = grid.dims();
  std::ofstream out = detail::open_out(path);
  std::string header = "k,cell";
  for (int i = 0; i < dims; ++i) header += ",center_" + std::to_string(i);
  header += ",mass_unaware,mass_aware,mass";
  out << header << '\n';
  for (int k = 1; k <= fc.horizon; ++k) {
    const auto& s = fc.steps[k - 1];
    for (int c = 0; c <= grid.num_cells(); ++c) {
      const bool is_sink = c == grid.num_cells();
      std::string line = std::to_string(k);
      line += ',' + std::to_string(is_sink ? -1 : c);
      if (is_sink) {
        for (int i = 0; i < dims; ++i) line += ',';
      } else {
        detail::append_vec(line, grid.center_of_flat(c));
      }
      const double mu = s[0][c];
      const double ma = s[1][c];
      line += ',' + format_double(mu);
      line += ',' + format_double(ma);
      line += ',' + format_double(fc.w_unaware * mu + fc.w_aware * ma);
      out << line << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

inline nlohmann::ordered_json make_manifest(const ScenarioConfig& cfg,
                                            const std::string& config_path,
                                            const std::string& out_dir) {
  nlohmann::ordered_json m;
  m["tool"] = "vigil";
  m["version"] = kVersion;
  m["config_path"] = config_path;
  m["out_dir"] = out_dir;
  m["seed"] = cfg.simulation.rng_seed;
  m["config"] = config_to_json(cfg);
  return m;
}

inline void write_manifest(const std::string& path, const nlohmann::ordered_json& manifest) {
  std::ofstream out = detail::open_out(path);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

}  // namespace vigil
