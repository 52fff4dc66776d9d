#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "vigil/core.hpp"
#include "vigil/grid.hpp"

namespace vigil {

// Validation failure that names the offending config field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RobotConfig {
  std::string dynamics = "integrator";
  std::vector<Action> action_set;
  AgentState start;
  AgentState goal;
  double theta1 = 1.0;
  double theta2 = 0.5;
  int t_r = 5;       // planning horizon, steps
  double p_th = 0.1; // per-step collision probability threshold
};

struct HumanConfig {
  std::string dynamics = "integrator";
  std::vector<Action> action_set;
  AgentState start;
  AgentState goal;
  double theta3 = 2.5;
  double theta4 = 8e-3;
  double theta5 = 300.0;
  double theta6 = 6e-3;
  double gamma = 1000.0;   // rationality sharpness
  double omega_h = 0.1;    // deviation probability
  int beta_true = 1;       // simulated human's actual awareness
  double sigma = 1.0;      // gaussian estimation noise std dev (per axis)
  AgentState epsilon0;     // constant estimation bias, per axis
  double eta = 0.5;        // bias decay rate once the signal is on
  AgentState v_ref;        // walking reference velocity in the goal cost
};

struct GridConfig {
  AgentState origin;
  AgentState cell_size;
  std::vector<int> counts;

  Grid to_grid() const { return Grid{origin, cell_size, counts}; }
};

struct PredictionConfig {
  GridConfig grid;
  double rho = 2.0;                // collision radius (position units)
  std::string bound_mode = "exact";  // exact | marginal
};

struct PriorConfig {
  double p_unaware = 0.5;
  double p_aware = 0.5;
};

struct SimulationConfig {
  int max_steps = 200;
  std::uint64_t rng_seed = 1;
  bool human_randomness = false;
  std::string noise_mode = "constant_bias";  // gaussian | constant_bias
};

struct ScenarioConfig {
  RobotConfig robot;
  HumanConfig human;
  PredictionConfig prediction;
  PriorConfig prior;
  SimulationConfig simulation;
};

// ---------------------------------------------------------------------------
// JSON (de)serialization. Scenario files are plain JSON; the manifest embeds
// the same schema so a recorded run can be replayed from its snapshot.

namespace detail {

inline AgentState vec_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of numbers");
  AgentState v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(field, "expected numeric entries");
    v[i] = j[i].get<double>();
  }
  return v;
}

inline nlohmann::json vec_to_json(const AgentState& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

inline std::vector<Action> actions_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of action vectors");
  std::vector<Action> out;
  out.reserve(j.size());
  for (const auto& a : j) out.push_back(vec_from_json(a, field));
  return out;
}

inline nlohmann::json actions_to_json(const std::vector<Action>& actions) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : actions) j.push_back(vec_to_json(a));
  return j;
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

// Smallest positive component per axis over the action set; the documented
// default for the walking reference velocity.
inline AgentState default_v_ref(const std::vector<Action>& actions) {
  if (actions.empty()) return AgentState();
  AgentState v = AgentState::Zero(actions.front().size());
  for (int a = 0; a < v.size(); ++a) {
    double best = 0.0;
    for (const auto& u : actions)
      if (u[a] > 0.0 && (best == 0.0 || u[a] < best)) best = u[a];
    v[a] = best;
  }
  return v;
}

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  if (!j.contains("robot")) throw ConfigError("robot", "missing section");
  if (!j.contains("human")) throw ConfigError("human", "missing section");
  if (!j.contains("prediction")) throw ConfigError("prediction", "missing section");

  const auto& r = j.at("robot");
  cfg.robot.dynamics = detail::get_or<std::string>(r, "dynamics", "integrator");
  if (!r.contains("action_set")) throw ConfigError("robot.action_set", "missing");
  cfg.robot.action_set = detail::actions_from_json(r.at("action_set"), "robot.action_set");
  if (!r.contains("goal")) throw ConfigError("robot.goal", "missing");
  cfg.robot.goal = detail::vec_from_json(r.at("goal"), "robot.goal");
  cfg.robot.start = r.contains("start") ? detail::vec_from_json(r.at("start"), "robot.start")
                                        : AgentState(AgentState::Zero(cfg.robot.goal.size()));
  cfg.robot.theta1 = detail::get_or<double>(r, "theta1", cfg.robot.theta1);
  cfg.robot.theta2 = detail::get_or<double>(r, "theta2", cfg.robot.theta2);
  cfg.robot.t_r = detail::get_or<int>(r, "t_r", cfg.robot.t_r);
  cfg.robot.p_th = detail::get_or<double>(r, "p_th", cfg.robot.p_th);

  const auto& h = j.at("human");
  cfg.human.dynamics = detail::get_or<std::string>(h, "dynamics", "integrator");
  if (!h.contains("action_set")) throw ConfigError("human.action_set", "missing");
  cfg.human.action_set = detail::actions_from_json(h.at("action_set"), "human.action_set");
  if (!h.contains("goal")) throw ConfigError("human.goal", "missing");
  cfg.human.goal = detail::vec_from_json(h.at("goal"), "human.goal");
  if (h.contains("start")) {
    cfg.human.start = detail::vec_from_json(h.at("start"), "human.start");
  } else {
    // Documented fallback start for the street-crossing family.
    cfg.human.start = AgentState(cfg.human.goal.size());
    cfg.human.start.setZero();
    cfg.human.start[0] = 40.0;
    if (cfg.human.start.size() > 1) cfg.human.start[1] = 10.0;
  }
  cfg.human.theta3 = detail::get_or<double>(h, "theta3", cfg.human.theta3);
  cfg.human.theta4 = detail::get_or<double>(h, "theta4", cfg.human.theta4);
  cfg.human.theta5 = detail::get_or<double>(h, "theta5", cfg.human.theta5);
  cfg.human.theta6 = detail::get_or<double>(h, "theta6", cfg.human.theta6);
  cfg.human.gamma = detail::get_or<double>(h, "gamma", cfg.human.gamma);
  cfg.human.omega_h = detail::get_or<double>(h, "omega_h", cfg.human.omega_h);
  cfg.human.beta_true = detail::get_or<int>(h, "beta_true", cfg.human.beta_true);
  cfg.human.sigma = detail::get_or<double>(h, "sigma", cfg.human.sigma);
  cfg.human.epsilon0 = h.contains("epsilon0")
                           ? detail::vec_from_json(h.at("epsilon0"), "human.epsilon0")
                           : AgentState(AgentState::Zero(cfg.human.goal.size()));
  cfg.human.eta = detail::get_or<double>(h, "eta", cfg.human.eta);
  cfg.human.v_ref = h.contains("v_ref") ? detail::vec_from_json(h.at("v_ref"), "human.v_ref")
                                        : detail::default_v_ref(cfg.human.action_set);

  const auto& p = j.at("prediction");
  if (!p.contains("grid")) throw ConfigError("prediction.grid", "missing");
  const auto& g = p.at("grid");
  if (!g.contains("origin")) throw ConfigError("prediction.grid.origin", "missing");
  if (!g.contains("cell_size")) throw ConfigError("prediction.grid.cell_size", "missing");
  if (!g.contains("counts")) throw ConfigError("prediction.grid.counts", "missing");
  cfg.prediction.grid.origin = detail::vec_from_json(g.at("origin"), "prediction.grid.origin");
  cfg.prediction.grid.cell_size =
      detail::vec_from_json(g.at("cell_size"), "prediction.grid.cell_size");
  cfg.prediction.grid.counts = g.at("counts").get<std::vector<int>>();
  cfg.prediction.rho = detail::get_or<double>(p, "rho", cfg.prediction.rho);
  cfg.prediction.bound_mode = detail::get_or<std::string>(p, "bound_mode", cfg.prediction.bound_mode);

  if (j.contains("prior")) {
    cfg.prior.p_unaware = detail::get_or<double>(j.at("prior"), "p_unaware", cfg.prior.p_unaware);
    cfg.prior.p_aware = detail::get_or<double>(j.at("prior"), "p_aware", cfg.prior.p_aware);
  }

  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    cfg.simulation.max_steps = detail::get_or<int>(s, "max_steps", cfg.simulation.max_steps);
    cfg.simulation.rng_seed = detail::get_or<std::uint64_t>(s, "rng_seed", cfg.simulation.rng_seed);
    if (s.contains("human_randomness")) {
      std::string v = s.at("human_randomness").get<std::string>();
      if (v != "on" && v != "off")
        throw ConfigError("simulation.human_randomness", "expected 'on' or 'off', got '" + v + "'");
      cfg.simulation.human_randomness = (v == "on");
    }
    cfg.simulation.noise_mode = detail::get_or<std::string>(s, "noise_mode", cfg.simulation.noise_mode);
  }
  return cfg;
}

inline nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["robot"] = {{"dynamics", cfg.robot.dynamics},
                {"action_set", detail::actions_to_json(cfg.robot.action_set)},
                {"start", detail::vec_to_json(cfg.robot.start)},
                {"goal", detail::vec_to_json(cfg.robot.goal)},
                {"theta1", cfg.robot.theta1},
                {"theta2", cfg.robot.theta2},
                {"t_r", cfg.robot.t_r},
                {"p_th", cfg.robot.p_th}};
  j["human"] = {{"dynamics", cfg.human.dynamics},
                {"action_set", detail::actions_to_json(cfg.human.action_set)},
                {"start", detail::vec_to_json(cfg.human.start)},
                {"goal", detail::vec_to_json(cfg.human.goal)},
                {"theta3", cfg.human.theta3},
                {"theta4", cfg.human.theta4},
                {"theta5", cfg.human.theta5},
                {"theta6", cfg.human.theta6},
                {"gamma", cfg.human.gamma},
                {"omega_h", cfg.human.omega_h},
                {"beta_true", cfg.human.beta_true},
                {"sigma", cfg.human.sigma},
                {"epsilon0", detail::vec_to_json(cfg.human.epsilon0)},
                {"eta", cfg.human.eta},
                {"v_ref", detail::vec_to_json(cfg.human.v_ref)}};
  j["prediction"] = {{"grid",
                      {{"origin", detail::vec_to_json(cfg.prediction.grid.origin)},
                       {"cell_size", detail::vec_to_json(cfg.prediction.grid.cell_size)},
                       {"counts", cfg.prediction.grid.counts}}},
                     {"rho", cfg.prediction.rho},
                     {"bound_mode", cfg.prediction.bound_mode}};
  j["prior"] = {{"p_unaware", cfg.prior.p_unaware}, {"p_aware", cfg.prior.p_aware}};
  j["simulation"] = {{"max_steps", cfg.simulation.max_steps},
                     {"rng_seed", cfg.simulation.rng_seed},
                     {"human_randomness", cfg.simulation.human_randomness ? "on" : "off"},
                     {"noise_mode", cfg.simulation.noise_mode}};
  return j;
}

// ---------------------------------------------------------------------------
// Validation. Every rejected parameter names its field.

namespace detail {

inline void check_finite(const AgentState& v, const std::string& field) {
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw ConfigError(field, "entries must be finite");
}

inline void check_dims(const AgentState& v, int dims, const std::string& field) {
  check_finite(v, field);
  if (v.size() != dims)
    throw ConfigError(field, "expected dimension " + std::to_string(dims) + ", got " +
                                 std::to_string(static_cast<int>(v.size())));
}

inline void check_action_set(const std::vector<Action>& actions, int dims, const std::string& field) {
  if (actions.empty()) throw ConfigError(field, "must not be empty");
  for (const auto& a : actions) check_dims(a, dims, field);
  for (size_t i = 0; i < actions.size(); ++i)
    for (size_t k = i + 1; k < actions.size(); ++k)
      if (actions[i] == actions[k])
        throw ConfigError(field, "duplicate action at indices " + std::to_string(i) + " and " +
                                     std::to_string(k));
}

}  // namespace detail

inline void validate(const ScenarioConfig& cfg) {
  const int dims = static_cast<int>(cfg.robot.goal.size());
  if (dims < 1) throw ConfigError("robot.goal", "must have at least one axis");

  if (cfg.robot.dynamics != "integrator")
    throw ConfigError("robot.dynamics", "unknown kind '" + cfg.robot.dynamics + "'");
  if (cfg.human.dynamics != "integrator")
    throw ConfigError("human.dynamics", "unknown kind '" + cfg.human.dynamics + "'");

  detail::check_action_set(cfg.robot.action_set, dims, "robot.action_set");
  detail::check_dims(cfg.robot.start, dims, "robot.start");
  detail::check_dims(cfg.robot.goal, dims, "robot.goal");
  if (!(cfg.robot.theta1 > 0)) throw ConfigError("robot.theta1", "must be > 0");
  if (!(cfg.robot.theta2 >= 0)) throw ConfigError("robot.theta2", "must be >= 0");
  if (cfg.robot.t_r < 1) throw ConfigError("robot.t_r", "must be >= 1");
  if (!(cfg.robot.p_th >= 0.0 && cfg.robot.p_th <= 1.0))
    throw ConfigError("robot.p_th", "must lie in [0, 1]");

  detail::check_action_set(cfg.human.action_set, dims, "human.action_set");
  detail::check_dims(cfg.human.start, dims, "human.start");
  detail::check_dims(cfg.human.goal, dims, "human.goal");
  detail::check_dims(cfg.human.epsilon0, dims, "human.epsilon0");
  detail::check_dims(cfg.human.v_ref, dims, "human.v_ref");
  if (!(cfg.human.theta3 > 0)) throw ConfigError("human.theta3", "must be > 0");
  if (!(cfg.human.theta4 > 0)) throw ConfigError("human.theta4", "must be > 0");
  if (!(cfg.human.theta5 > 0)) throw ConfigError("human.theta5", "must be > 0");
  if (!(cfg.human.theta6 > 0)) throw ConfigError("human.theta6", "must be > 0");
  if (!(cfg.human.gamma > 0)) throw ConfigError("human.gamma", "must be > 0");
  if (!(cfg.human.omega_h >= 0.0 && cfg.human.omega_h <= 1.0))
    throw ConfigError("human.omega_h", "must lie in [0, 1]");
  if (cfg.human.beta_true != 0 && cfg.human.beta_true != 1)
    throw ConfigError("human.beta_true", "must be 0 or 1");
  if (!(cfg.human.sigma >= 0)) throw ConfigError("human.sigma", "must be >= 0");
  if (!(cfg.human.eta >= 0)) throw ConfigError("human.eta", "must be >= 0");

  const auto& gc = cfg.prediction.grid;
  if (static_cast<int>(gc.counts.size()) != dims)
    throw ConfigError("prediction.grid.counts", "expected dimension " + std::to_string(dims));
  detail::check_dims(gc.origin, dims, "prediction.grid.origin");
  detail::check_dims(gc.cell_size, dims, "prediction.grid.cell_size");
  for (int a = 0; a < dims; ++a) {
    if (gc.counts[a] < 1) throw ConfigError("prediction.grid.counts", "entries must be >= 1");
    if (!(gc.cell_size[a] > 0)) throw ConfigError("prediction.grid.cell_size", "entries must be > 0");
  }
  if (!(cfg.prediction.rho > 0)) throw ConfigError("prediction.rho", "must be > 0");
  if (cfg.prediction.bound_mode != "exact" && cfg.prediction.bound_mode != "marginal")
    throw ConfigError("prediction.bound_mode", "expected 'exact' or 'marginal'");

  if (!(cfg.prior.p_unaware >= 0.0 && cfg.prior.p_unaware <= 1.0))
    throw ConfigError("prior.p_unaware", "must lie in [0, 1]");
  if (!(cfg.prior.p_aware >= 0.0 && cfg.prior.p_aware <= 1.0))
    throw ConfigError("prior.p_aware", "must lie in [0, 1]");
  if (std::abs(cfg.prior.p_unaware + cfg.prior.p_aware - 1.0) > 1e-12)
    throw ConfigError("prior", "p_unaware + p_aware must equal 1");

  if (cfg.simulation.max_steps < 1) throw ConfigError("simulation.max_steps", "must be >= 1");
  if (cfg.simulation.noise_mode != "gaussian" && cfg.simulation.noise_mode != "constant_bias")
    throw ConfigError("simulation.noise_mode", "expected 'gaussian' or 'constant_bias'");

  // Occupancy stays on cell centers only if every human action shifts a whole
  // number of cells and the start sits on a center.
  Grid grid = gc.to_grid();
  for (size_t i = 0; i < cfg.human.action_set.size(); ++i) {
    const Action& u = cfg.human.action_set[i];
    for (int a = 0; a < dims; ++a) {
      double r = u[a] / grid.cell_size[a];
      if (std::abs(r - std::round(r)) > 1e-9)
        throw ConfigError("human.action_set",
                          "action " + std::to_string(i) + " does not shift a whole number of cells on axis " +
                              std::to_string(a));
    }
  }
  if (!grid.contains(cfg.human.start))
    throw ConfigError("human.start", "must lie inside the prediction grid");
  AgentState center = grid.cell_center(grid.state_to_cell(cfg.human.start));
  if ((center - cfg.human.start).lpNorm<Eigen::Infinity>() > 1e-9)
    throw ConfigError("human.start", "must sit on a grid cell center");
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  ScenarioConfig cfg = config_from_json(j);
  validate(cfg);
  return cfg;
}

}  // namespace vigil
