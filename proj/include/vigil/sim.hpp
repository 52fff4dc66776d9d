#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vigil/belief.hpp"
#include "vigil/config.hpp"
#include "vigil/core.hpp"
#include "vigil/human_model.hpp"
#include "vigil/planner.hpp"
#include "vigil/prediction.hpp"
#include "vigil/rng.hpp"

namespace vigil {

struct StepRecord {
  int t = 0;
  AgentState x_r;  // positions at decision time
  AgentState x_h;
  Action u_r;
  Action u_h;
  int d_r = 0;
  double p_aware = 0.5;          // posterior after observing u_h
  std::vector<double> p_coll;    // collision probability at plan steps 1..t_r
  AgentState x_r_est_human;      // what the human believed the robot position was
  bool fallback_used = false;
};

enum class Outcome { kRobotReachedGoal, kHumanReachedGoal, kBothReached, kCollision, kTimeout };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kRobotReachedGoal: return "robot_reached_goal";
    case Outcome::kHumanReachedGoal: return "human_reached_goal";
    case Outcome::kBothReached: return "both_reached";
    case Outcome::kCollision: return "collision";
    case Outcome::kTimeout: return "timeout";
  }
  return "unknown";
}

struct EpisodeResult {
  std::vector<StepRecord> records;
  Outcome outcome = Outcome::kTimeout;
  std::optional<int> steps_to_robot_goal;
  std::optional<int> steps_to_human_goal;
};

// Closed-loop episode: plan, signal, let the human act on its (possibly
// mistaken) view of the robot, update the awareness belief against the true
// robot position, then move both agents.
class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& cfg) : Simulator(cfg, cfg.simulation.rng_seed) {}

  Simulator(const ScenarioConfig& cfg, std::uint64_t seed)
      : cfg_(cfg),
        engine_(cfg.prediction.grid.to_grid(),
                HumanPredictor{HumanObjectives{cfg.human.theta3, cfg.human.theta4,
                                               cfg.human.theta5, cfg.human.theta6,
                                               cfg.human.goal, cfg.human.v_ref},
                               cfg.human.gamma, cfg.human.omega_h, cfg.human.action_set},
                cfg.prediction.rho, bound_mode_from_string(cfg.prediction.bound_mode)),
        planner_(RobotObjectives{cfg.robot.theta1, cfg.robot.theta2, cfg.robot.goal},
                 ActionSet{cfg.robot.action_set}, integrator_dynamics(), cfg.robot.t_r,
                 cfg.robot.p_th),
        noise_{noise_mode_from_string(cfg.simulation.noise_mode), cfg.human.sigma,
               cfg.human.epsilon0, cfg.human.eta},
        rng_(seed),
        belief_{cfg.prior.p_unaware, cfg.prior.p_aware},
        x_r_(cfg.robot.start),
        x_h_(cfg.human.start),
        dyn_(integrator_dynamics()) {
    if ((x_r_ - x_h_).norm() <= cfg_.prediction.rho) {
      done_ = true;
      outcome_ = Outcome::kCollision;
    }
  }

  bool done() const { return done_; }
  int t() const { return t_; }
  const AgentState& x_r() const { return x_r_; }
  const AgentState& x_h() const { return x_h_; }
  const Belief& belief() const { return belief_; }
  const std::vector<StepRecord>& records() const { return records_; }
  ForecastEngine& engine() { return engine_; }
  const ScenarioConfig& config() const { return cfg_; }

  PlanResult plan_now() { return planner_.plan(x_r_, x_h_, belief_, engine_); }

  // Advances one step. Returns false if the episode had already ended.
  bool step() {
    if (done_) return false;

    PlanResult plan = plan_now();
    const int d_r = plan.d_r;
    if (d_r == 1 && !t_signal_) t_signal_ = t_;

    AgentState x_r_est =
        noise_.estimate(x_r_, t_, d_r == 1, t_signal_.value_or(t_), rng_);
    const auto& pred = engine_.predictor();
    const int uh_idx =
        simulate_human_action(pred.objectives, pred.actions, x_h_, cfg_.human.beta_true,
                              x_r_est, pred.omega, cfg_.simulation.human_randomness, rng_);

    // The belief is scored against the true robot position: the observer
    // knows where the robot really was, only the human may not.
    const double lik_u = pred.mixture(x_h_, 0, x_r_)[uh_idx];
    const double lik_a = pred.mixture(x_h_, 1, x_r_)[uh_idx];
    belief_ = update_belief(belief_, lik_u, lik_a);

    StepRecord rec;
    rec.t = t_;
    rec.x_r = x_r_;
    rec.x_h = x_h_;
    rec.u_r = plan.actions.front();
    rec.u_h = pred.actions[uh_idx];
    rec.d_r = d_r;
    rec.p_aware = belief_.p_aware;
    rec.p_coll.assign(plan.collision_profile.p.begin() + 1, plan.collision_profile.p.end());
    rec.x_r_est_human = std::move(x_r_est);
    rec.fallback_used = plan.fallback_used;
    records_.push_back(std::move(rec));

    x_r_ = dyn_(x_r_, plan.actions.front());
    x_h_ = dyn_(x_h_, pred.actions[uh_idx]);
    ++t_;

    if ((x_r_ - x_h_).norm() <= cfg_.prediction.rho) {
      done_ = true;
      outcome_ = Outcome::kCollision;
      return true;
    }
    if (!steps_r_ && states_equal(x_r_, cfg_.robot.goal)) steps_r_ = t_;
    if (!steps_h_ && states_equal(x_h_, cfg_.human.goal)) steps_h_ = t_;
    if (steps_r_ && steps_h_) {
      done_ = true;
      outcome_ = Outcome::kBothReached;
      return true;
    }
    if (t_ >= cfg_.simulation.max_steps) {
      done_ = true;
      if (steps_r_)
        outcome_ = Outcome::kRobotReachedGoal;
      else if (steps_h_)
        outcome_ = Outcome::kHumanReachedGoal;
      else
        outcome_ = Outcome::kTimeout;
    }
    return true;
  }

  EpisodeResult result() const {
    if (!done_) throw std::logic_error("episode still running");
    return EpisodeResult{records_, outcome_, steps_r_, steps_h_};
  }

 private:
  ScenarioConfig cfg_;
  ForecastEngine engine_;
  Planner planner_;
  EstimationNoise noise_;
  Rng rng_;
  Belief belief_;
  AgentState x_r_;
  AgentState x_h_;
  Dynamics dyn_;
  int t_ = 0;
  std::optional<int> t_signal_;
  std::optional<int> steps_r_;
  std::optional<int> steps_h_;
  std::vector<StepRecord> records_;
  bool done_ = false;
  Outcome outcome_ = Outcome::kTimeout;
};

inline EpisodeResult run_episode(const ScenarioConfig& cfg) {
  Simulator sim(cfg);
  while (!sim.done()) sim.step();
  return sim.result();
}

// ---------------------------------------------------------------------------
// Parameter sweeps. One episode per (value, rep); the forecast entropy column
// is the time-zero forecast along the planned trajectory, which depends only
// on the configuration, so it is computed once per value.

struct SweepRow {
  std::string param;
  double value = 0.0;
  int rep = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::kTimeout;
  std::optional<int> steps_to_robot_goal;
  std::optional<int> steps_to_human_goal;
  bool collision = false;
  std::vector<double> entropy;  // forecast depths 1..t_r
};

inline void apply_sweep_param(ScenarioConfig& cfg, const std::string& param, double value) {
  if (param == "omega_h") cfg.human.omega_h = value;
  else if (param == "p_th") cfg.robot.p_th = value;
  else if (param == "rho") cfg.prediction.rho = value;
  else if (param == "gamma") cfg.human.gamma = value;
  else if (param == "sigma") cfg.human.sigma = value;
  else if (param == "eta") cfg.human.eta = value;
  else if (param == "beta_true") cfg.human.beta_true = static_cast<int>(value);
  else if (param == "rng_seed") cfg.simulation.rng_seed = static_cast<std::uint64_t>(value);
  else if (param == "max_steps") cfg.simulation.max_steps = static_cast<int>(value);
  else if (param == "theta1") cfg.robot.theta1 = value;
  else if (param == "theta2") cfg.robot.theta2 = value;
  else if (param == "theta3") cfg.human.theta3 = value;
  else if (param == "theta4") cfg.human.theta4 = value;
  else if (param == "theta5") cfg.human.theta5 = value;
  else if (param == "theta6") cfg.human.theta6 = value;
  else if (param == "epsilon0_x") cfg.human.epsilon0[0] = value;
  else if (param == "epsilon0_y") {
    if (cfg.human.epsilon0.size() < 2)
      throw std::invalid_argument("epsilon0_y needs a second axis");
    cfg.human.epsilon0[1] = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + param);
  }
}

inline std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::string& param,
                                       const std::vector<double>& values, int reps) {
  if (reps < 1) throw std::invalid_argument("sweep needs reps >= 1");
  std::vector<SweepRow> rows;
  for (double value : values) {
    ScenarioConfig cfg = base;
    apply_sweep_param(cfg, param, value);
    validate(cfg);

    std::vector<double> entropy(cfg.robot.t_r);
    {
      Simulator probe(cfg);
      PlanResult plan = probe.plan_now();
      std::vector<AgentState> traj(plan.states.begin(),
                                   plan.states.begin() + cfg.robot.t_r + 1);
      OccupancyForecast fc = probe.engine().forecast(probe.x_h(), probe.belief(), traj);
      for (int k = 1; k <= cfg.robot.t_r; ++k) entropy[k - 1] = fc.entropy(k);
    }

    for (int rep = 0; rep < reps; ++rep) {
      ScenarioConfig ep = cfg;
      ep.simulation.rng_seed = cfg.simulation.rng_seed + static_cast<std::uint64_t>(rep);
      EpisodeResult res = run_episode(ep);
      SweepRow row;
      row.param = param;
      row.value = value;
      row.rep = rep;
      row.seed = ep.simulation.rng_seed;
      row.outcome = res.outcome;
      row.steps_to_robot_goal = res.steps_to_robot_goal;
      row.steps_to_human_goal = res.steps_to_human_goal;
      row.collision = res.outcome == Outcome::kCollision;
      row.entropy = entropy;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace vigil
