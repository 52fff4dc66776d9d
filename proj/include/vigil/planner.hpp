#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vigil/belief.hpp"
#include "vigil/core.hpp"
#include "vigil/prediction.hpp"

namespace vigil {

struct RobotObjectives {
  double theta1 = 1.0;
  double theta2 = 0.5;
  AgentState goal;

  double stage_cost(const AgentState& x, const Action& u) const {
    return theta1 * (x + u - goal).squaredNorm() + theta2 * u.squaredNorm();
  }
};

struct PlanResult {
  std::vector<Action> actions;        // t_r + 1 entries; only the first is executed
  Action first_action;                // == actions.front()
  std::vector<AgentState> states;     // actions.size() + 1 entries, states[0] = current
  int d_r = 0;                        // 1 when the unconstrained optimum was unsafe
  bool feasible = true;               // false only when the fallback had to be used
  bool fallback_used = false;
  double objective_value = 0.0;       // summed stage cost of the returned plan
  CollisionProfile collision_profile; // collision probability along the returned plan
};

// Receding-horizon search over open-loop action sequences. The plan spans
// t_r + 1 actions; the collision constraint applies to the first t_r reached
// states (the human forecast runs t_r steps), so the final action is judged
// on cost alone. Sequences are explored in action-index order and ties keep
// the earliest, which makes results reproducible across platforms.
class Planner {
 public:
  Planner(RobotObjectives objectives, ActionSet actions, Dynamics dynamics, int t_r, double p_th)
      : obj_(std::move(objectives)),
        actions_(std::move(actions)),
        dyn_(std::move(dynamics)),
        t_r_(t_r),
        p_th_(p_th) {
    if (t_r_ < 1) throw std::invalid_argument("planner horizon must be >= 1");
    if (actions_.size() == 0) throw std::invalid_argument("planner needs a non-empty action set");
  }

  int horizon_actions() const { return t_r_ + 1; }
  double p_th() const { return p_th_; }

  PlanResult plan(const AgentState& x_r, const AgentState& x_h, const Belief& b,
                  ForecastEngine& engine) {
    Ctx ctx{x_h, b, engine, {}, {}};
    ctx.current.assign(horizon_actions(), 0);

    // Cheapest sequence ignoring the human.
    ctx.best_cost = kInf;
    cost_dfs(ctx, x_r, 0, 0.0);
    std::vector<int> unconstrained = ctx.best;
    double unconstrained_cost = ctx.best_cost;
    std::vector<AgentState> states = rollout(x_r, unconstrained);
    CollisionProfile prof = engine.profile(x_h, b, constrained_prefix(states));
    if (satisfies(prof))
      return make_result(unconstrained, std::move(states), 0, true, false, unconstrained_cost,
                         std::move(prof));

    // The cheapest plan is unsafe: signal, then search with the constraint.
    ctx.best.clear();
    ctx.best_cost = kInf;
    ForecastEngine::ChainState root = engine.initial_chain(x_h);
    constrained_dfs(ctx, x_r, 0, 0.0, root);
    if (!ctx.best.empty()) {
      states = rollout(x_r, ctx.best);
      prof = engine.profile(x_h, b, constrained_prefix(states));
      return make_result(ctx.best, std::move(states), 1, true, false, ctx.best_cost,
                         std::move(prof));
    }

    // Nothing satisfies the threshold; take the sequence whose worst step is
    // least dangerous, breaking ties by cost and then action order.
    ctx.best.clear();
    ctx.best_cost = kInf;
    ctx.best_max = kInf;
    fallback_dfs(ctx, x_r, 0, 0.0, 0.0, root);
    states = rollout(x_r, ctx.best);
    prof = engine.profile(x_h, b, constrained_prefix(states));
    return make_result(ctx.best, std::move(states), 1, false, true, ctx.best_cost,
                       std::move(prof));
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Ctx {
    const AgentState& x_h;
    const Belief& b;
    ForecastEngine& engine;
    std::vector<int> current;
    std::vector<int> best;
    double best_cost = kInf;
    double best_max = kInf;
  };

  bool satisfies(const CollisionProfile& prof) const {
    for (int k = 1; k <= t_r_; ++k)
      if (prof.p[k] > p_th_) return false;
    return true;
  }

  std::vector<AgentState> rollout(const AgentState& x_r, const std::vector<int>& idx) const {
    std::vector<AgentState> states;
    states.reserve(idx.size() + 1);
    states.push_back(x_r);
    for (int i : idx) states.push_back(dyn_(states.back(), actions_[i]));
    return states;
  }

  // States whose occupancy forecast exists: the first t_r transitions.
  std::vector<AgentState> constrained_prefix(const std::vector<AgentState>& states) const {
    return std::vector<AgentState>(states.begin(), states.begin() + t_r_ + 1);
  }

  PlanResult make_result(const std::vector<int>& idx, std::vector<AgentState> states, int d_r,
                         bool feasible, bool fallback, double objective,
                         CollisionProfile prof) const {
    PlanResult r;
    r.actions.reserve(idx.size());
    for (int i : idx) r.actions.push_back(actions_[i]);
    r.first_action = r.actions.front();
    r.states = std::move(states);
    r.d_r = d_r;
    r.feasible = feasible;
    r.fallback_used = fallback;
    r.objective_value = objective;
    r.collision_profile = std::move(prof);
    return r;
  }

  void cost_dfs(Ctx& ctx, const AgentState& x, int depth, double cost) {
    if (depth == horizon_actions()) {
      ctx.best = ctx.current;
      ctx.best_cost = cost;
      return;
    }
    for (int i = 0; i < actions_.size(); ++i) {
      const double c = cost + obj_.stage_cost(x, actions_[i]);
      if (c >= ctx.best_cost) continue;
      ctx.current[depth] = i;
      cost_dfs(ctx, dyn_(x, actions_[i]), depth + 1, c);
    }
  }

  void constrained_dfs(Ctx& ctx, const AgentState& x, int depth, double cost,
                       const ForecastEngine::ChainState& cs) {
    if (depth == horizon_actions()) {
      ctx.best = ctx.current;
      ctx.best_cost = cost;
      return;
    }
    for (int i = 0; i < actions_.size(); ++i) {
      const double c = cost + obj_.stage_cost(x, actions_[i]);
      if (c >= ctx.best_cost) continue;
      AgentState next = dyn_(x, actions_[i]);
      ctx.current[depth] = i;
      if (depth + 1 <= t_r_) {
        ForecastEngine::ChainState child = cs;
        const double p = ctx.engine.step_chain(child, ctx.b, x, next);
        if (p > p_th_) continue;
        constrained_dfs(ctx, next, depth + 1, c, child);
      } else {
        constrained_dfs(ctx, next, depth + 1, c, cs);
      }
    }
  }

  void fallback_dfs(Ctx& ctx, const AgentState& x, int depth, double cost, double worst,
                    const ForecastEngine::ChainState& cs) {
    if (depth == horizon_actions()) {
      ctx.best = ctx.current;
      ctx.best_max = worst;
      ctx.best_cost = cost;
      return;
    }
    for (int i = 0; i < actions_.size(); ++i) {
      const double c = cost + obj_.stage_cost(x, actions_[i]);
      if (worst > ctx.best_max || (worst == ctx.best_max && c >= ctx.best_cost)) continue;
      AgentState next = dyn_(x, actions_[i]);
      ctx.current[depth] = i;
      if (depth + 1 <= t_r_) {
        ForecastEngine::ChainState child = cs;
        const double p = ctx.engine.step_chain(child, ctx.b, x, next);
        const double w = std::max(worst, p);
        if (w > ctx.best_max || (w == ctx.best_max && c >= ctx.best_cost)) continue;
        fallback_dfs(ctx, next, depth + 1, c, w, child);
      } else {
        fallback_dfs(ctx, next, depth + 1, c, worst, cs);
      }
    }
  }

  RobotObjectives obj_;
  ActionSet actions_;
  Dynamics dyn_;
  int t_r_;
  double p_th_;
};

}  // namespace vigil
