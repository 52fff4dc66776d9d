#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vigil/core.hpp"
#include "vigil/rng.hpp"

namespace vigil {

// Cost terms the modeled pedestrian trades off when picking a step.
struct HumanObjectives {
  double theta3 = 2.5;   // goal attraction
  double theta4 = 8e-3;  // preferred-velocity penalty
  double theta5 = 300.0; // proximity penalty scale
  double theta6 = 6e-3;  // proximity penalty range
  AgentState goal;
  AgentState v_ref;

  double goal_cost(const AgentState& x, const Action& u) const {
    return theta3 * (x + u - goal).squaredNorm() + theta4 * (u - v_ref).squaredNorm();
  }

  // Exponential proximity penalty against the human's estimate of the robot.
  double safety_cost(const AgentState& x, const Action& u, const AgentState& x_r_est) const {
    return theta5 * std::exp(-theta6 * (x + u - x_r_est).norm());
  }
};

// Softmax choice model over the action set, sharpened by gamma. beta = 0
// ignores the robot entirely; beta = 1 adds the proximity penalty.
// Max-subtraction keeps the exponentials in range; at large gamma the
// distribution collapses to a point mass on the cheapest action.
inline std::vector<double> deliberate_distribution(const HumanObjectives& obj,
                                                   const std::vector<Action>& actions,
                                                   const AgentState& x, int beta,
                                                   const AgentState& x_r_est, double gamma) {
  const int n = static_cast<int>(actions.size());
  std::vector<double> cost(n);
  for (int i = 0; i < n; ++i) {
    cost[i] = obj.goal_cost(x, actions[i]);
    if (beta != 0) cost[i] += obj.safety_cost(x, actions[i], x_r_est);
  }
  double m = cost[0];
  for (int i = 1; i < n; ++i) m = std::min(m, cost[i]);
  std::vector<double> w(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    w[i] = std::exp(-gamma * (cost[i] - m));
    z += w[i];
  }
  for (int i = 0; i < n; ++i) w[i] /= z;
  return w;
}

// Blend of the deliberate policy with a uniform deviation floor.
inline std::vector<double> mixture_distribution(const std::vector<double>& deliberate,
                                                double omega) {
  const int n = static_cast<int>(deliberate.size());
  std::vector<double> p(n);
  const double u = omega / n;
  for (int i = 0; i < n; ++i) p[i] = (1.0 - omega) * deliberate[i] + u;
  return p;
}

// Index of the cheapest action; earliest index wins ties.
inline int argmin_action(const HumanObjectives& obj, const std::vector<Action>& actions,
                         const AgentState& x, int beta, const AgentState& x_r_est) {
  int best = 0;
  double best_cost = obj.goal_cost(x, actions[0]) +
                     (beta != 0 ? obj.safety_cost(x, actions[0], x_r_est) : 0.0);
  for (int i = 1; i < static_cast<int>(actions.size()); ++i) {
    double c = obj.goal_cost(x, actions[i]) +
               (beta != 0 ? obj.safety_cost(x, actions[i], x_r_est) : 0.0);
    if (c < best_cost) {
      best = i;
      best_cost = c;
    }
  }
  return best;
}

// One simulated decision. With randomness enabled the human deviates to a
// uniform action with probability omega, otherwise plays the cost minimizer.
inline int simulate_human_action(const HumanObjectives& obj, const std::vector<Action>& actions,
                                 const AgentState& x, int beta, const AgentState& x_r_est,
                                 double omega, bool randomness, Rng& rng) {
  if (randomness && rng.uniform01() < omega)
    return rng.uniform_int(static_cast<int>(actions.size()));
  return argmin_action(obj, actions, x, beta, x_r_est);
}

enum class NoiseMode { kGaussian, kConstantBias };

inline NoiseMode noise_mode_from_string(const std::string& s) {
  if (s == "gaussian") return NoiseMode::kGaussian;
  if (s == "constant_bias") return NoiseMode::kConstantBias;
  throw std::invalid_argument("unknown noise mode: " + s);
}

// How the human perceives the robot's position. Gaussian mode draws fresh
// i.i.d. noise each step. Constant-bias mode offsets the estimate by
// epsilon0, decaying exponentially from the moment the robot's signal first
// turns on; while the signal is off the full bias applies.
struct EstimationNoise {
  NoiseMode mode = NoiseMode::kConstantBias;
  double sigma = 1.0;
  AgentState epsilon0;
  double eta = 0.5;

  AgentState bias_at(int t, bool signal_on, int t_signal) const {
    if (!signal_on) return epsilon0;
    return epsilon0 * std::exp(-eta * static_cast<double>(t - t_signal));
  }

  AgentState estimate(const AgentState& x_r, int t, bool signal_on, int t_signal,
                      Rng& rng) const {
    if (mode == NoiseMode::kGaussian) {
      AgentState e(x_r.size());
      for (int i = 0; i < e.size(); ++i) e[i] = x_r[i] + sigma * rng.gaussian();
      return e;
    }
    return x_r + bias_at(t, signal_on, t_signal);
  }
};

}  // namespace vigil
