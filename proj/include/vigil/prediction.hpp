#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vigil/belief.hpp"
#include "vigil/core.hpp"
#include "vigil/grid.hpp"
#include "vigil/human_model.hpp"

namespace vigil {

// exact: first-collision probability per step (survival-conditioned chain).
// marginal: per-step band occupancy with no survival conditioning; an upper
// bound on the exact value, cheaper to reason about and always >= exact.
enum class BoundMode { kExact, kMarginal };

inline BoundMode bound_mode_from_string(const std::string& s) {
  if (s == "exact") return BoundMode::kExact;
  if (s == "marginal") return BoundMode::kMarginal;
  throw std::invalid_argument("unknown bound mode: " + s);
}

inline const char* to_string(BoundMode m) {
  return m == BoundMode::kExact ? "exact" : "marginal";
}

// Stochastic one-step policy of the modeled human.
struct HumanPredictor {
  HumanObjectives objectives;
  double gamma = 1000.0;
  double omega = 0.1;
  std::vector<Action> actions;

  std::vector<double> deliberate(const AgentState& x, int beta, const AgentState& x_r) const {
    return deliberate_distribution(objectives, actions, x, beta, x_r, gamma);
  }

  std::vector<double> mixture(const AgentState& x, int beta, const AgentState& x_r) const {
    return mixture_distribution(deliberate(x, beta, x_r), omega);
  }
};

// Grid cells whose centers lie within rho of the robot position (inclusive).
inline std::vector<int> collision_cells(const Grid& grid, const AgentState& x_r, double rho) {
  std::vector<int> out;
  for (int c = 0; c < grid.num_cells(); ++c)
    if ((grid.center_of_flat(c) - x_r).norm() <= rho) out.push_back(c);
  return out;
}

// Precomputed cell transitions. Every human action shifts a whole number of
// cells (validated at config load), so each (cell, action) pair maps to one
// destination flat index, or to the sink when the move leaves the grid. The
// sink is absorbing and never part of a collision band.
class PropagationTable {
 public:
  PropagationTable(const Grid& grid, const std::vector<Action>& actions)
      : n_actions_(static_cast<int>(actions.size())) {
    const int n = grid.num_cells();
    targets_.resize(static_cast<size_t>(n) * n_actions_);
    for (int c = 0; c < n; ++c) {
      AgentState center = grid.center_of_flat(c);
      for (int j = 0; j < n_actions_; ++j) {
        AgentState next = center + actions[j];
        targets_[static_cast<size_t>(c) * n_actions_ + j] =
            grid.contains(next) ? grid.state_to_flat(next) : grid.sink();
      }
    }
  }

  int target(int cell, int action) const {
    return targets_[static_cast<size_t>(cell) * n_actions_ + action];
  }
  int n_actions() const { return n_actions_; }

 private:
  int n_actions_;
  std::vector<int> targets_;
};

// Occupancy distributions per forecast step, kept separate per awareness
// hypothesis and combined with the belief weights only at readout.
struct OccupancyForecast {
  int horizon = 0;
  double w_unaware = 0.5;
  double w_aware = 0.5;
  // steps[k-1][beta] is the distribution after k steps, length cells+1 (sink last).
  std::vector<std::array<std::vector<double>, 2>> steps;

  std::vector<double> unconditional(int k) const {
    const auto& s = steps.at(k - 1);
    std::vector<double> p(s[0].size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = w_unaware * s[0][i] + w_aware * s[1][i];
    return p;
  }

  double entropy(int k) const {
    double h = 0.0;
    for (double p : unconditional(k))
      if (p > 0.0) h -= p * std::log(p);
    return h;
  }
};

struct CollisionProfile {
  std::vector<double> p;  // p[k] for k = 0..horizon; p[0] is always 0
  // exact mode: probability the human never entered a band through the
  // horizon. Meaningless (NaN) in marginal mode.
  double survival = 1.0;
  bool saturated = false;
  BoundMode mode = BoundMode::kExact;
};

// Forecasting core shared by the planner, the simulator, and the CLI. Caches
// per-robot-position policy kernels and collision bands; intended lifetime is
// one episode. The beta = 0 policy never looks at the robot, so its kernel is
// built once.
class ForecastEngine {
 public:
  ForecastEngine(const Grid& grid, HumanPredictor predictor, double rho, BoundMode mode)
      : grid_(grid),
        predictor_(std::move(predictor)),
        table_(grid, predictor_.actions),
        rho_(rho),
        mode_(mode) {}

  int cells() const { return grid_.num_cells(); }
  int sink() const { return grid_.sink(); }
  const Grid& grid() const { return grid_; }
  BoundMode mode() const { return mode_; }
  const HumanPredictor& predictor() const { return predictor_; }

  std::vector<double> point_mass(const AgentState& x_h) const {
    std::vector<double> occ(static_cast<size_t>(cells()) + 1, 0.0);
    occ[grid_.state_to_flat(x_h)] = 1.0;
    return occ;
  }

  // Action distribution per cell, flattened to cells() * n_actions.
  const std::vector<double>& kernel(int beta, const AgentState& x_r) {
    if (beta == 0) {
      if (kernel_unaware_.empty()) kernel_unaware_ = build_kernel(0, x_r);
      return kernel_unaware_;
    }
    auto [it, inserted] = kernels_aware_.try_emplace(key_of(x_r));
    if (inserted) it->second = build_kernel(1, x_r);
    return it->second;
  }

  const std::vector<int>& band(const AgentState& x_r) {
    auto [it, inserted] = bands_.try_emplace(key_of(x_r));
    if (inserted) it->second = collision_cells(grid_, x_r, rho_);
    return it->second;
  }

  // One forecast step: mass flows along the policy kernel evaluated against
  // the robot's position at the decision time. The sink keeps its mass.
  void propagate(const std::vector<double>& in, int beta, const AgentState& x_r,
                 std::vector<double>& out) {
    const std::vector<double>& ker = kernel(beta, x_r);
    const int n = cells();
    const int na = table_.n_actions();
    out.assign(static_cast<size_t>(n) + 1, 0.0);
    out[n] = in[n];
    for (int c = 0; c < n; ++c) {
      const double m = in[c];
      if (m == 0.0) continue;
      const double* row = &ker[static_cast<size_t>(c) * na];
      for (int j = 0; j < na; ++j) out[table_.target(c, j)] += m * row[j];
    }
  }

  double band_mass(const std::vector<double>& occ, const AgentState& x_r) {
    double h = 0.0;
    for (int c : band(x_r)) h += occ[c];
    return std::min(h, 1.0);
  }

  // Per-hypothesis chain state for the step-at-a-time recursion used by the
  // planner's search. In exact mode occ[beta] stays normalized (conditional
  // on no collision yet) and survival[beta] carries the unconditional scale;
  // in marginal mode occ[beta] is the plain unconditional occupancy.
  struct ChainState {
    std::array<std::vector<double>, 2> occ;
    std::array<double, 2> survival{1.0, 1.0};
    std::array<bool, 2> saturated{false, false};
    std::vector<double> scratch;
  };

  ChainState initial_chain(const AgentState& x_h) const {
    ChainState cs;
    cs.occ[0] = point_mass(x_h);
    cs.occ[1] = cs.occ[0];
    return cs;
  }

  // Advances both chains from the robot's position x_r_prev (decision time)
  // to x_r_next (where the collision band is checked) and returns the
  // belief-weighted collision probability for this step.
  double step_chain(ChainState& cs, const Belief& b, const AgentState& x_r_prev,
                    const AgentState& x_r_next) {
    const double w[2] = {b.p_unaware, b.p_aware};
    double p_k = 0.0;
    for (int beta = 0; beta < 2; ++beta) {
      if (mode_ == BoundMode::kExact && cs.survival[beta] == 0.0) continue;
      propagate(cs.occ[beta], beta, x_r_prev, cs.scratch);
      cs.occ[beta].swap(cs.scratch);
      const double h = band_mass(cs.occ[beta], x_r_next);
      if (mode_ == BoundMode::kMarginal) {
        p_k += w[beta] * h;
        continue;
      }
      p_k += w[beta] * cs.survival[beta] * h;
      if (h >= 1.0) {
        std::fill(cs.occ[beta].begin(), cs.occ[beta].end(), 0.0);
        cs.survival[beta] = 0.0;
        continue;
      }
      for (int c : band(x_r_next)) cs.occ[beta][c] = 0.0;
      const double keep = 1.0 - h;
      for (double& m : cs.occ[beta]) m /= keep;
      cs.survival[beta] *= keep;
      if (cs.survival[beta] < 1e-15) {
        // Remaining mass is numerically negligible; stop tracking the chain.
        cs.saturated[beta] = true;
        std::fill(cs.occ[beta].begin(), cs.occ[beta].end(), 0.0);
        cs.survival[beta] = 0.0;
      }
    }
    return p_k;
  }

  // Collision probability per step along a robot trajectory (traj[0] is the
  // current position; horizon = traj.size() - 1).
  CollisionProfile profile(const AgentState& x_h, const Belief& b,
                           const std::vector<AgentState>& traj) {
    const int horizon = static_cast<int>(traj.size()) - 1;
    CollisionProfile out;
    out.mode = mode_;
    out.p.assign(static_cast<size_t>(horizon) + 1, 0.0);
    ChainState cs = initial_chain(x_h);
    for (int k = 1; k <= horizon; ++k) out.p[k] = step_chain(cs, b, traj[k - 1], traj[k]);
    if (mode_ == BoundMode::kExact) {
      out.survival = b.p_unaware * cs.survival[0] + b.p_aware * cs.survival[1];
      out.saturated = cs.saturated[0] || cs.saturated[1];
    } else {
      out.survival = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
  }

  // Unconditional occupancy per step (no survival conditioning in any mode).
  OccupancyForecast forecast(const AgentState& x_h, const Belief& b,
                             const std::vector<AgentState>& traj) {
    const int horizon = static_cast<int>(traj.size()) - 1;
    OccupancyForecast out;
    out.horizon = horizon;
    out.w_unaware = b.p_unaware;
    out.w_aware = b.p_aware;
    out.steps.resize(horizon);
    std::array<std::vector<double>, 2> occ{point_mass(x_h), point_mass(x_h)};
    std::vector<double> next;
    for (int k = 1; k <= horizon; ++k) {
      for (int beta = 0; beta < 2; ++beta) {
        propagate(occ[beta], beta, traj[k - 1], next);
        occ[beta].swap(next);
      }
      out.steps[k - 1] = occ;
    }
    return out;
  }

 private:
  std::vector<double> build_kernel(int beta, const AgentState& x_r) const {
    const int n = cells();
    const int na = table_.n_actions();
    std::vector<double> ker(static_cast<size_t>(n) * na);
    for (int c = 0; c < n; ++c) {
      std::vector<double> p = predictor_.mixture(grid_.center_of_flat(c), beta, x_r);
      std::copy(p.begin(), p.end(), ker.begin() + static_cast<size_t>(c) * na);
    }
    return ker;
  }

  static std::vector<double> key_of(const AgentState& x) {
    return std::vector<double>(x.data(), x.data() + x.size());
  }

  Grid grid_;
  HumanPredictor predictor_;
  PropagationTable table_;
  double rho_;
  BoundMode mode_;
  std::vector<double> kernel_unaware_;
  std::map<std::vector<double>, std::vector<double>> kernels_aware_;
  std::map<std::vector<double>, std::vector<int>> bands_;
};

}  // namespace vigil
