#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace vigil {

// States and actions are real vectors of the scenario's dimension.
// Axes an agent cannot move along are "frozen" by giving every action
// a zero component there; the types stay n-dimensional throughout.
using AgentState = Eigen::VectorXd;
using Action = Eigen::VectorXd;

// Single-step transition map x' = f(x, u).
using Dynamics = std::function<AgentState(const AgentState&, const Action&)>;

inline Dynamics integrator_dynamics() {
  return [](const AgentState& x, const Action& u) -> AgentState { return x + u; };
}

// Finite, ordered action set. Order matters: distributions are indexed by it
// and planner tie-breaks are lexicographic in these indices.
struct ActionSet {
  std::vector<Action> actions;

  int size() const { return static_cast<int>(actions.size()); }
  const Action& operator[](int i) const { return actions[i]; }

  // Index of an exactly-matching action, -1 if absent.
  int index_of(const Action& u) const {
    for (int i = 0; i < size(); ++i)
      if (actions[i] == u) return i;
    return -1;
  }
};

inline bool states_equal(const AgentState& a, const AgentState& b, double tol = 1e-9) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace vigil
