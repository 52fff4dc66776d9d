#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vigil/core.hpp"

namespace vigil {

// Axis-aligned uniform grid over the human's state space.
// Cell i on an axis covers [origin + i*h, origin + (i+1)*h); its center is
// origin + (i+0.5)*h. Scenario validation guarantees the human's reachable
// states land exactly on cell centers, so occupancy never smears.
struct Grid {
  AgentState origin;     // lower corner, per axis
  AgentState cell_size;  // h per axis, all > 0
  std::vector<int> counts;

  int dims() const { return static_cast<int>(counts.size()); }

  int num_cells() const {
    int n = 1;
    for (int c : counts) n *= c;
    return n;
  }

  // Flat index reserved for probability mass that leaves the grid.
  int sink() const { return num_cells(); }

  bool contains(const AgentState& x) const {
    for (int a = 0; a < dims(); ++a) {
      double r = (x[a] - origin[a]) / cell_size[a];
      int i = static_cast<int>(std::floor(r));
      if (i < 0 || i >= counts[a]) return false;
    }
    return true;
  }

  // Per-axis cell coordinates of a state. Out-of-bounds states are an error,
  // never a clamp: silently snapping a state into the grid would fabricate
  // occupancy where there is none.
  std::vector<int> state_to_cell(const AgentState& x) const {
    std::vector<int> idx(dims());
    for (int a = 0; a < dims(); ++a) {
      double r = (x[a] - origin[a]) / cell_size[a];
      int i = static_cast<int>(std::floor(r));
      if (i < 0 || i >= counts[a]) {
        std::ostringstream msg;
        msg << "state_to_cell: coordinate " << a << " = " << x[a]
            << " outside grid [" << origin[a] << ", "
            << origin[a] + cell_size[a] * counts[a] << ")";
        throw std::out_of_range(msg.str());
      }
      idx[a] = i;
    }
    return idx;
  }

  int flat_index(const std::vector<int>& cell) const {
    int f = 0;
    for (int a = 0; a < dims(); ++a) f = f * counts[a] + cell[a];
    return f;
  }

  std::vector<int> unflatten(int flat) const {
    std::vector<int> cell(dims());
    for (int a = dims() - 1; a >= 0; --a) {
      cell[a] = flat % counts[a];
      flat /= counts[a];
    }
    return cell;
  }

  int state_to_flat(const AgentState& x) const { return flat_index(state_to_cell(x)); }

  AgentState cell_center(const std::vector<int>& cell) const {
    AgentState c(dims());
    for (int a = 0; a < dims(); ++a)
      c[a] = origin[a] + (static_cast<double>(cell[a]) + 0.5) * cell_size[a];
    return c;
  }

  AgentState center_of_flat(int flat) const { return cell_center(unflatten(flat)); }
};

}  // namespace vigil
