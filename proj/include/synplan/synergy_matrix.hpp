#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "synplan/errors.hpp"

namespace synplan {

// One learned coefficient with its credible interval.
struct SynergyEntry {
  double value = 1.0;  // posterior median (or hand-set coefficient)
  std::optional<double> lo90;
  std::optional<double> hi90;
  int n_obs = 0;
};

// Sparse per-robot map (robot task i, human task k) -> synergy coefficient.
// Absent entries read as exactly 1.0 (neutral coupling).
class SynergyMatrix {
 public:
  // Key: robot agent index, robot task index, human task index.
  using Key = std::tuple<int, int, int>;

  void set(int robot_agent, int robot_task, int human_task, SynergyEntry entry) {
    if (!(entry.value > 0.0)) throw spec_error("synergy coefficients must be > 0");
    entries_[Key{robot_agent, robot_task, human_task}] = entry;
  }
  void set(int robot_agent, int robot_task, int human_task, double value) {
    set(robot_agent, robot_task, human_task, SynergyEntry{value, {}, {}, 0});
  }

  double value(int robot_agent, int robot_task, int human_task) const {
    const auto it = entries_.find(Key{robot_agent, robot_task, human_task});
    return it == entries_.end() ? 1.0 : it->second.value;
  }

  const SynergyEntry* find(int robot_agent, int robot_task, int human_task) const {
    const auto it = entries_.find(Key{robot_agent, robot_task, human_task});
    return it == entries_.end() ? nullptr : &it->second;
  }

  const std::map<Key, SynergyEntry>& entries() const { return entries_; }

  double max_value() const {
    double m = 1.0;
    for (const auto& [k, e] : entries_) m = std::max(m, e.value);
    return m;
  }

  bool empty() const { return entries_.empty(); }

 private:
  std::map<Key, SynergyEntry> entries_;
};

}  // namespace synplan
