#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "synplan/process.hpp"

namespace synplan::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Tool path of one robot task: a waypoint polyline walked at v_nom (m/s),
// scaled down by the active safety model.
struct RobotPath {
  std::vector<Vec2> waypoints;
  double v_nom = 0.0;

  double length() const;
  Vec2 point_at(double arc) const;  // clamped to [0, length]
};

// Workcell layout: where the human stands per task, where the robot tool
// travels per task. The human waits at its previous anchor between tasks and
// at home before the first one.
struct CellGeometry {
  Vec2 human_home;
  Vec2 robot_base;
  std::map<int, Vec2> human_anchor;   // task index -> anchor
  std::map<int, RobotPath> robot_path;  // task index -> tool path

  // Every (task, capable agent) combination needs its geometry entry.
  void validate_for(const ProcessSpec& spec) const;
};

struct StaticZones {
  double red_radius = 0.3;    // inside: robot stops
  double orange_radius = 0.9; // inside: reduced speed
  double orange_scale = 0.5;
};

// Speed-and-separation-monitoring parameters: the robot's velocity toward
// the human is capped from the separation distance.
struct Ssm {
  double v_h = 1.6;  // human approach speed, m/s
  double a_s = 1.0;  // max robot deceleration, m/s^2
  double T_r = 0.3;  // system reaction time, s
  double C = 0.2;    // position uncertainty, m
};

struct SafetyModel {
  enum class Kind { StaticZones, Ssm };
  Kind kind = Kind::StaticZones;
  StaticZones zones;
  Ssm ssm;

  void validate() const;
};

// Robot speed scale in [0,1] for a separation distance S_d. Static zones map
// through the zone radii; SSM caps the speed at
//   sqrt(v_h^2 + (a_s T_r)^2 - 2 a_s (C - S_d)) - a_s T_r - v_h
// with a negative radicand or negative cap mapped to a full stop.
double safety_scale(double separation, const SafetyModel& model, double v_nom);

// Stochastic stand-in for a human operator: per-task duration multipliers
// drawn from a log-normal with log-sd sigma_h.
struct HumanVariability {
  double sigma_h = 0.1;
};

}  // namespace synplan::sim
