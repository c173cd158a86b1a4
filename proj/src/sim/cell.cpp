#include "synplan/sim/cell.hpp"

#include <algorithm>

namespace synplan::sim {

double RobotPath::length() const {
  double len = 0.0;
  for (size_t i = 1; i < waypoints.size(); ++i)
    len += distance(waypoints[i - 1], waypoints[i]);
  return len;
}

Vec2 RobotPath::point_at(double arc) const {
  if (waypoints.empty()) return {};
  if (arc <= 0.0) return waypoints.front();
  for (size_t i = 1; i < waypoints.size(); ++i) {
    const double seg = distance(waypoints[i - 1], waypoints[i]);
    if (arc <= seg && seg > 0.0) {
      const double t = arc / seg;
      return {waypoints[i - 1].x + t * (waypoints[i].x - waypoints[i - 1].x),
              waypoints[i - 1].y + t * (waypoints[i].y - waypoints[i - 1].y)};
    }
    arc -= seg;
  }
  return waypoints.back();
}

void CellGeometry::validate_for(const ProcessSpec& spec) const {
  const int human = spec.human_index();
  for (int i = 0; i < spec.num_tasks(); ++i) {
    for (int j = 0; j < spec.num_agents(); ++j) {
      if (!spec.is_capable(i, j)) continue;
      if (j == human) {
        if (!human_anchor.count(i))
          throw sim_error("geometry is missing the human anchor for task '" +
                          spec.tasks[i].id + "'");
      } else {
        const auto it = robot_path.find(i);
        if (it == robot_path.end() || it->second.waypoints.empty())
          throw sim_error("geometry is missing the robot path for task '" +
                          spec.tasks[i].id + "'");
        if (!(it->second.v_nom > 0.0))
          throw sim_error("robot path for task '" + spec.tasks[i].id +
                          "' needs v_nom > 0");
      }
    }
  }
}

void SafetyModel::validate() const {
  if (kind == Kind::StaticZones) {
    if (!(zones.red_radius < zones.orange_radius))
      throw sim_error("static zones need red_radius < orange_radius");
    if (zones.red_radius < 0.0 || zones.orange_scale < 0.0 ||
        zones.orange_scale > 1.0)
      throw sim_error("static zone parameters out of range");
  } else {
    if (!(ssm.v_h > 0.0) || !(ssm.a_s > 0.0) || !(ssm.T_r > 0.0) || !(ssm.C > 0.0))
      throw sim_error("SSM parameters must be positive");
  }
}

double safety_scale(double separation, const SafetyModel& model, double v_nom) {
  if (model.kind == SafetyModel::Kind::StaticZones) {
    if (separation < model.zones.red_radius) return 0.0;
    if (separation < model.zones.orange_radius) return model.zones.orange_scale;
    return 1.0;
  }
  const auto& p = model.ssm;
  const double radicand =
      p.v_h * p.v_h + (p.a_s * p.T_r) * (p.a_s * p.T_r) -
      2.0 * p.a_s * (p.C - separation);
  if (radicand < 0.0) return 0.0;
  const double v_max = std::sqrt(radicand) - p.a_s * p.T_r - p.v_h;
  if (v_max <= 0.0) return 0.0;
  return std::clamp(v_max / v_nom, 0.0, 1.0);
}

}  // namespace synplan::sim
