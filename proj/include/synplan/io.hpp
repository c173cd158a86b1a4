#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "synplan/planner/models.hpp"
#include "synplan/process.hpp"
#include "synplan/sim/cell.hpp"
#include "synplan/synergy_matrix.hpp"

namespace synplan::io {

using json = nlohmann::json;

// All document schemas carry {"schema": 1}; readers reject other versions.

json to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const json& j);

json to_json(const SynergyMatrix& matrix, const ProcessSpec& spec);
SynergyMatrix synergies_from_json(const json& j, const ProcessSpec& spec);

json to_json(const sim::CellGeometry& geometry, const ProcessSpec& spec);
sim::CellGeometry geometry_from_json(const json& j, const ProcessSpec& spec);

json to_json(const sim::SafetyModel& safety);
sim::SafetyModel safety_from_json(const json& j);

// A solved plan plus its solve provenance.
struct PlanFile {
  Plan plan;
  std::string method;
  std::string status;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  double nominal_makespan = 0.0;
  double planned_delta_s = 0.0;
};

json to_json(const PlanFile& file, const ProcessSpec& spec);
PlanFile plan_from_json(const json& j, const ProcessSpec& spec);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// FNV-1a over a byte string; stable across runs and builds.
std::uint64_t fnv1a(const std::string& bytes);

int task_index(const ProcessSpec& spec, const std::string& id);
int agent_index(const ProcessSpec& spec, const std::string& id);

}  // namespace synplan::io
