#include "synplan/io.hpp"

#include <fstream>

namespace synplan::io {

namespace {

void require_schema(const json& j, const char* what) {
  if (!j.is_object()) throw io_error(std::string(what) + ": not a JSON object");
  if (j.value("schema", 0) != 1)
    throw io_error(std::string(what) + ": unsupported schema version");
}

}  // namespace

int task_index(const ProcessSpec& spec, const std::string& id) {
  for (int i = 0; i < spec.num_tasks(); ++i)
    if (spec.tasks[i].id == id) return i;
  throw io_error("unknown task id '" + id + "'");
}

int agent_index(const ProcessSpec& spec, const std::string& id) {
  for (int j = 0; j < spec.num_agents(); ++j)
    if (spec.agents[j].id == id) return j;
  throw io_error("unknown agent id '" + id + "'");
}

json to_json(const ProcessSpec& spec) {
  json tasks = json::array();
  for (const auto& t : spec.tasks) tasks.push_back(t.id);
  json agents = json::array();
  for (const auto& a : spec.agents)
    agents.push_back({{"id", a.id},
                      {"kind", a.kind == AgentKind::Human ? "human" : "robot"}});
  json durations = json::object();
  for (int i = 0; i < spec.num_tasks(); ++i) {
    json row = json::object();
    for (int j = 0; j < spec.num_agents(); ++j)
      if (spec.is_capable(i, j)) row[spec.agents[j].id] = spec.duration(i, j);
    durations[spec.tasks[i].id] = row;
  }
  json preds = json::object();
  for (int i = 0; i < spec.num_tasks(); ++i) {
    json list = json::array();
    for (int k = 0; k < spec.num_tasks(); ++k)
      if (spec.precedence[i][k]) list.push_back(spec.tasks[k].id);
    if (!list.empty()) preds[spec.tasks[i].id] = list;
  }
  return json{{"schema", 1},
              {"tasks", tasks},
              {"agents", agents},
              {"durations", durations},
              {"predecessors", preds}};
}

ProcessSpec process_from_json(const json& j) {
  require_schema(j, "process spec");
  ProcessSpec spec;
  for (const auto& t : j.at("tasks")) spec.tasks.push_back({t.get<std::string>()});
  for (const auto& a : j.at("agents")) {
    const std::string kind = a.at("kind").get<std::string>();
    if (kind != "human" && kind != "robot")
      throw io_error("agent kind must be 'human' or 'robot'");
    spec.agents.push_back({a.at("id").get<std::string>(),
                           kind == "human" ? AgentKind::Human : AgentKind::Robot});
  }
  const int m = spec.num_tasks();
  const int n = spec.num_agents();
  spec.capability.assign(m, std::vector<bool>(n, false));
  spec.nominal_duration.assign(m, std::vector<double>(n, 0.0));
  spec.precedence.assign(m, std::vector<bool>(m, false));
  for (const auto& [task_id, row] : j.at("durations").items()) {
    const int i = task_index(spec, task_id);
    for (const auto& [agent_id, dur] : row.items()) {
      const int a = agent_index(spec, agent_id);
      spec.capability[i][a] = true;
      spec.nominal_duration[i][a] = dur.get<double>();
    }
  }
  if (j.contains("predecessors")) {
    for (const auto& [task_id, list] : j.at("predecessors").items()) {
      const int i = task_index(spec, task_id);
      for (const auto& p : list)
        spec.precedence[i][task_index(spec, p.get<std::string>())] = true;
    }
  }
  validate_process(spec);
  return spec;
}

json to_json(const SynergyMatrix& matrix, const ProcessSpec& spec) {
  json entries = json::array();
  for (const auto& [key, e] : matrix.entries()) {
    const auto& [robot, i, k] = key;
    json row{{"robot", spec.agents[robot].id},
             {"robot_task", spec.tasks[i].id},
             {"human_task", spec.tasks[k].id},
             {"median", e.value},
             {"n_obs", e.n_obs}};
    if (e.lo90) row["lo90"] = *e.lo90;
    if (e.hi90) row["hi90"] = *e.hi90;
    entries.push_back(row);
  }
  return json{{"schema", 1}, {"entries", entries}};
}

SynergyMatrix synergies_from_json(const json& j, const ProcessSpec& spec) {
  require_schema(j, "synergy matrix");
  SynergyMatrix matrix;
  for (const auto& row : j.at("entries")) {
    SynergyEntry e;
    e.value = row.at("median").get<double>();
    if (row.contains("lo90")) e.lo90 = row.at("lo90").get<double>();
    if (row.contains("hi90")) e.hi90 = row.at("hi90").get<double>();
    e.n_obs = row.value("n_obs", 0);
    matrix.set(agent_index(spec, row.at("robot").get<std::string>()),
               task_index(spec, row.at("robot_task").get<std::string>()),
               task_index(spec, row.at("human_task").get<std::string>()), e);
  }
  return matrix;
}

json to_json(const sim::CellGeometry& geometry, const ProcessSpec& spec) {
  json anchors = json::object();
  for (const auto& [task, at] : geometry.human_anchor)
    anchors[spec.tasks[task].id] = json::array({at.x, at.y});
  json paths = json::object();
  for (const auto& [task, path] : geometry.robot_path) {
    json wps = json::array();
    for (const auto& w : path.waypoints) wps.push_back(json::array({w.x, w.y}));
    paths[spec.tasks[task].id] = json{{"v_nom", path.v_nom}, {"waypoints", wps}};
  }
  return json{{"schema", 1},
              {"human_home", json::array({geometry.human_home.x, geometry.human_home.y})},
              {"robot_base", json::array({geometry.robot_base.x, geometry.robot_base.y})},
              {"human_anchors", anchors},
              {"robot_paths", paths}};
}

sim::CellGeometry geometry_from_json(const json& j, const ProcessSpec& spec) {
  require_schema(j, "geometry");
  sim::CellGeometry g;
  auto vec2 = [](const json& a) {
    return sim::Vec2{a.at(0).get<double>(), a.at(1).get<double>()};
  };
  g.human_home = vec2(j.at("human_home"));
  g.robot_base = vec2(j.at("robot_base"));
  for (const auto& [task_id, at] : j.at("human_anchors").items())
    g.human_anchor[task_index(spec, task_id)] = vec2(at);
  for (const auto& [task_id, path] : j.at("robot_paths").items()) {
    sim::RobotPath p;
    p.v_nom = path.at("v_nom").get<double>();
    for (const auto& w : path.at("waypoints")) p.waypoints.push_back(vec2(w));
    g.robot_path[task_index(spec, task_id)] = std::move(p);
  }
  return g;
}

json to_json(const sim::SafetyModel& safety) {
  if (safety.kind == sim::SafetyModel::Kind::StaticZones) {
    return json{{"schema", 1},
                {"model", "static_zones"},
                {"red_radius", safety.zones.red_radius},
                {"orange_radius", safety.zones.orange_radius},
                {"orange_scale", safety.zones.orange_scale}};
  }
  return json{{"schema", 1}, {"model", "ssm"},      {"v_h", safety.ssm.v_h},
              {"a_s", safety.ssm.a_s}, {"T_r", safety.ssm.T_r}, {"C", safety.ssm.C}};
}

sim::SafetyModel safety_from_json(const json& j) {
  require_schema(j, "safety model");
  sim::SafetyModel s;
  const std::string model = j.at("model").get<std::string>();
  if (model == "static_zones") {
    s.kind = sim::SafetyModel::Kind::StaticZones;
    s.zones.red_radius = j.value("red_radius", s.zones.red_radius);
    s.zones.orange_radius = j.value("orange_radius", s.zones.orange_radius);
    s.zones.orange_scale = j.value("orange_scale", s.zones.orange_scale);
  } else if (model == "ssm") {
    s.kind = sim::SafetyModel::Kind::Ssm;
    s.ssm.v_h = j.value("v_h", s.ssm.v_h);
    s.ssm.a_s = j.value("a_s", s.ssm.a_s);
    s.ssm.T_r = j.value("T_r", s.ssm.T_r);
    s.ssm.C = j.value("C", s.ssm.C);
  } else {
    throw io_error("unknown safety model '" + model + "'");
  }
  s.validate();
  return s;
}

json to_json(const PlanFile& file, const ProcessSpec& spec) {
  json tasks = json::object();
  for (int i = 0; i < spec.num_tasks(); ++i) {
    const auto& t = file.plan.tasks[i];
    tasks[spec.tasks[i].id] = json{{"agent", spec.agents[t.agent].id},
                                   {"start", t.start},
                                   {"end", t.end}};
  }
  return json{{"schema", 1},
              {"method", file.method},
              {"status", file.status},
              {"objective", file.objective},
              {"best_bound", file.best_bound},
              {"gap", file.gap},
              {"nominal_makespan", file.nominal_makespan},
              {"planned_delta_s", file.planned_delta_s},
              {"tasks", tasks}};
}

PlanFile plan_from_json(const json& j, const ProcessSpec& spec) {
  require_schema(j, "plan");
  PlanFile file;
  file.method = j.value("method", "");
  file.status = j.value("status", "");
  file.objective = j.value("objective", 0.0);
  file.best_bound = j.value("best_bound", 0.0);
  file.gap = j.value("gap", 0.0);
  file.nominal_makespan = j.value("nominal_makespan", 0.0);
  file.planned_delta_s = j.value("planned_delta_s", 0.0);
  file.plan.tasks.resize(spec.num_tasks());
  for (const auto& [task_id, rec] : j.at("tasks").items()) {
    const int i = task_index(spec, task_id);
    file.plan.tasks[i].agent = agent_index(spec, rec.at("agent").get<std::string>());
    file.plan.tasks[i].start = rec.at("start").get<double>();
    file.plan.tasks[i].end = rec.at("end").get<double>();
  }
  return file;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open '" + path.string() + "'");
  json j = json::parse(is, nullptr, false);
  if (j.is_discarded()) throw io_error("malformed JSON in '" + path.string() + "'");
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot write '" + path.string() + "'");
  os << text;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace synplan::io
