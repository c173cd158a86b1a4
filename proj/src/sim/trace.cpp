#include "synplan/sim/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

namespace synplan::sim {

using nlohmann::json;

double ExecutionTrace::measured_makespan() const {
  double m = 0.0;
  for (const auto& t : tasks) m = std::max(m, t.end);
  return m;
}

void write_trace_jsonl(const ExecutionTrace& trace, std::ostream& os) {
  json header{{"schema", 1},
              {"type", "header"},
              {"seed", trace.seed},
              {"dt", trace.dt},
              {"n_tasks", trace.tasks.size()},
              {"n_ticks", trace.ticks.size()}};
  os << header.dump() << '\n';
  for (const auto& t : trace.tasks) {
    json rec{{"type", "task"},   {"task", t.task}, {"agent", t.agent},
             {"start", t.start}, {"end", t.end},   {"idle", t.idle}};
    os << rec.dump() << '\n';
  }
  for (const auto& t : trace.ticks) {
    json rec{{"type", "tick"},
             {"t", t.time},
             {"hx", t.human_x},
             {"hy", t.human_y},
             {"rx", t.robot_x},
             {"ry", t.robot_y},
             {"sd", t.separation},
             {"scale", t.scale}};
    os << rec.dump() << '\n';
  }
}

ExecutionTrace read_trace_jsonl(std::istream& is) {
  ExecutionTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw io_error("malformed trace line: " + line);
    const std::string type = j.value("type", "");
    if (type == "header") {
      trace.seed = j.at("seed").get<std::uint64_t>();
      trace.dt = j.at("dt").get<double>();
      have_header = true;
    } else if (type == "task") {
      TaskRecord r;
      r.task = j.at("task").get<int>();
      r.agent = j.at("agent").get<int>();
      r.start = j.at("start").get<double>();
      r.end = j.at("end").get<double>();
      r.idle = j.at("idle").get<double>();
      trace.tasks.push_back(r);
    } else if (type == "tick") {
      TickRecord r;
      r.time = j.at("t").get<double>();
      r.human_x = j.at("hx").get<double>();
      r.human_y = j.at("hy").get<double>();
      r.robot_x = j.at("rx").get<double>();
      r.robot_y = j.at("ry").get<double>();
      r.separation = j.at("sd").get<double>();
      r.scale = j.at("scale").get<double>();
      trace.ticks.push_back(r);
    } else {
      throw io_error("unknown trace record type '" + type + "'");
    }
  }
  if (!have_header) throw io_error("trace stream has no header line");
  std::sort(trace.tasks.begin(), trace.tasks.end(),
            [](const TaskRecord& a, const TaskRecord& b) { return a.task < b.task; });
  return trace;
}

}  // namespace synplan::sim
