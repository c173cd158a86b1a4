#include "synplan/bench/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace synplan::bench {

using io::json;
using planner::PlannerKind;

namespace {

milp::SolverConfig solver_config_from_json(const json& j,
                                           milp::SolverConfig base) {
  base.gap_target = j.value("gap_target", base.gap_target);
  base.time_limit = j.value("time_limit", base.time_limit);
  base.eps_feas = j.value("eps_feas", base.eps_feas);
  base.eps_int = j.value("eps_int", base.eps_int);
  base.branching = j.value("branching", base.branching);
  base.work_rate = j.value("work_rate", base.work_rate);
  return base;
}

std::string trace_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "run_%04d.jsonl", index);
  return buf;
}

void write_trace_file(const std::filesystem::path& path,
                      const sim::ExecutionTrace& trace) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot write '" + path.string() + "'");
  sim::write_trace_jsonl(trace, os);
}

json stats_json(double mean, double lo, double hi) {
  return json{{"mean", mean}, {"min", lo}, {"max", hi}};
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  const json j = io::read_json_file(path);
  if (j.value("schema", 0) != 1)
    throw io_error("pipeline config: unsupported schema version");
  const auto dir = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : dir / fp;
  };

  PipelineConfig cfg;
  {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    cfg.raw_config = ss.str();
  }
  cfg.spec = io::process_from_json(
      io::read_json_file(resolve(j.at("process").get<std::string>())));
  cfg.geometry = io::geometry_from_json(
      io::read_json_file(resolve(j.at("geometry").get<std::string>())), cfg.spec);
  cfg.geometry.validate_for(cfg.spec);
  cfg.safety = io::safety_from_json(
      io::read_json_file(resolve(j.at("safety").get<std::string>())));

  for (const auto& p : j.value("planners", json::array({"baseline"})))
    cfg.planners.push_back(planner::planner_kind_from_string(p.get<std::string>()));
  if (cfg.planners.empty()) throw io_error("pipeline config lists no planners");
  if (j.contains("not_neighboring_pairs")) {
    for (const auto& pair : j.at("not_neighboring_pairs")) {
      cfg.nn_pairs.emplace_back(
          io::task_index(cfg.spec, pair.at(0).get<std::string>()),
          io::task_index(cfg.spec, pair.at(1).get<std::string>()));
    }
  }

  cfg.n_random = j.value("n_random", cfg.n_random);
  cfg.n_eval = j.value("n_eval", cfg.n_eval);
  if (cfg.n_random < 1 || cfg.n_eval < 1)
    throw io_error("n_random and n_eval must be >= 1");
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  cfg.dt = j.value("dt", cfg.dt);
  cfg.sigma_h = j.value("sigma_h", cfg.sigma_h);
  cfg.deterministic_eval = j.value("deterministic_eval", cfg.deterministic_eval);
  cfg.d_max = j.value("d_max", cfg.d_max);
  cfg.grid_step = j.value("grid_step", cfg.grid_step);

  if (j.contains("priors")) {
    const auto& p = j.at("priors");
    cfg.priors.mu_s = p.value("mu_s", cfg.priors.mu_s);
    cfg.priors.sigma_s = p.value("sigma_s", cfg.priors.sigma_s);
    cfg.priors.sigma_m_lo = p.value("sigma_m_lo", cfg.priors.sigma_m_lo);
    cfg.priors.sigma_m_hi = p.value("sigma_m_hi", cfg.priors.sigma_m_hi);
    cfg.priors.validate();
  }
  if (j.contains("mcmc")) {
    const auto& m = j.at("mcmc");
    cfg.estimate.mcmc.steps = m.value("steps", cfg.estimate.mcmc.steps);
    cfg.estimate.mcmc.burn_in = m.value("burn_in", cfg.estimate.mcmc.burn_in);
    cfg.estimate.mcmc.chains = m.value("chains", cfg.estimate.mcmc.chains);
    cfg.estimate.mcmc.initial_scale =
        m.value("initial_scale", cfg.estimate.mcmc.initial_scale);
  }
  cfg.estimate.min_total_overlap =
      j.value("min_total_overlap", cfg.estimate.min_total_overlap);

  if (j.contains("solver")) {
    for (const auto& [name, sj] : j.at("solver").items()) {
      const auto kind = planner::planner_kind_from_string(name);
      cfg.solver[kind] =
          solver_config_from_json(sj, planner::default_solver_config(kind));
    }
  }
  cfg.out_dir = j.contains("out") ? resolve(j.at("out").get<std::string>())
                                  : dir / "out";
  return cfg;
}

CollectResult collect_phase(const PipelineConfig& config) {
  CollectResult out;
  sim::HumanVariability var{config.sigma_h};
  for (int r = 0; r < config.n_random; ++r) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(r);
    Plan plan = sim::random_plan(config.spec, seed);
    sim::SimConfig sc{config.dt, seed, false};
    out.traces.push_back(
        sim::simulate(plan, config.spec, config.geometry, config.safety, var, sc));
    out.plans.push_back(std::move(plan));
  }
  return out;
}

io::PlanFile plan_method(const PipelineConfig& config, PlannerKind kind,
                         const SynergyMatrix& synergies) {
  planner::ModelArtifacts art;
  switch (kind) {
    case PlannerKind::Baseline:
      art = planner::build_baseline(config.spec);
      break;
    case PlannerKind::NotNeighboring:
      art = planner::build_not_neighboring(config.spec, config.nn_pairs);
      break;
    case PlannerKind::Rstp:
      art = planner::build_rstp(config.spec, synergies);
      break;
    case PlannerKind::Stp:
      art = planner::build_stp(config.spec, synergies);
      break;
  }
  milp::SolverConfig scfg = config.solver.count(kind)
                                ? config.solver.at(kind)
                                : planner::default_solver_config(kind);
  scfg.seed = config.base_seed;
  const milp::MilpSolution sol = milp::solve_milp(art.problem, scfg);
  if (!sol.has_solution())
    throw solver_error("planning with '" + planner::to_string(kind) +
                       "' produced no solution (" + milp::to_string(sol.status) +
                       ")");
  io::PlanFile file;
  file.plan = planner::extract_plan(art, sol, config.spec);
  file.method = planner::to_string(kind);
  file.status = milp::to_string(sol.status);
  file.objective = sol.objective;
  file.best_bound = sol.best_bound;
  file.gap = sol.gap;
  file.planned_delta_s = planner::delta_s(file.plan, config.spec, synergies);
  file.nominal_makespan = kind == PlannerKind::Rstp
                              ? sol.objective - file.planned_delta_s
                              : sol.objective;
  return file;
}

BenchReport run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  const fs::path out = config.out_dir;
  fs::create_directories(out / "collect");
  fs::create_directories(out / "plans");
  fs::create_directories(out / "eval");

  BenchReport report;
  report.config_hash = io::fnv1a(config.raw_config);
  report.base_seed = config.base_seed;
  report.grid = distance_grid(config.d_max, config.grid_step);

  // Phase 1: random executions.
  const CollectResult collected = collect_phase(config);
  for (size_t r = 0; r < collected.traces.size(); ++r) {
    write_trace_file(out / "collect" / trace_name(static_cast<int>(r)),
                     collected.traces[r]);
    io::PlanFile pf;
    pf.plan = collected.plans[r];
    pf.method = "random";
    io::write_json_file(out / "collect" /
                            ("plan_" + std::to_string(r) + ".json"),
                        io::to_json(pf, config.spec));
  }

  // Phase 2: synergy estimation.
  auto est_cfg = config.estimate;
  est_cfg.mcmc.seed = config.base_seed;
  const learn::EstimateResult est = learn::estimate_synergies(
      collected.traces, collected.plans, config.spec, config.priors, est_cfg);
  report.learned = est.matrix;
  report.summary = est.summary;
  io::write_json_file(out / "synergies.json",
                      io::to_json(est.matrix, config.spec));
  io::write_text_file(out / "chains.csv",
                      learn::chains_csv(est.raw_chains, est.param_names));

  // Phases 3-4: plan and evaluate each method.
  sim::HumanVariability var{config.sigma_h};
  for (const auto kind : config.planners) {
    MethodResult mr;
    mr.kind = kind;
    mr.planfile = plan_method(config, kind, report.learned);
    io::write_json_file(out / "plans" / (planner::to_string(kind) + ".json"),
                        io::to_json(mr.planfile, config.spec));

    const fs::path eval_dir = out / "eval" / planner::to_string(kind);
    fs::create_directories(eval_dir);
    for (int e = 0; e < config.n_eval; ++e) {
      const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(e);
      sim::SimConfig sc{config.dt, seed, config.deterministic_eval};
      mr.eval_traces.push_back(sim::simulate(mr.planfile.plan, config.spec,
                                             config.geometry, config.safety, var,
                                             sc));
      write_trace_file(eval_dir / trace_name(e), mr.eval_traces.back());
    }
    report.methods.push_back(std::move(mr));
  }

  // Phase 5: metrics and report files.
  json methods_json = json::object();
  for (auto& mr : report.methods) {
    std::vector<const sim::ExecutionTrace*> traces;
    std::vector<double> makespans, dss, dmins;
    for (const auto& t : mr.eval_traces) {
      traces.push_back(&t);
      makespans.push_back(metric_makespan(t));
      Plan measured;
      measured.tasks.resize(config.spec.num_tasks());
      for (const auto& rec : t.tasks)
        measured.tasks[rec.task] = {rec.start, rec.end, rec.agent};
      dss.push_back(planner::delta_s(measured, config.spec, report.learned));
      dmins.push_back(sim::min_distance(t));
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    mr.measured_mean = mean(makespans);
    mr.measured_min = *std::min_element(makespans.begin(), makespans.end());
    mr.measured_max = *std::max_element(makespans.begin(), makespans.end());
    mr.ds_mean = mean(dss);
    mr.ds_min = *std::min_element(dss.begin(), dss.end());
    mr.ds_max = *std::max_element(dss.begin(), dss.end());
    mr.dmin_mean = mean(dmins);
    mr.tick_cdf = metric_distance_cdf(traces, report.grid);
    mr.dmin_cdf = dmin_cdf(traces, report.grid);

    const std::string name = planner::to_string(mr.kind);
    methods_json[name] =
        json{{"status", mr.planfile.status},
             {"objective", mr.planfile.objective},
             {"best_bound", mr.planfile.best_bound},
             {"gap", mr.planfile.gap},
             {"nominal_makespan", mr.planfile.nominal_makespan},
             {"planned_delta_s", mr.planfile.planned_delta_s},
             {"measured_makespan", stats_json(mr.measured_mean, mr.measured_min,
                                              mr.measured_max)},
             {"measured_delta_s", stats_json(mr.ds_mean, mr.ds_min, mr.ds_max)},
             {"min_distance_mean", mr.dmin_mean},
             {"run_makespans", makespans},
             {"tick_cdf", mr.tick_cdf},
             {"dmin_cdf", mr.dmin_cdf}};
  }

  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(report.config_hash));
  json learn_json{{"sigma_m_median", report.summary.sigma_m_median},
                  {"sigma_m_lo90", report.summary.sigma_m_lo90},
                  {"sigma_m_hi90", report.summary.sigma_m_hi90},
                  {"acceptance_per_chain", report.summary.acceptance_per_chain},
                  {"chains", report.summary.chains},
                  {"kept_samples", report.summary.kept_samples},
                  {"min_ess", report.summary.min_ess}};
  report.report_json = json{{"schema", 1},
                            {"config_hash", hash_hex},
                            {"base_seed", report.base_seed},
                            {"grid", report.grid},
                            {"learn", learn_json},
                            {"synergies", io::to_json(report.learned, config.spec)},
                            {"methods", methods_json}};
  io::write_json_file(out / "report.json", report.report_json);

  // Flat CSV tables.
  std::ostringstream cmp;
  cmp.precision(10);
  cmp << "method,status,objective,gap,nominal_makespan,planned_delta_s,"
         "measured_mean,measured_min,measured_max,ds_mean,ds_min,ds_max,"
         "dmin_mean\n";
  for (const auto& mr : report.methods) {
    cmp << planner::to_string(mr.kind) << ',' << mr.planfile.status << ','
        << mr.planfile.objective << ',' << mr.planfile.gap << ','
        << mr.planfile.nominal_makespan << ',' << mr.planfile.planned_delta_s
        << ',' << mr.measured_mean << ',' << mr.measured_min << ','
        << mr.measured_max << ',' << mr.ds_mean << ',' << mr.ds_min << ','
        << mr.ds_max << ',' << mr.dmin_mean << '\n';
  }
  io::write_text_file(out / "comparison.csv", cmp.str());

  std::ostringstream cdf;
  cdf.precision(10);
  cdf << "d";
  for (const auto& mr : report.methods)
    cdf << ',' << planner::to_string(mr.kind) << "_ticks,"
        << planner::to_string(mr.kind) << "_dmin";
  cdf << '\n';
  for (size_t g = 0; g < report.grid.size(); ++g) {
    cdf << report.grid[g];
    for (const auto& mr : report.methods)
      cdf << ',' << mr.tick_cdf[g] << ',' << mr.dmin_cdf[g];
    cdf << '\n';
  }
  io::write_text_file(out / "distance_cdf.csv", cdf.str());

  return report;
}

}  // namespace synplan::bench
