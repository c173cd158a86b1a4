#pragma once

#include <filesystem>
#include <map>
#include <optional>

#include "synplan/bench/metrics.hpp"
#include "synplan/io.hpp"
#include "synplan/learn/estimate.hpp"
#include "synplan/planner/models.hpp"
#include "synplan/sim/simulator.hpp"

namespace synplan::bench {

// Everything one experiment needs, loaded and validated.
struct PipelineConfig {
  ProcessSpec spec;
  sim::CellGeometry geometry;
  sim::SafetyModel safety;
  std::vector<planner::PlannerKind> planners;
  std::vector<std::pair<int, int>> nn_pairs;
  int n_random = 50;
  int n_eval = 20;
  std::uint64_t base_seed = 1;
  double dt = 0.05;
  double sigma_h = 0.1;
  bool deterministic_eval = false;
  double d_max = 3.0;
  double grid_step = 0.05;
  learn::Priors priors;
  learn::EstimateConfig estimate;
  std::map<planner::PlannerKind, milp::SolverConfig> solver;  // overrides
  std::filesystem::path out_dir;
  std::string raw_config;  // config file bytes, hashed for provenance
};

// Reads the config file; paths inside resolve against the file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct MethodResult {
  planner::PlannerKind kind = planner::PlannerKind::Baseline;
  io::PlanFile planfile;
  std::vector<sim::ExecutionTrace> eval_traces;
  double measured_mean = 0.0, measured_min = 0.0, measured_max = 0.0;
  double ds_mean = 0.0, ds_min = 0.0, ds_max = 0.0;
  double dmin_mean = 0.0;
  std::vector<double> tick_cdf, dmin_cdf;
};

struct BenchReport {
  std::uint64_t config_hash = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> grid;
  SynergyMatrix learned;
  learn::PosteriorSummary summary;
  std::vector<MethodResult> methods;
  io::json report_json;
};

// Phase 1: collect random-plan traces.
struct CollectResult {
  std::vector<Plan> plans;
  std::vector<sim::ExecutionTrace> traces;
};
CollectResult collect_phase(const PipelineConfig& config);

// Phase 3 for one method (solve + extract); synergies may be empty for the
// baselines.
io::PlanFile plan_method(const PipelineConfig& config, planner::PlannerKind kind,
                         const SynergyMatrix& synergies);

// Full run: collect, learn, plan, evaluate, report. Writes every artifact
// under config.out_dir and returns the in-memory report.
BenchReport run_pipeline(const PipelineConfig& config);

}  // namespace synplan::bench
