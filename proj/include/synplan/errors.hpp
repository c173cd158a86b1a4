#pragma once

#include <stdexcept>
#include <string>

namespace synplan {

// Base class for all toolkit errors. Subclasses indicate which layer
// rejected the input, so callers (notably the CLI) can map them to
// distinct exit codes.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid domain data: bad process spec, plan, geometry or config.
class spec_error : public error {
 public:
  using error::error;
};

class cyclic_precedence_error : public spec_error {
 public:
  explicit cyclic_precedence_error(const std::string& cycle)
      : spec_error("cyclic precedence: " + cycle) {}
};

class no_capable_agent_error : public spec_error {
 public:
  explicit no_capable_agent_error(const std::string& task)
      : spec_error("task '" + task + "' has no capable agent") {}
};

class non_positive_duration_error : public spec_error {
 public:
  non_positive_duration_error(const std::string& task, const std::string& agent)
      : spec_error("non-positive duration for task '" + task + "' on agent '" +
                   agent + "'") {}
};

// Solver-layer failures (LP/MILP).
class solver_error : public error {
 public:
  using error::error;
};

class unbounded_error : public solver_error {
 public:
  using solver_error::solver_error;
};

class numerical_error : public solver_error {
 public:
  using solver_error::solver_error;
};

// Simulator-layer failures.
class sim_error : public error {
 public:
  using error::error;
};

class stalled_execution_error : public sim_error {
 public:
  using sim_error::sim_error;
};

// Learning-layer failures.
class learn_error : public error {
 public:
  using error::error;
};

// File / serialization problems.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace synplan
