#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfc/model.hpp"
#include "pfc/value.hpp"

namespace pfc {

struct SolverConfig {
  double gamma = 1.0;
  double epsilon = 1e-4;
  int heuristic_iterations = 20;
  int max_iterations = 1000;  // sweeps of full-space FOVI
  int max_outer = 500;        // FOLAO* outer iterations
  int inner_sweeps = 1;
  double time_limit = 0.0;    // seconds; 0 = none
};

// One deterministic option at a state: an action with an applicability and the
// successor of every nature's choice.
struct Option {
  const ActionSchema* action = nullptr;
  Applicability app;
  std::vector<AbstractState> outcomes;
};

struct StateInfo {
  bool goal = false;
  std::vector<Option> options;  // ordered by action name, then applicability
};

// Memoizes goal tests and successor generation per canonical state.
class TransitionCache {
 public:
  explicit TransitionCache(const Model& m) : model_(m) {}
  const StateInfo& info(const AbstractState& z);
  const Model& model() const { return model_; }
  std::size_t size() const { return cache_.size(); }

 private:
  const Model& model_;
  std::unordered_map<std::string, std::unique_ptr<StateInfo>> cache_;
};

struct StateBackup {
  double value = 0.0;
  std::size_t option = 0;  // index into StateInfo::options
};

double q_value(const AbstractState& z, const StateInfo& info, const Option& o, const ValueFunction& v, double gamma,
               double goal_reward);
StateBackup backup_state(const AbstractState& z, TransitionCache& tc, const ValueFunction& v_prev, double gamma);

// New values for E (not normalized).
ValueFunction backup(const std::vector<AbstractState>& E, TransitionCache& tc, double gamma, const ValueFunction& v_prev);

Policy extract_policy(const ValueFunction& v, const std::vector<AbstractState>& E, TransitionCache& tc, double gamma);

struct TelemetryRow {
  int iteration = 0;
  std::size_t s_update = 0;
  std::size_t s_norm = 0;
  double update_seconds = 0.0;
  double norm_seconds = 0.0;
};
// phase,iteration,s_update,s_norm,update_seconds,norm_seconds
std::string telemetry_csv(const std::vector<TelemetryRow>& rows, const std::string& phase, bool header = true);

struct SweepResult {
  ValueFunction value;
  std::vector<AbstractState> states;  // non-universal states of `value`
  std::vector<TelemetryRow> telemetry;
  int sweeps = 0;
  bool converged = false;
  double residual = 0.0;
};

// Layered full-space FOVI from {<(1,{}), goal reward>} and the initial state.
// With until_converged, runs until the state set stops growing and the
// residual is within epsilon, else exactly `sweeps` sweeps.
SweepResult fovi_sweeps(const Model& m, TransitionCache& tc, const SolverConfig& cfg, int sweeps, bool until_converged);

ValueFunction make_heuristic(const Model& m, int iterations, TransitionCache& tc, double gamma,
                             std::vector<TelemetryRow>* telemetry = nullptr);
ValueFunction make_heuristic(const Model& m, int iterations);

}  // namespace pfc
