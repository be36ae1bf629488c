#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfc/folao.hpp"
#include "pfc/ground.hpp"
#include "pfc/problem.hpp"

namespace pfc {

enum class SolveMode { Folao, FoviOnly, TrivialHeuristic };

struct SolveOptions {
  SolveMode mode = SolveMode::Folao;
  int heuristic_iterations = 20;
  std::optional<double> epsilon;  // problem's value when unset
  std::optional<double> gamma;
  int max_outer = 500;
  int inner_sweeps = 1;
  int max_iterations = 1000;
  double time_limit = 0.0;
  int eval_runs = 30;  // 0 skips the simulated reward
  std::uint64_t seed = 1;
  std::size_t ground_state_cap = 100000;
};

// One row of the results table; times in seconds.
struct RunReport {
  std::string problem;
  std::string mode;
  std::size_t blocks = 0;
  std::size_t colors = 0;
  std::optional<double> total_av_reward;
  double total_seconds = 0.0;
  double heuristic_seconds = 0.0;
  std::size_t nas = 0;
  std::optional<std::size_t> ngs;              // exact reachable ground states
  std::optional<std::uint64_t> goal_groundings;  // towers satisfying a colour goal
  double norm_pct = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double value_init = 0.0;
  int heuristic_iterations = 0;
  double epsilon = 0.0;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

std::string render_report(const RunReport& r);  // key=value lines

struct SolveOutcome {
  Policy policy;
  ValueFunction value;
  std::vector<std::string> progress;
  std::string telemetry;  // CSV
  RunReport report;
};

SolveOutcome run_solve(const ProblemSpec& spec, const Model& m, const SolveOptions& opts);

// Towers over all objects that satisfy a goal naming one colour per object.
std::optional<std::uint64_t> colour_goal_groundings(const ProblemSpec& spec);

}  // namespace pfc
