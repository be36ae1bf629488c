#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfc/model.hpp"
#include "pfc/value.hpp"

namespace pfc {

struct GroundOutcome {
  double probability = 0.0;
  std::size_t next = 0;
};

struct GroundAction {
  std::string label;  // e.g. pickup(b1,b2)
  double cost = 0.0;
  std::vector<GroundOutcome> outcomes;
};

// Reachable ground MDP. Goal states are absorbing; the terminal action is
// implicit in every state with value -done_cost.
struct GroundMDP {
  std::vector<FluentTerm> states;
  std::vector<char> goal;
  std::vector<std::vector<GroundAction>> actions;
  double goal_reward = 0.0;
  double gamma = 1.0;
  double done_cost = 0.0;
  std::size_t initial = 0;

  std::optional<std::size_t> find(const FluentTerm& d) const;

  std::unordered_map<std::string, std::size_t> index;
};

inline constexpr std::size_t kGroundStateCap = 200000;

GroundMDP ground_problem(const Model& m, std::size_t state_cap = kGroundStateCap);
GroundMDP ground_problem(const Model& m, const FluentTerm& start, std::size_t state_cap = kGroundStateCap);

struct GroundApplication {
  std::string label;
  double cost = 0.0;
  std::vector<std::pair<double, FluentTerm>> outcomes;
};

// Ground instances of the model's non-terminal actions executable in d.
std::vector<GroundApplication> ground_applications(const Model& m, const FluentTerm& d);

// Synchronous Bellman iteration to sup-norm residual <= epsilon.
std::vector<double> ground_value_iteration(const GroundMDP& m, double epsilon, double initial_value = 0.0,
                                           int* iterations = nullptr, int max_iterations = 10000000);
// Exactly `sweeps` synchronous sweeps from a constant initializer.
std::vector<double> ground_value_iterates(const GroundMDP& m, double initial_value, int sweeps);

struct SimulationConfig {
  int runs = 30;
  int horizon = 1000;
  std::uint64_t seed = 1;
};

struct SimulationStats {
  std::string rng = "mt19937_64";
  std::uint64_t seed = 0;
  int runs = 0;
  double mean = 0.0, min = 0.0, max = 0.0, stddev = 0.0, std_error = 0.0;
  double goal_rate = 0.0;
  std::vector<double> totals;
};

// Executes the lifted policy on ground states; a state without a usable
// policy entry ends the run as if `done` were chosen.
SimulationStats simulate_policy(const Model& m, const Policy& pi, const FluentTerm& start, const SimulationConfig& cfg);

std::string format_stats(const SimulationStats& s);

}  // namespace pfc
