#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfc/action.hpp"
#include "pfc/problem.hpp"
#include "pfc/state.hpp"

namespace pfc {

struct ModelOptions {
  // Replace object constants of the initial state by variables, so forward
  // states describe configurations up to relabelling of objects.
  bool lift = false;
};

struct Model {
  std::string name;
  std::vector<ActionSchema> actions;  // standardized apart, ordered by name
  AbstractState goal;
  double goal_reward = 500.0;
  double gamma = 1.0;
  AbstractState init;                     // canonical; lifted when requested
  std::optional<FluentTerm> ground_init;  // set when the initial P-part is ground
  GroundUniverse universe;

  bool is_goal(const AbstractState& z) const { return is_subsumed(z, goal); }
  bool is_goal(const FluentTerm& d) const { return satisfies(d, goal); }
  double reward(const AbstractState& z) const { return is_goal(z) ? goal_reward : 0.0; }
  const ActionSchema* find_action(const std::string& name) const;
};

Model build_model(const ProblemSpec& spec, ModelOptions opts = {});

// Model for hand-built domains in tests; `actions` are standardized here.
Model make_model(std::vector<ActionSchema> actions, AbstractState goal, double goal_reward, double gamma,
                 AbstractState init);

}  // namespace pfc
