#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfc/action.hpp"
#include "pfc/state.hpp"

namespace pfc {

struct ProblemSpec {
  std::string domain_name;
  std::string problem_name;
  std::vector<ActionSchema> actions;
  AbstractState goal;
  double goal_reward = 500.0;
  AbstractState init;
  std::vector<std::string> objects;
  std::vector<std::pair<std::string, std::vector<std::string>>> colors;  // colour, members
  double gamma = 1.0;
  double epsilon = 1e-4;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct ParseOptions {
  bool validate = true;
};

// Throws Error(Syntax) or Error(Validation) with line and column.
ProblemSpec parse_problem(std::string_view text, ParseOptions opts = {});
ProblemSpec load_problem(const std::string& path, ParseOptions opts = {});

// Semantic checks applied by parse_problem; throws Error(Validation).
void validate_problem(const ProblemSpec& spec);

std::string render_problem(const ProblemSpec& spec);

// Rendering and parsing of single pieces, shared with policy/value files.
std::string render_state_items(const AbstractState& z);
std::string format_number(double x);

}  // namespace pfc
