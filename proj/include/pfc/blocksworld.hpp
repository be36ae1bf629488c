#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pfc/problem.hpp"

namespace pfc {

struct ColorClass {
  std::string name;
  int count = 0;
};

struct BWGeneratorConfig {
  int blocks = 0;
  std::vector<ColorClass> colors;
  std::uint64_t seed = 1;
  double success_probability = 0.75;
  // Goal colours from the top of the tower down; drawn from the seed when empty.
  std::vector<std::string> goal_colors;
};

// "4:red,3:green,1:blue"
std::vector<ColorClass> parse_color_spec(std::string_view text);

ProblemSpec generate_colored_bw(const BWGeneratorConfig& cfg);

// done, pickup, pickup-table, putdown, putdown-table
std::vector<ActionSchema> colored_bw_actions(double success_probability);

// Towers of all blocks satisfying the colour goal: product of multiplicity factorials.
std::uint64_t goal_tower_count(const std::vector<ColorClass>& colors);

}  // namespace pfc
