#include "pfc/blocksworld.hpp"

#include <algorithm>
#include <charconv>
#include <random>

#include "pfc/error.hpp"

namespace pfc {

namespace {

Fluent fl(std::string_view name, std::initializer_list<std::string_view> args) { return make_fluent(name, args); }

}  // namespace

std::vector<ColorClass> parse_color_spec(std::string_view text) {
  std::vector<ColorClass> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    std::string_view item = text.substr(i, j - i);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos)
      throw Error(ErrorKind::InvalidArgument, "colour item '" + std::string(item) + "' is not count:name");
    ColorClass c;
    auto count = item.substr(0, colon);
    auto [p, ec] = std::from_chars(count.data(), count.data() + count.size(), c.count);
    if (ec != std::errc() || p != count.data() + count.size() || c.count <= 0)
      throw Error(ErrorKind::InvalidArgument, "bad colour multiplicity in '" + std::string(item) + "'");
    c.name = std::string(item.substr(colon + 1));
    if (c.name.empty() || is_variable_name(c.name))
      throw Error(ErrorKind::InvalidArgument, "colour names must be lowercase constants: '" + c.name + "'");
    out.push_back(std::move(c));
    i = j + 1;
  }
  return out;
}

std::vector<ActionSchema> colored_bw_actions(double p) {
  std::vector<ActionSchema> acts;
  bool noisy = p < 1.0;

  ActionSchema done;
  done.name = "done";
  done.terminal = true;
  acts.push_back(done);

  ActionSchema pick;
  pick.name = "pickup";
  pick.params = {Term::var("X"), Term::var("Y")};
  pick.cost = 1;
  pick.pre = {fl("on", {"X", "Y"}), fl("on", {"Y", "Z"}), fl("e", {})};
  pick.pre_negatives = {FluentTerm{fl("on", {"W", "X"})}};
  pick.choices.push_back({"pickup-s", p, {fl("holding", {"X"}), fl("on", {"Y", "Z"})}, {FluentTerm{fl("on", {"W", "Y"})}}});
  if (noisy)
    pick.choices.push_back({"pickup-f", 1 - p,
                            {fl("on", {"X", "table"}), fl("on", {"Y", "Z"}), fl("e", {})},
                            {FluentTerm{fl("on", {"W", "X"})}, FluentTerm{fl("on", {"W", "Y"})}}});
  acts.push_back(pick);

  ActionSchema pickt;
  pickt.name = "pickup-table";
  pickt.params = {Term::var("X")};
  pickt.cost = 1;
  pickt.pre = {fl("on", {"X", "table"}), fl("e", {})};
  pickt.pre_negatives = {FluentTerm{fl("on", {"W", "X"})}};
  pickt.choices.push_back({"pickup-table-s", p, {fl("holding", {"X"})}, {}});
  if (noisy) pickt.choices.push_back({"pickup-table-f", 1 - p, pickt.pre, pickt.pre_negatives});
  acts.push_back(pickt);

  ActionSchema put;
  put.name = "putdown";
  put.params = {Term::var("X"), Term::var("Y")};
  put.cost = 0;
  put.pre = {fl("holding", {"X"}), fl("on", {"Y", "Z"})};
  put.pre_negatives = {FluentTerm{fl("on", {"W", "Y"})}};
  put.choices.push_back({"putdown-s", p,
                         {fl("on", {"X", "Y"}), fl("on", {"Y", "Z"}), fl("e", {})},
                         {FluentTerm{fl("on", {"W", "X"})}}});
  if (noisy)
    put.choices.push_back({"putdown-f", 1 - p,
                           {fl("on", {"X", "table"}), fl("on", {"Y", "Z"}), fl("e", {})},
                           {FluentTerm{fl("on", {"W", "X"})}, FluentTerm{fl("on", {"W", "Y"})}}});
  acts.push_back(put);

  ActionSchema putt;
  putt.name = "putdown-table";
  putt.params = {Term::var("X")};
  putt.cost = 0;
  putt.pre = {fl("holding", {"X"})};
  putt.choices.push_back({"putdown-table-s", 1.0, {fl("on", {"X", "table"}), fl("e", {})}, {FluentTerm{fl("on", {"W", "X"})}}});
  acts.push_back(putt);
  return acts;
}

std::uint64_t goal_tower_count(const std::vector<ColorClass>& colors) {
  std::uint64_t n = 1;
  for (const auto& c : colors)
    for (int k = 2; k <= c.count; ++k) n *= static_cast<std::uint64_t>(k);
  return n;
}

ProblemSpec generate_colored_bw(const BWGeneratorConfig& cfg) {
  if (cfg.blocks < 1) throw Error(ErrorKind::InvalidArgument, "need at least one block");
  if (cfg.colors.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one colour");
  int total = 0;
  for (const auto& c : cfg.colors) total += c.count;
  if (total != cfg.blocks)
    throw Error(ErrorKind::InvalidArgument, "colour multiplicities sum to " + std::to_string(total) + ", expected " +
                                                std::to_string(cfg.blocks));
  if (!(cfg.success_probability > 0 && cfg.success_probability <= 1))
    throw Error(ErrorKind::InvalidArgument, "success probability must lie in (0,1]");

  std::mt19937_64 rng(cfg.seed);
  const int B = cfg.blocks;
  std::vector<std::string> blocks;
  for (int i = 1; i <= B; ++i) blocks.push_back("b" + std::to_string(i));

  ProblemSpec s;
  s.domain_name = "colored-blocksworld";
  s.problem_name = "bw-" + std::to_string(B) + "-c" + std::to_string(cfg.colors.size()) + "-s" + std::to_string(cfg.seed);
  s.actions = colored_bw_actions(cfg.success_probability);
  s.objects = blocks;
  s.goal_reward = 500;

  std::vector<int> order(static_cast<std::size_t>(B));
  for (int i = 0; i < B; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t next = 0;
  for (const auto& c : cfg.colors) {
    std::vector<int> members(order.begin() + static_cast<long>(next), order.begin() + static_cast<long>(next) + c.count);
    next += static_cast<std::size_t>(c.count);
    std::sort(members.begin(), members.end());
    std::vector<std::string> names;
    for (int m : members) names.push_back(blocks[static_cast<std::size_t>(m)]);
    s.colors.emplace_back(c.name, std::move(names));
  }

  std::vector<int> stack(static_cast<std::size_t>(B));
  for (int i = 0; i < B; ++i) stack[static_cast<std::size_t>(i)] = i;
  std::shuffle(stack.begin(), stack.end(), rng);
  std::vector<Fluent> init{fl("e", {})};
  std::vector<FluentTerm> clear;
  for (int i = 0; i < B; ++i) {
    const std::string& b = blocks[static_cast<std::size_t>(stack[static_cast<std::size_t>(i)])];
    bool new_tower = i == 0 || (rng() & 1u);
    const std::string& below = new_tower ? std::string("table") : blocks[static_cast<std::size_t>(stack[static_cast<std::size_t>(i - 1)])];
    if (new_tower && i > 0)
      clear.push_back(FluentTerm{fl("on", {"W", blocks[static_cast<std::size_t>(stack[static_cast<std::size_t>(i - 1)])]})});
    init.push_back(fl("on", {b, below}));
  }
  clear.push_back(FluentTerm{fl("on", {"W", blocks[static_cast<std::size_t>(stack.back())]})});
  s.init = AbstractState(FluentTerm(std::move(init)), std::move(clear));

  std::vector<std::string> seq = cfg.goal_colors;
  if (seq.empty()) {
    for (const auto& c : cfg.colors)
      for (int k = 0; k < c.count; ++k) seq.push_back(c.name);
    std::shuffle(seq.begin(), seq.end(), rng);
  } else if (static_cast<int>(seq.size()) != B) {
    throw Error(ErrorKind::InvalidArgument, "goal colour sequence must name every block position");
  }
  std::vector<Fluent> goal;
  std::vector<std::string> xs;
  for (int i = 0; i < B; ++i) xs.push_back("X" + std::to_string(i));
  for (int i = 0; i < B; ++i) {
    goal.push_back(fl("on", {xs[static_cast<std::size_t>(i)], i + 1 < B ? xs[static_cast<std::size_t>(i + 1)] : std::string("table")}));
    goal.push_back(fl(seq[static_cast<std::size_t>(i)], {xs[static_cast<std::size_t>(i)]}));
  }
  s.goal = AbstractState(FluentTerm(std::move(goal)), {FluentTerm{fl("on", {"Y", "X0"})}});
  return s;
}

}  // namespace pfc
