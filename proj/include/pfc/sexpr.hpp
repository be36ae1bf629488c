#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pfc/state.hpp"

namespace pfc::sexpr {

struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
  int line = 0;
  int col = 0;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  // (head ...) with an atom head
  bool has_head(std::string_view s) const { return is_list && !items.empty() && items[0].is_atom(s); }
};

// Top-level forms of `text`. Throws Error(Syntax) with position.
std::vector<Node> read(std::string_view text);

[[noreturn]] void fail(const Node& at, const std::string& msg);

double number(const Node& n);
const std::string& atom(const Node& n, const char* what);

// (name arg*) -> Fluent
Fluent fluent(const Node& n);
// Items after the head: fluents and (not fluent+) groups.
void state_items(const Node& list, std::size_t from, FluentTerm& pos, std::vector<FluentTerm>& negs);
AbstractState state(const Node& list, std::size_t from);

}  // namespace pfc::sexpr
