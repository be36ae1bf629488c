#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pfc/error.hpp"
#include "pfc/problem.hpp"
#include "pfc/sexpr.hpp"

namespace pfc {

namespace {

using sexpr::Node;

struct Positions {
  std::map<std::string, std::pair<int, int>> actions;
  std::pair<int, int> problem{0, 0};
};

[[noreturn]] void invalid(const std::string& msg, std::pair<int, int> at) {
  if (at.first > 0) throw Error(ErrorKind::Validation, msg, at.first, at.second);
  throw Error(ErrorKind::Validation, msg);
}

NatureChoice parse_choice(const Node& n, const ActionSchema& owner) {
  if (n.items.size() < 3) sexpr::fail(n, "expected (choice name probability (eff ...))");
  NatureChoice c;
  c.name = sexpr::atom(n.items[1], "a choice name");
  if (n.items[2].is_list) sexpr::fail(n.items[2], "state-dependent probabilities are not supported; use a constant");
  c.probability = sexpr::number(n.items[2]);
  bool have_eff = false;
  for (std::size_t i = 3; i < n.items.size(); ++i) {
    const Node& cl = n.items[i];
    if (cl.has_head("eff")) {
      if (have_eff) sexpr::fail(cl, "duplicate eff clause");
      have_eff = true;
      sexpr::state_items(cl, 1, c.effect, c.effect_negatives);
    } else if (cl.has_head("pre")) {
      FluentTerm p;
      std::vector<FluentTerm> ns;
      sexpr::state_items(cl, 1, p, ns);
      if (!(p == owner.pre) || ns != owner.pre_negatives)
        throw Error(ErrorKind::Validation, "choice " + c.name + " does not share the precondition of action " + owner.name,
                    cl.line, cl.col);
    } else {
      sexpr::fail(cl, "unknown choice clause");
    }
  }
  if (!have_eff) sexpr::fail(n, "choice " + c.name + " has no eff clause");
  return c;
}

ActionSchema parse_action(const Node& n) {
  if (n.items.size() < 2) sexpr::fail(n, "expected (action name ...)");
  ActionSchema a;
  a.name = sexpr::atom(n.items[1], "an action name");
  bool have_cost = false;
  std::vector<const Node*> choices;
  for (std::size_t i = 2; i < n.items.size(); ++i) {
    const Node& cl = n.items[i];
    if (cl.has_head("params")) {
      for (std::size_t k = 1; k < cl.items.size(); ++k) a.params.push_back(Term::parse(sexpr::atom(cl.items[k], "a parameter")));
    } else if (cl.has_head("cost")) {
      if (cl.items.size() != 2) sexpr::fail(cl, "expected (cost number)");
      a.cost = sexpr::number(cl.items[1]);
      have_cost = true;
    } else if (cl.has_head("terminal")) {
      a.terminal = true;
    } else if (cl.has_head("pre")) {
      sexpr::state_items(cl, 1, a.pre, a.pre_negatives);
    } else if (cl.has_head("choice")) {
      choices.push_back(&cl);
    } else {
      sexpr::fail(cl, "unknown action clause");
    }
  }
  if (!have_cost) throw Error(ErrorKind::Validation, "action " + a.name + " has no cost", n.line, n.col);
  for (const Node* c : choices) a.choices.push_back(parse_choice(*c, a));
  return a;
}

std::vector<std::string> atoms_after_head(const Node& n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < n.items.size(); ++i) out.push_back(sexpr::atom(n.items[i], "a name"));
  return out;
}

void check_arities(const ProblemSpec& s, std::map<Symbol, int>& arity) {
  auto visit = [&](const FluentTerm& t) {
    for (const auto& f : t) {
      auto [it, fresh] = arity.emplace(f.name, f.arity);
      if (!fresh && it->second != f.arity)
        invalid("fluent " + symbol_name(f.name) + " used with arities " + std::to_string(it->second) + " and " +
                    std::to_string(f.arity),
                {0, 0});
    }
  };
  auto visit_state = [&](const AbstractState& z) {
    visit(z.positive());
    for (const auto& n : z.negatives()) visit(n);
  };
  for (const auto& a : s.actions) {
    visit(a.pre);
    for (const auto& n : a.pre_negatives) visit(n);
    for (const auto& c : a.choices) {
      visit(c.effect);
      for (const auto& n : c.effect_negatives) visit(n);
    }
  }
  visit_state(s.goal);
  visit_state(s.init);
  for (const auto& [colour, members] : s.colors) {
    Fluent f(intern(colour), std::vector<Term>{Term::constant("x")});
    visit(FluentTerm({f}));
  }
}

void validate_impl(const ProblemSpec& s, const Positions* pos) {
  auto where = [&](const std::string& action) {
    if (pos) {
      auto it = pos->actions.find(action);
      if (it != pos->actions.end()) return it->second;
    }
    return std::pair<int, int>{0, 0};
  };
  std::pair<int, int> top = pos ? pos->problem : std::pair<int, int>{0, 0};
  std::set<std::string> names;
  bool has_terminal = false;
  for (const auto& a : s.actions) {
    if (!names.insert(a.name).second) invalid("duplicate action " + a.name, where(a.name));
    if (!(a.cost >= 0) || !std::isfinite(a.cost)) invalid("action " + a.name + " has a negative or non-finite cost", where(a.name));
    if (a.terminal) {
      has_terminal = true;
      if (!a.choices.empty() || !a.pre.empty() || !a.pre_negatives.empty())
        invalid("terminal action " + a.name + " takes no precondition or choices", where(a.name));
      continue;
    }
    if (a.choices.empty()) invalid("action " + a.name + " has no choices", where(a.name));
    if (a.pre.has_duplicates()) invalid("precondition of " + a.name + " repeats a fluent", where(a.name));
    double sum = 0;
    std::vector<Symbol> bound = a.pre.variables();
    for (const auto& n : a.pre_negatives)
      for (Symbol v : n.variables()) bound.push_back(v);
    for (Term p : a.params)
      if (p.is_var()) bound.push_back(p.symbol());
    std::sort(bound.begin(), bound.end());
    for (const auto& c : a.choices) {
      if (!(c.probability > 0 && c.probability <= 1))
        invalid("choice " + c.name + " of action " + a.name + " has probability outside (0,1]", where(a.name));
      sum += c.probability;
      if (c.effect.has_duplicates()) invalid("effect of " + c.name + " repeats a fluent", where(a.name));
      for (Symbol v : c.effect.variables())
        if (!std::binary_search(bound.begin(), bound.end(), v))
          invalid("effect of " + c.name + " uses variable " + symbol_name(v) + " not bound by the precondition",
                  where(a.name));
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "choice probabilities of action " << a.name << " sum to " << sum << ", expected 1";
      invalid(msg.str(), where(a.name));
    }
  }
  if (!has_terminal) invalid("no terminal action: every problem needs a done action", top);
  if (!(s.goal_reward > 0) || !std::isfinite(s.goal_reward)) invalid("goal reward must be positive", top);
  if (!(s.gamma > 0 && s.gamma <= 1)) invalid("discount must lie in (0,1]", top);
  if (!(s.epsilon > 0)) invalid("epsilon must be positive", top);
  std::set<std::string> objects(s.objects.begin(), s.objects.end());
  if (objects.size() != s.objects.size()) invalid("duplicate object", top);
  for (const auto& o : s.objects)
    if (is_variable_name(o)) invalid("object names must be constants: " + o, top);
  for (const auto& [colour, members] : s.colors) {
    if (is_variable_name(colour)) invalid("colour names must be constants: " + colour, top);
    for (const auto& m : members)
      if (!objects.count(m)) invalid("coloured object " + m + " is not declared", top);
  }
  std::map<Symbol, int> arity;
  check_arities(s, arity);
}

}  // namespace

void validate_problem(const ProblemSpec& spec) { validate_impl(spec, nullptr); }

ProblemSpec parse_problem(std::string_view text, ParseOptions opts) {
  std::vector<Node> forms = sexpr::read(text);
  ProblemSpec s;
  Positions pos;
  bool have_domain = false, have_problem = false;
  for (const Node& f : forms) {
    if (f.has_head("domain")) {
      if (have_domain) sexpr::fail(f, "more than one domain");
      have_domain = true;
      if (f.items.size() < 2) sexpr::fail(f, "expected (domain name ...)");
      s.domain_name = sexpr::atom(f.items[1], "a domain name");
      for (std::size_t i = 2; i < f.items.size(); ++i) {
        const Node& a = f.items[i];
        if (!a.has_head("action")) sexpr::fail(a, "expected (action ...)");
        s.actions.push_back(parse_action(a));
        pos.actions.emplace(s.actions.back().name, std::pair<int, int>{a.line, a.col});
      }
    } else if (f.has_head("problem")) {
      if (have_problem) sexpr::fail(f, "more than one problem");
      have_problem = true;
      pos.problem = {f.line, f.col};
      if (f.items.size() < 2) sexpr::fail(f, "expected (problem name ...)");
      s.problem_name = sexpr::atom(f.items[1], "a problem name");
      bool have_goal = false, have_init = false, have_reward = false;
      for (std::size_t i = 2; i < f.items.size(); ++i) {
        const Node& cl = f.items[i];
        auto single_number = [&]() {
          if (cl.items.size() != 2) sexpr::fail(cl, "expected a single number");
          return sexpr::number(cl.items[1]);
        };
        if (cl.has_head("objects")) {
          s.objects = atoms_after_head(cl);
        } else if (cl.has_head("colors")) {
          for (std::size_t k = 1; k < cl.items.size(); ++k) {
            const Node& c = cl.items[k];
            if (!c.is_list || c.items.empty()) sexpr::fail(c, "expected (colour object*)");
            auto names = atoms_after_head(c);
            s.colors.emplace_back(sexpr::atom(c.items[0], "a colour"), std::move(names));
          }
        } else if (cl.has_head("init")) {
          s.init = sexpr::state(cl, 1);
          have_init = true;
        } else if (cl.has_head("goal")) {
          s.goal = sexpr::state(cl, 1);
          have_goal = true;
        } else if (cl.has_head("reward")) {
          s.goal_reward = single_number();
          have_reward = true;
        } else if (cl.has_head("discount")) {
          s.gamma = single_number();
        } else if (cl.has_head("epsilon")) {
          s.epsilon = single_number();
        } else {
          sexpr::fail(cl, "unknown problem clause");
        }
      }
      if (!have_goal) sexpr::fail(f, "problem has no goal");
      if (!have_init) sexpr::fail(f, "problem has no init");
      if (!have_reward) sexpr::fail(f, "problem has no reward");
    } else {
      Node at = f;
      sexpr::fail(at, "expected (domain ...) or (problem ...)");
    }
  }
  if (!have_domain) throw Error(ErrorKind::Syntax, "missing (domain ...)", 1, 1);
  if (!have_problem) throw Error(ErrorKind::Syntax, "missing (problem ...)", 1, 1);
  if (opts.validate) validate_impl(s, &pos);
  return s;
}

ProblemSpec load_problem(const std::string& path, ParseOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), opts);
}

std::string format_number(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

namespace {

std::string render_fluent(const Fluent& f) {
  std::string s = "(" + symbol_name(f.name);
  for (int i = 0; i < f.arity; ++i) s += " " + f.args[i].name();
  return s + ")";
}

std::string render_items(const FluentTerm& pos, const std::vector<FluentTerm>& negs) {
  std::string s;
  for (const auto& f : pos) s += " " + render_fluent(f);
  for (const auto& n : negs) {
    s += " (not";
    for (const auto& f : n) s += " " + render_fluent(f);
    s += ")";
  }
  return s;
}

}  // namespace

std::string render_state_items(const AbstractState& z) { return render_items(z.positive(), z.negatives()); }

std::string render_problem(const ProblemSpec& s) {
  std::string o = "(domain " + s.domain_name + "\n";
  for (const auto& a : s.actions) {
    o += "  (action " + a.name;
    if (!a.params.empty()) {
      o += " (params";
      for (Term p : a.params) o += " " + p.name();
      o += ")";
    }
    o += " (cost " + format_number(a.cost) + ")";
    if (a.terminal) o += " (terminal)";
    if (!a.pre.empty() || !a.pre_negatives.empty()) o += "\n    (pre" + render_items(a.pre, a.pre_negatives) + ")";
    for (const auto& c : a.choices)
      o += "\n    (choice " + c.name + " " + format_number(c.probability) + " (eff" +
           render_items(c.effect, c.effect_negatives) + "))";
    o += ")\n";
  }
  o += ")\n\n(problem " + s.problem_name + "\n";
  o += "  (objects";
  for (const auto& x : s.objects) o += " " + x;
  o += ")\n";
  if (!s.colors.empty()) {
    o += "  (colors";
    for (const auto& [c, members] : s.colors) {
      o += " (" + c;
      for (const auto& m : members) o += " " + m;
      o += ")";
    }
    o += ")\n";
  }
  o += "  (init" + render_state_items(s.init) + ")\n";
  o += "  (goal" + render_state_items(s.goal) + ")\n";
  o += "  (reward " + format_number(s.goal_reward) + ")\n";
  o += "  (discount " + format_number(s.gamma) + ")\n";
  o += "  (epsilon " + format_number(s.epsilon) + "))\n";
  return o;
}

}  // namespace pfc
