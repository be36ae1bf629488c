#include "pfc/policy_io.hpp"

#include "pfc/error.hpp"
#include "pfc/problem.hpp"
#include "pfc/sexpr.hpp"

namespace pfc {

namespace {

std::string render_fluents(const FluentTerm& t) {
  std::string s;
  for (const auto& f : t) {
    s += " (" + symbol_name(f.name);
    for (int i = 0; i < f.arity; ++i) s += " " + f.args[i].name();
    s += ")";
  }
  return s;
}

std::string render_substitution(const char* head, const Substitution& s) {
  std::string o = std::string("(") + head;
  for (const auto& [v, t] : s.bindings()) o += " (" + symbol_name(v) + " " + t.name() + ")";
  for (const auto& [u, t] : s.extensions()) o += " (" + symbol_name(u) + render_fluents(t) + ")";
  return o + ")";
}

Substitution parse_substitution(const sexpr::Node& n) {
  Substitution s;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    const auto& b = n.items[i];
    if (!b.is_list || b.items.empty()) sexpr::fail(b, "expected (variable term) binding");
    const std::string& var = sexpr::atom(b.items[0], "variable");
    if (!is_variable_name(var)) sexpr::fail(b.items[0], "'" + var + "' is not a variable");
    if (b.items.size() == 2 && !b.items[1].is_list) {
      s.bind(intern(var), Term::parse(sexpr::atom(b.items[1], "term")));
      continue;
    }
    std::vector<Fluent> fs;
    for (std::size_t k = 1; k < b.items.size(); ++k) fs.push_back(sexpr::fluent(b.items[k]));
    s.bind_extension(intern(var), FluentTerm(std::move(fs)));
  }
  return s;
}

const sexpr::Node& single_form(const std::vector<sexpr::Node>& forms, const char* head) {
  if (forms.size() != 1 || !forms[0].has_head(head))
    throw Error(ErrorKind::Syntax, std::string("expected a single (") + head + " ...) form");
  return forms[0];
}

}  // namespace

std::string render_policy(const Policy& pi) {
  std::string o = "(policy\n";
  for (const auto& e : pi.entries()) {
    o += "  (entry (state" + render_state_items(e.state) + ")\n    (action " + e.action + ")\n    " +
         render_substitution("theta", e.app.theta) + "\n    " + render_substitution("sigma", e.app.sigma) + ")\n";
  }
  return o + ")\n";
}

Policy parse_policy(std::string_view text) {
  auto forms = sexpr::read(text);
  const auto& top = single_form(forms, "policy");
  Policy pi;
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const auto& e = top.items[i];
    if (!e.has_head("entry")) sexpr::fail(e, "expected (entry ...)");
    const sexpr::Node *st = nullptr, *act = nullptr, *th = nullptr, *sg = nullptr;
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      const auto& f = e.items[k];
      if (f.has_head("state")) st = &f;
      else if (f.has_head("action")) act = &f;
      else if (f.has_head("theta")) th = &f;
      else if (f.has_head("sigma")) sg = &f;
      else sexpr::fail(f, "unknown entry field");
    }
    if (!st || !act) sexpr::fail(e, "entry needs (state ...) and (action ...)");
    if (act->items.size() != 2) sexpr::fail(*act, "expected (action NAME)");
    Applicability app;
    if (th) app.theta = parse_substitution(*th);
    if (sg) app.sigma = parse_substitution(*sg);
    pi.set(sexpr::state(*st, 1).canonical(), sexpr::atom(act->items[1], "action name"), std::move(app));
  }
  return pi;
}

std::string render_value(const ValueFunction& v) {
  std::string o = "(value\n";
  for (const auto& e : v.entries()) o += "  (entry " + format_number(e.value) + " (state" + render_state_items(e.state) + "))\n";
  return o + ")\n";
}

ValueFunction parse_value(std::string_view text) {
  auto forms = sexpr::read(text);
  const auto& top = single_form(forms, "value");
  std::vector<ValueEntry> out;
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const auto& e = top.items[i];
    if (!e.has_head("entry") || e.items.size() != 3 || !e.items[2].has_head("state"))
      sexpr::fail(e, "expected (entry VALUE (state ...))");
    out.push_back({sexpr::state(e.items[2], 1).canonical(), sexpr::number(e.items[1])});
  }
  return ValueFunction(std::move(out));
}

}  // namespace pfc
