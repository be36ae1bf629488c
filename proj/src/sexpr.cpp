#include "pfc/sexpr.hpp"

#include <charconv>
#include <cmath>

#include "pfc/error.hpp"

namespace pfc::sexpr {

namespace {

bool atom_char(unsigned char c) {
  if (c <= 32 || c >= 127) return false;
  return c != '(' && c != ')' && c != ';' && c != '"' && c != '#';
}

}  // namespace

std::vector<Node> read(std::string_view text) {
  std::vector<Node> stack(1);
  stack[0].is_list = true;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    ++i;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(static_cast<char>(c));
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance(text[i]);
    } else if (c == '(') {
      Node n;
      n.is_list = true;
      n.line = line;
      n.col = col;
      stack.push_back(std::move(n));
      advance('(');
    } else if (c == ')') {
      if (stack.size() == 1) throw Error(ErrorKind::Syntax, "unbalanced ')'", line, col);
      Node done = std::move(stack.back());
      stack.pop_back();
      stack.back().items.push_back(std::move(done));
      advance(')');
    } else if (atom_char(c)) {
      Node n;
      n.line = line;
      n.col = col;
      while (i < text.size() && atom_char(static_cast<unsigned char>(text[i]))) {
        n.atom += text[i];
        advance(text[i]);
      }
      stack.back().items.push_back(std::move(n));
    } else {
      throw Error(ErrorKind::Syntax, "unexpected character", line, col);
    }
  }
  if (stack.size() > 1) {
    const Node& open = stack.back();
    throw Error(ErrorKind::Syntax, "unclosed '('", open.line, open.col);
  }
  return std::move(stack[0].items);
}

void fail(const Node& at, const std::string& msg) { throw Error(ErrorKind::Syntax, msg, at.line, at.col); }

double number(const Node& n) {
  if (n.is_list) fail(n, "expected a number");
  double x = 0;
  const char* b = n.atom.data();
  const char* e = b + n.atom.size();
  auto [p, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || p != e || !std::isfinite(x)) fail(n, "expected a number, got '" + n.atom + "'");
  return x;
}

const std::string& atom(const Node& n, const char* what) {
  if (n.is_list) fail(n, std::string("expected ") + what);
  return n.atom;
}

Fluent fluent(const Node& n) {
  if (!n.is_list || n.items.empty()) fail(n, "expected a fluent (name arg*)");
  const std::string& name = atom(n.items[0], "a fluent name");
  if (is_variable_name(name)) fail(n.items[0], "fluent name must not be a variable: " + name);
  if (n.items.size() - 1 > static_cast<std::size_t>(kMaxArity))
    fail(n, "fluent " + name + " has more than " + std::to_string(kMaxArity) + " arguments");
  std::vector<Term> args;
  for (std::size_t i = 1; i < n.items.size(); ++i) args.push_back(Term::parse(atom(n.items[i], "a variable or constant")));
  return Fluent(intern(name), args);
}

void state_items(const Node& list, std::size_t from, FluentTerm& pos, std::vector<FluentTerm>& negs) {
  std::vector<Fluent> fs;
  for (std::size_t i = from; i < list.items.size(); ++i) {
    const Node& it = list.items[i];
    if (it.has_head("not")) {
      if (it.items.size() < 2) fail(it, "(not ...) needs at least one fluent");
      std::vector<Fluent> nf;
      for (std::size_t k = 1; k < it.items.size(); ++k) nf.push_back(fluent(it.items[k]));
      negs.emplace_back(std::move(nf));
    } else {
      fs.push_back(fluent(it));
    }
  }
  pos = FluentTerm(std::move(fs));
  if (pos.has_duplicates())
    throw Error(ErrorKind::Validation, "fluent occurs twice: " + pos.to_string(), list.line, list.col);
}

AbstractState state(const Node& list, std::size_t from) {
  FluentTerm pos;
  std::vector<FluentTerm> negs;
  state_items(list, from, pos, negs);
  return AbstractState(std::move(pos), std::move(negs));
}

}  // namespace pfc::sexpr
