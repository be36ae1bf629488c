#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pfc {

using Symbol = std::uint32_t;

// Process-wide interner. Thread-safe; ids are stable for the process lifetime.
Symbol intern(std::string_view name);
const std::string& symbol_name(Symbol s);

// Identifiers starting with an uppercase letter or '_' are variables.
bool is_variable_name(std::string_view name);

class Term {
 public:
  Term() = default;
  static Term var(Symbol s) { return Term((s << 1) | 1u); }
  static Term constant(Symbol s) { return Term(s << 1); }
  static Term var(std::string_view name) { return var(intern(name)); }
  static Term constant(std::string_view name) { return constant(intern(name)); }
  static Term parse(std::string_view name) {
    return is_variable_name(name) ? var(name) : constant(name);
  }

  bool is_var() const { return bits_ & 1u; }
  Symbol symbol() const { return bits_ >> 1; }
  const std::string& name() const { return symbol_name(symbol()); }
  std::uint32_t raw() const { return bits_; }

  friend bool operator==(Term a, Term b) { return a.bits_ == b.bits_; }
  friend bool operator!=(Term a, Term b) { return a.bits_ != b.bits_; }

 private:
  explicit Term(std::uint32_t bits) : bits_(bits) {}
  std::uint32_t bits_ = 0;
};

// Name-based order, so canonical forms do not depend on interning order.
int compare_terms(Term a, Term b);

inline constexpr int kMaxArity = 4;

struct Fluent {
  Symbol name = 0;
  std::uint8_t arity = 0;
  std::array<Term, kMaxArity> args{};

  Fluent() = default;
  Fluent(std::string_view name, std::initializer_list<Term> args);
  Fluent(Symbol name, std::span<const Term> args);

  std::span<const Term> arguments() const { return {args.data(), arity}; }
  bool is_ground() const;
  std::string to_string() const;

  friend bool operator==(const Fluent& a, const Fluent& b) {
    if (a.name != b.name || a.arity != b.arity) return false;
    for (int i = 0; i < a.arity; ++i)
      if (a.args[i] != b.args[i]) return false;
    return true;
  }
};

int compare_fluents(const Fluent& a, const Fluent& b);
inline bool fluent_less(const Fluent& a, const Fluent& b) { return compare_fluents(a, b) < 0; }

// Shorthand for tests and fixtures: f("on", "X", "a").
Fluent make_fluent(std::string_view name, std::initializer_list<std::string_view> args);

// A multiset of fluents kept in canonical sorted order; the empty term is the unit 1.
class FluentTerm {
 public:
  FluentTerm() = default;
  FluentTerm(std::vector<Fluent> fluents);
  FluentTerm(std::initializer_list<Fluent> fluents) : FluentTerm(std::vector<Fluent>(fluents)) {}

  const std::vector<Fluent>& fluents() const { return fluents_; }
  std::size_t size() const { return fluents_.size(); }
  bool empty() const { return fluents_.empty(); }
  auto begin() const { return fluents_.begin(); }
  auto end() const { return fluents_.end(); }
  const Fluent& operator[](std::size_t i) const { return fluents_[i]; }

  bool has_duplicates() const;
  bool is_ground() const;
  bool contains(const Fluent& f) const;
  std::vector<Symbol> variables() const;  // sorted by symbol id, unique
  std::string to_string() const;          // "on(X,a) o e" or "1"

  friend bool operator==(const FluentTerm& a, const FluentTerm& b) { return a.fluents_ == b.fluents_; }

 private:
  std::vector<Fluent> fluents_;
};

FluentTerm combine(const FluentTerm& a, const FluentTerm& b);
// Multiset difference a - b; requires b to be a sub-multiset of a.
FluentTerm subtract(const FluentTerm& a, const FluentTerm& b);

class Substitution {
 public:
  const Term* lookup(Symbol var) const;
  const FluentTerm* lookup_extension(Symbol ext) const;
  void bind(Symbol var, Term value);
  void bind_extension(Symbol ext, FluentTerm value);

  Term apply(Term t) const;
  Fluent apply(const Fluent& f) const;
  FluentTerm apply(const FluentTerm& t) const;

  const std::vector<std::pair<Symbol, Term>>& bindings() const { return vars_; }
  const std::vector<std::pair<Symbol, FluentTerm>>& extensions() const { return ext_; }
  bool empty() const { return vars_.empty() && ext_.empty(); }

  // Canonical text, bindings ordered by variable name: "{X->a, Y->b, U1->on(a,b)}".
  std::string to_string() const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.vars_ == b.vars_ && a.ext_ == b.ext_;
  }

 private:
  std::vector<std::pair<Symbol, Term>> vars_;  // sorted by symbol id
  std::vector<std::pair<Symbol, FluentTerm>> ext_;
};

// Instantiates t, then appends the binding of `ext` if given and bound.
FluentTerm apply_substitution(const FluentTerm& t, const Substitution& s,
                              std::optional<Symbol> ext = std::nullopt);

// Variables in `rigid` behave like constants in the pattern; all other pattern
// variables may be bound. Target variables are opaque names.
struct MatchScope {
  std::span<const Symbol> rigid;  // sorted by id
  const Substitution* initial = nullptr;
  bool allow_remainder = true;
  bool is_rigid(Symbol v) const;
};

// Visits every injective embedding of pattern fluents into target fluents.
// The visitor receives the variable bindings and the unused-target mask and
// returns false to stop the enumeration. Returns false if stopped early.
using MatchVisitor = std::function<bool(const Substitution&, const std::vector<char>& used)>;
bool for_each_embedding(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope,
                        const MatchVisitor& visit);

// Called after each pattern fluent is placed, with all bindings so far and the
// offset where this step's new ones begin; false abandons the branch.
using PartialBindings = std::span<const std::pair<Symbol, Term>>;
using MatchPruner = std::function<bool(PartialBindings bindings, std::size_t fresh_from)>;
bool for_each_embedding(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope,
                        const MatchVisitor& visit, const MatchPruner& prune);

bool has_embedding(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope);

FluentTerm unused_part(const FluentTerm& target, const std::vector<char>& used);

struct MatchProblem {
  FluentTerm pattern;
  Symbol extension;  // the U of (pattern o U)
  FluentTerm target;
};

// All substitutions (deduplicated by binding) with (pattern o U)theta = target.
std::vector<Substitution> ac1_match(const MatchProblem& p);

Symbol fresh_variable(std::string_view base);

struct Renaming {
  FluentTerm term;
  Substitution map;
};
Renaming standardize_apart(const FluentTerm& t, std::span<const Symbol> reserved = {});

}  // namespace pfc
