#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfc/action.hpp"
#include "pfc/state.hpp"

namespace pfc {

struct ValueEntry {
  AbstractState state;
  double value = 0.0;
};

// Entries with an index over state profiles for subsumption lookups. An entry
// whose state is the universal (1, {}) only answers when nothing else matches.
class ValueFunction {
 public:
  ValueFunction() = default;
  explicit ValueFunction(std::vector<ValueEntry> entries);

  const std::vector<ValueEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t universal_count() const { return universal_.size(); }
  const std::vector<std::size_t>& universal_entries() const { return universal_; }

  // Non-universal entries e with z ⊑ e.state; f returns false to stop.
  void for_each_subsumer(const AbstractState& z, const std::function<bool(std::size_t)>& f) const;
  std::optional<std::size_t> find_equivalent(const AbstractState& z) const;

 private:
  struct Bucket {
    std::uint32_t size, variables, constant_slots;
    std::vector<std::size_t> all;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_shape;
  };
  std::vector<ValueEntry> entries_;
  std::vector<std::size_t> universal_;
  std::vector<Bucket> buckets_;
};

double evaluate(const ValueFunction& v, const AbstractState& z);
double evaluate_ground(const ValueFunction& v, const FluentTerm& d);

ValueFunction normalize(const ValueFunction& v);

double residual(const ValueFunction& v, const ValueFunction& v_prev, const std::vector<AbstractState>& probe);

struct PolicyEntry {
  AbstractState state;
  std::string action;
  Applicability app;
};

class Policy {
 public:
  void set(const AbstractState& z, std::string action, Applicability app);
  const PolicyEntry* find(const AbstractState& z) const;
  const std::vector<PolicyEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Most specific entry whose state is satisfied by the ground state d;
  // `embedding` receives the positive embedding of that state into d.
  const PolicyEntry* lookup_ground(const FluentTerm& d, Substitution* embedding) const;

 private:
  std::vector<PolicyEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

}  // namespace pfc
