#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pfc/state.hpp"

namespace pfc {

struct NatureChoice {
  std::string name;
  double probability = 1.0;
  FluentTerm effect;                          // P_e
  std::vector<FluentTerm> effect_negatives;   // N_e

  friend bool operator==(const NatureChoice&, const NatureChoice&) = default;
};

// All choices share the action's precondition. A terminal action ends the
// episode; it has no choices and is applicable everywhere.
struct ActionSchema {
  std::string name;
  std::vector<Term> params;
  double cost = 0.0;
  bool terminal = false;
  FluentTerm pre;                          // P_p
  std::vector<FluentTerm> pre_negatives;   // N_p
  std::vector<NatureChoice> choices;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Applicability {
  Substitution theta;               // P_p variables plus U1
  Substitution sigma;               // merged view of the per-negative witnesses
  std::vector<NegativeCover> covers;  // one per action negative

  std::string canonical() const { return theta.to_string() + sigma.to_string(); }
};

std::vector<Applicability> forward_applicable(const AbstractState& z, const ActionSchema& a);

AbstractState successor(const AbstractState& z, const ActionSchema& a, const NatureChoice& choice,
                        const Applicability& app);

struct Transition {
  const ActionSchema* action;
  Applicability app;
  std::size_t choice;   // npos for a terminal action
  AbstractState state;  // the successor; z itself for a terminal action
};

std::vector<Transition> all_successors(const AbstractState& z, const std::vector<ActionSchema>& actions);

// Renames every variable of the schema apart from any state variable.
ActionSchema standardize_action(const ActionSchema& a);

}  // namespace pfc
