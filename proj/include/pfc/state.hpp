#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfc/terms.hpp"

namespace pfc {

// Cheap necessary conditions for subsumption, computed once per state.
struct StateProfile {
  std::uint32_t size = 0;          // |P|
  std::uint32_t variables = 0;     // distinct variables of P
  std::uint32_t constant_slots = 0;
  std::uint64_t ground_bloom = 0;  // ground fluents of P
  std::uint64_t shape = 0;         // colour-refinement hash of P, renaming invariant
  std::vector<std::pair<Symbol, std::uint32_t>> name_counts;  // sorted by symbol
  // Occurrences of each constant at each argument position of each fluent name.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> constant_counts;  // sorted by key
};

// (P, N): a positive fluent term and a set of negated fluent terms. Variables
// of a negative that do not occur in P are local to that negative.
class AbstractState {
 public:
  AbstractState();
  AbstractState(FluentTerm positive, std::vector<FluentTerm> negatives);

  const FluentTerm& positive() const { return d_->positive; }
  const std::vector<FluentTerm>& negatives() const { return d_->negatives; }
  const std::vector<Symbol>& positive_variables() const { return d_->pvars; }
  std::vector<Symbol> local_variables(std::size_t negative) const;
  bool is_universal() const { return d_->positive.empty() && d_->negatives.empty(); }

  // Negative-local variables renamed to _L0, _L1, ... within each negative.
  AbstractState canonical() const;
  // Syntactic identity key of the canonical form.
  const std::string& key() const { return d_->key; }
  const StateProfile& profile() const { return d_->profile; }

  // "(P: on(X1,a) o on(a,table) | N: {on(Y1,X1)}, {holding(X2)})"
  std::string to_string() const;

  friend bool operator==(const AbstractState& a, const AbstractState& b) {
    return a.d_ == b.d_ || (a.d_->positive == b.d_->positive && a.d_->negatives == b.d_->negatives);
  }

 private:
  struct Data {
    FluentTerm positive;
    std::vector<FluentTerm> negatives;
    std::vector<Symbol> pvars;
    std::string key;
    StateProfile profile;
  };
  std::shared_ptr<const Data> d_;
};

FluentTerm canonical_negative(const FluentTerm& n, const std::vector<Symbol>& pvars);

struct SubsumptionWitness {
  Substitution theta;                    // includes U1
  std::vector<Substitution> sigma;       // one per negative of the subsuming state, each with U2
  std::vector<std::size_t> covering;     // index of the covering negative of the subsumed state
};

// Z1 is subsumed by Z2 (Z1 ⊑ Z2): Z2 is at least as general.
std::optional<SubsumptionWitness> subsumes(const AbstractState& z1, const AbstractState& z2);
bool is_subsumed(const AbstractState& z1, const AbstractState& z2);
bool equivalent(const AbstractState& a, const AbstractState& b);
// Fast rejection; false means Z1 ⊑ Z2 is impossible.
bool may_subsume(const StateProfile& z1, const StateProfile& z2);

// Substitutions sigma with N sigma o U2 = N_elem theta for some N in n_set,
// where variables of P stay fixed.
std::vector<Substitution> entails_negative(const FluentTerm& P, const FluentTerm& n_elem,
                                           const std::vector<FluentTerm>& n_set, const Substitution& theta);

struct NegativeCover {
  std::size_t index;  // covering member of the state's negatives
  Substitution sigma;
};
// All (member, sigma) covering `target` (already instantiated), P-variables rigid.
std::vector<NegativeCover> covering_negatives(const std::vector<Symbol>& pvars, const std::vector<FluentTerm>& negs,
                                              const FluentTerm& target, bool first_only);

// d is a ground state (set of ground fluents).
bool satisfies(const FluentTerm& d, const AbstractState& z, Substitution* witness = nullptr);

struct GroundUniverse {
  std::vector<Term> objects;
  std::vector<std::pair<Symbol, int>> signatures;  // fluent name, arity

  std::vector<Fluent> ground_fluents() const;
  std::size_t ground_fluent_count() const;
};

inline constexpr std::size_t kGroundFluentCap = 24;

std::vector<FluentTerm> ground_interpretation(const AbstractState& z, const GroundUniverse& u,
                                              std::size_t cap = kGroundFluentCap);

}  // namespace pfc
