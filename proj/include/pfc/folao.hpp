#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfc/fovi.hpp"

namespace pfc {

// Abstract states up to mutual subsumption; each class keeps its first member.
class StateRegistry {
 public:
  std::size_t add(const AbstractState& z);
  const AbstractState& state(std::size_t id) const { return states_[id]; }
  std::size_t size() const { return states_.size(); }

 private:
  std::vector<AbstractState> states_;
  std::unordered_map<std::string, std::size_t> by_key_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_shape_;
};

struct SearchFrontier {
  std::vector<AbstractState> E, F, G;
};

// Explicit graph state carried across calls of policy expansion.
class SearchGraph {
 public:
  SearchGraph(const Model& m, TransitionCache& tc) : model_(m), tc_(tc) {}

  // One call of policy expansion: returns ids of E and F and merges F into G.
  void expand(const Policy& pi, const std::vector<std::size_t>& s0, std::vector<std::size_t>& E,
              std::vector<std::size_t>& F);

  std::size_t add(const AbstractState& z);
  void seed_g(std::size_t id);
  const AbstractState& state(std::size_t id) const { return registry_.state(id); }
  bool in_g(std::size_t id) const { return id < in_g_.size() && in_g_[id]; }
  std::vector<std::size_t> g_members() const;
  std::size_t g_size() const { return g_count_; }
  // Parent in the expansion that first reached a state (S0 members have none).
  std::size_t parent(std::size_t id) const { return parent_.at(id); }

  // The option chosen by pi at z, or the canonical first option.
  const Option* policy_option(const Policy& pi, const AbstractState& z);

 private:
  const Model& model_;
  TransitionCache& tc_;
  StateRegistry registry_;
  std::vector<char> in_g_;
  std::vector<std::size_t> parent_;
  std::size_t g_count_ = 0;
};

SearchFrontier policy_expansion(const Policy& pi, const std::vector<AbstractState>& S0,
                                const std::vector<AbstractState>& G, const Model& m, TransitionCache& tc);

Policy init_policy(const std::vector<AbstractState>& S0, TransitionCache& tc);

struct SolveResult {
  Policy policy;
  ValueFunction value;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  std::size_t e_size = 0, f_size = 0, g_size = 0;
  std::vector<AbstractState> E;      // last explicit set
  std::vector<std::string> progress;  // key=value lines, one per outer iteration
  std::vector<TelemetryRow> telemetry;
  double norm_seconds = 0.0;
};

SolveResult solve(const Model& m, const SolverConfig& cfg, const ValueFunction& h, TransitionCache& tc);

}  // namespace pfc
