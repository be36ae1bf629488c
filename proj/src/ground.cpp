#include "pfc/ground.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "pfc/error.hpp"

namespace pfc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double terminal_cost(const Model& m) {
  for (const auto& a : m.actions)
    if (a.terminal) return a.cost;
  return 0.0;
}

std::string label_of(const ActionSchema& a, const Substitution& theta) {
  std::string out = a.name + "(";
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (i) out += ",";
    out += theta.apply(a.params[i]).name();
  }
  return out + ")";
}

// Negatives hold in d under closed-world reading: no instance of any of them is present.
bool negatives_hold(const FluentTerm& d, const std::vector<FluentTerm>& negs, const Substitution& theta) {
  MatchScope scope;
  for (const auto& n : negs)
    if (has_embedding(theta.apply(n), d, scope)) return false;
  return true;
}

FluentTerm ground_successor(const FluentTerm& d, const FluentTerm& pre, const FluentTerm& eff) {
  FluentTerm next = combine(subtract(d, pre), eff);
  if (next.has_duplicates())
    throw Error(ErrorKind::InconsistentSuccessor, "ground successor repeats a fluent: " + next.to_string());
  if (!next.is_ground()) throw Error(ErrorKind::InconsistentSuccessor, "effect leaves a variable unbound: " + next.to_string());
  return next;
}

}  // namespace

std::optional<std::size_t> GroundMDP::find(const FluentTerm& d) const {
  auto it = index.find(d.to_string());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<GroundApplication> ground_applications(const Model& m, const FluentTerm& d) {
  std::vector<GroundApplication> out;
  MatchScope scope;
  for (const auto& a : m.actions) {
    if (a.terminal) continue;
    std::set<std::string> seen;
    for_each_embedding(a.pre, d, scope, [&](const Substitution& theta, const std::vector<char>&) {
      if (!negatives_hold(d, a.pre_negatives, theta)) return true;
      if (!seen.insert(theta.to_string()).second) return true;
      GroundApplication g;
      g.label = label_of(a, theta);
      g.cost = a.cost;
      FluentTerm pre = theta.apply(a.pre);
      for (const auto& c : a.choices) g.outcomes.emplace_back(c.probability, ground_successor(d, pre, theta.apply(c.effect)));
      out.push_back(std::move(g));
      return true;
    });
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.label < y.label; });
  return out;
}

GroundMDP ground_problem(const Model& m, std::size_t state_cap) {
  if (!m.ground_init) throw Error(ErrorKind::InvalidArgument, "the initial state is not ground");
  return ground_problem(m, *m.ground_init, state_cap);
}

GroundMDP ground_problem(const Model& m, const FluentTerm& start, std::size_t state_cap) {
  GroundMDP g;
  g.goal_reward = m.goal_reward;
  g.gamma = m.gamma;
  g.done_cost = terminal_cost(m);
  auto intern_state = [&](const FluentTerm& d) {
    auto [it, fresh] = g.index.emplace(d.to_string(), g.states.size());
    if (fresh) {
      if (g.states.size() >= state_cap)
        throw Error(ErrorKind::UniverseTooLarge, "more than " + std::to_string(state_cap) + " reachable ground states");
      g.states.push_back(d);
      g.goal.push_back(m.is_goal(d) ? 1 : 0);
      g.actions.emplace_back();
    }
    return it->second;
  };
  g.initial = intern_state(start);
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (g.goal[i]) continue;
    FluentTerm d = g.states[i];
    std::vector<GroundAction> acts;
    for (auto& app : ground_applications(m, d)) {
      GroundAction ga;
      ga.label = std::move(app.label);
      ga.cost = app.cost;
      for (auto& [p, next] : app.outcomes) ga.outcomes.push_back({p, intern_state(next)});
      acts.push_back(std::move(ga));
    }
    g.actions[i] = std::move(acts);
  }
  return g;
}

namespace {

double bellman(const GroundMDP& m, const std::vector<double>& v, std::size_t s) {
  if (m.goal[s]) return m.goal_reward;
  double best = -m.done_cost;
  for (const auto& a : m.actions[s]) {
    double q = 0;
    for (const auto& o : a.outcomes) q += o.probability * v[o.next];
    best = std::max(best, -a.cost + m.gamma * q);
  }
  return best;
}

}  // namespace

std::vector<double> ground_value_iteration(const GroundMDP& m, double epsilon, double initial_value, int* iterations,
                                           int max_iterations) {
  std::vector<double> v(m.states.size(), initial_value), next(v.size());
  for (int it = 1; it <= max_iterations; ++it) {
    double r = 0;
    for (std::size_t s = 0; s < v.size(); ++s) {
      next[s] = bellman(m, v, s);
      r = std::max(r, std::fabs(next[s] - v[s]));
    }
    v.swap(next);
    if (iterations) *iterations = it;
    if (r <= epsilon) return v;
  }
  throw Error(ErrorKind::IterationCap, "ground value iteration did not converge");
}

std::vector<double> ground_value_iterates(const GroundMDP& m, double initial_value, int sweeps) {
  std::vector<double> v(m.states.size(), initial_value), next(v.size());
  for (int k = 0; k < sweeps; ++k) {
    for (std::size_t s = 0; s < v.size(); ++s) next[s] = bellman(m, v, s);
    v.swap(next);
  }
  return v;
}

SimulationStats simulate_policy(const Model& m, const Policy& pi, const FluentTerm& start, const SimulationConfig& cfg) {
  SimulationStats st;
  st.seed = cfg.seed;
  st.runs = cfg.runs;
  double done_cost = terminal_cost(m);
  int goals = 0;
  for (int run = 0; run < cfg.runs; ++run) {
    std::mt19937_64 rng(splitmix64(cfg.seed + static_cast<std::uint64_t>(run)));
    FluentTerm d = start;
    double total = 0, discount = 1;
    for (int t = 0; t < cfg.horizon; ++t) {
      if (m.is_goal(d)) {
        total += discount * m.goal_reward;
        ++goals;
        break;
      }
      Substitution emb;
      const PolicyEntry* e = pi.lookup_ground(d, &emb);
      const ActionSchema* a = e ? m.find_action(e->action) : nullptr;
      Substitution theta;
      bool usable = a && !a->terminal;
      if (usable) {
        for (const auto& [v, term] : e->app.theta.bindings()) theta.bind(v, emb.apply(term));
        FluentTerm pre = theta.apply(a->pre);
        usable = pre.is_ground() && has_embedding(pre, d, MatchScope{}) && negatives_hold(d, a->pre_negatives, theta);
      }
      if (!usable) {
        total -= discount * done_cost;
        break;
      }
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      std::size_t pick = a->choices.size() - 1;
      double acc = 0;
      for (std::size_t j = 0; j < a->choices.size(); ++j) {
        acc += a->choices[j].probability;
        if (u < acc) {
          pick = j;
          break;
        }
      }
      total -= discount * a->cost;
      d = ground_successor(d, theta.apply(a->pre), theta.apply(a->choices[pick].effect));
      discount *= m.gamma;
    }
    st.totals.push_back(total);
  }
  if (!st.totals.empty()) {
    double sum = 0;
    for (double x : st.totals) sum += x;
    st.mean = sum / static_cast<double>(st.totals.size());
    st.min = *std::min_element(st.totals.begin(), st.totals.end());
    st.max = *std::max_element(st.totals.begin(), st.totals.end());
    double ss = 0;
    for (double x : st.totals) ss += (x - st.mean) * (x - st.mean);
    st.stddev = st.totals.size() > 1 ? std::sqrt(ss / static_cast<double>(st.totals.size() - 1)) : 0.0;
    st.std_error = st.stddev / std::sqrt(static_cast<double>(st.totals.size()));
    st.goal_rate = static_cast<double>(goals) / static_cast<double>(st.totals.size());
  }
  return st;
}

std::string format_stats(const SimulationStats& s) {
  std::ostringstream o;
  o.precision(10);
  o << "rng=" << s.rng << " seed=" << s.seed << " runs=" << s.runs << " mean=" << s.mean << " min=" << s.min
    << " max=" << s.max << " stddev=" << s.stddev << " stderr=" << s.std_error << " goal_rate=" << s.goal_rate;
  return o.str();
}

}  // namespace pfc
