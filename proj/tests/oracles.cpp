#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

namespace oracle {

using pfc::Symbol;
using pfc::Term;

namespace {

bool bind(Assignment& a, Term pattern, Term target) {
  if (!pattern.is_var()) return pattern == target;
  auto [it, fresh] = a.emplace(pattern.symbol(), target);
  return fresh || it->second == target;
}

bool unify(const Fluent& p, const Fluent& t, Assignment& a) {
  if (p.name != t.name || p.arity != t.arity) return false;
  for (int i = 0; i < p.arity; ++i)
    if (!bind(a, p.args[i], t.args[i])) return false;
  return true;
}

std::string render(const Assignment& a, const FluentTerm& rest) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [v, t] : a) items.emplace_back(pfc::symbol_name(v), t.name());
  std::sort(items.begin(), items.end());
  std::string s;
  for (const auto& [v, t] : items) s += (s.empty() ? "" : ",") + v + "=" + t;
  return s + "|" + rest.to_string();
}

std::vector<Term> terms_of(const FluentTerm& d) {
  std::vector<Term> out;
  for (const auto& f : d)
    for (Term t : f.arguments())
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  return out;
}

// Calls f for every assignment of vars to values; stops when f returns true.
bool any_assignment(const std::vector<Symbol>& vars, const std::vector<Term>& values, Assignment& a,
                    const std::function<bool()>& f, std::size_t i = 0) {
  if (i == vars.size()) return f();
  for (Term t : values) {
    a[vars[i]] = t;
    if (any_assignment(vars, values, a, f, i + 1)) return true;
  }
  a.erase(vars[i]);
  return false;
}

// All fluents of t instantiated by a are distinct members of d.
bool placed(const FluentTerm& t, const Assignment& a, const FluentTerm& d) {
  std::vector<Fluent> seen;
  for (const auto& f : t) {
    Fluent g = instantiate(f, a);
    if (!d.contains(g) || std::find(seen.begin(), seen.end(), g) != seen.end()) return false;
    seen.push_back(g);
  }
  return true;
}

bool negative_present(const FluentTerm& n, const Assignment& fixed, const FluentTerm& d, const std::vector<Term>& values) {
  std::vector<Symbol> locals;
  for (Symbol v : n.variables())
    if (!fixed.count(v)) locals.push_back(v);
  Assignment a = fixed;
  return any_assignment(locals, values, a, [&] { return placed(n, a, d); });
}

double done_cost_of(const pfc::Model& m) {
  for (const auto& a : m.actions)
    if (a.terminal) return a.cost;
  return 0;
}

double backup(const Mdp& g, const std::vector<double>& v, std::size_t s) {
  if (g.goal[s]) return g.reward;
  double best = -g.done_cost;
  for (std::size_t k = 0; k < g.moves[s].size(); ++k) {
    double q = 0;
    for (std::size_t j = 0; j < g.moves[s][k].outcomes.size(); ++j)
      q += g.moves[s][k].outcomes[j].probability * v[g.next[s][k][j]];
    best = std::max(best, -g.moves[s][k].cost + g.gamma * q);
  }
  return best;
}

}  // namespace

Fluent instantiate(const Fluent& f, const Assignment& a) {
  Fluent g = f;
  for (int i = 0; i < g.arity; ++i)
    if (g.args[i].is_var()) {
      auto it = a.find(g.args[i].symbol());
      if (it != a.end()) g.args[i] = it->second;
    }
  return g;
}

std::set<std::string> embeddings(const FluentTerm& pattern, const FluentTerm& target) {
  std::set<std::string> out;
  std::vector<int> image(pattern.size(), -1);
  std::vector<char> used(target.size(), 0);
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == pattern.size()) {
      Assignment a;
      for (std::size_t k = 0; k < pattern.size(); ++k)
        if (!unify(pattern[k], target[image[k]], a)) return;
      std::vector<Fluent> rest;
      for (std::size_t j = 0; j < target.size(); ++j)
        if (!used[j]) rest.push_back(target[j]);
      out.insert(render(a, FluentTerm(rest)));
      return;
    }
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      image[i] = static_cast<int>(j);
      place(i + 1);
      used[j] = 0;
    }
  };
  place(0);
  return out;
}

std::string describe(const pfc::Substitution& s, Symbol extension) {
  Assignment a(s.bindings().begin(), s.bindings().end());
  const FluentTerm* rest = s.lookup_extension(extension);
  return render(a, rest ? *rest : FluentTerm());
}

bool satisfies(const FluentTerm& d, const AbstractState& z) {
  std::vector<Term> values = terms_of(d);
  for (const auto& n : z.negatives())
    for (const auto& f : n)
      for (Term t : f.arguments())
        if (!t.is_var() && std::find(values.begin(), values.end(), t) == values.end()) values.push_back(t);
  Assignment a;
  return any_assignment(z.positive().variables(), values, a, [&] {
    if (!placed(z.positive(), a, d)) return false;
    for (const auto& n : z.negatives())
      if (negative_present(n, a, d, values)) return false;
    return true;
  });
}

std::vector<Assignment> realizations(const FluentTerm& d, const AbstractState& z) {
  std::vector<Term> values = terms_of(d);
  std::vector<Assignment> out;
  Assignment a;
  any_assignment(z.positive().variables(), values, a, [&] {
    if (!placed(z.positive(), a, d)) return false;
    for (const auto& n : z.negatives())
      if (negative_present(n, a, d, values)) return false;
    out.push_back(a);
    return false;
  });
  return out;
}

std::vector<FluentTerm> powerset(const std::vector<Fluent>& fluents) {
  if (fluents.size() > 24) throw std::runtime_error("powerset too large");
  std::vector<FluentTerm> out;
  for (std::uint32_t mask = 0; mask < (1u << fluents.size()); ++mask) {
    std::vector<Fluent> pick;
    for (std::size_t i = 0; i < fluents.size(); ++i)
      if (mask >> i & 1u) pick.push_back(fluents[i]);
    out.emplace_back(std::move(pick));
  }
  return out;
}

std::vector<Move> moves(const std::vector<pfc::ActionSchema>& actions, const FluentTerm& d) {
  std::vector<Move> out;
  std::vector<Term> values = terms_of(d);
  for (const auto& act : actions) {
    if (act.terminal) continue;
    Assignment a;
    any_assignment(act.pre.variables(), values, a, [&] {
      if (!placed(act.pre, a, d)) return false;
      for (const auto& n : act.pre_negatives)
        if (negative_present(n, a, d, values)) return false;
      Move mv;
      mv.label = act.name + "(";
      for (std::size_t i = 0; i < act.params.size(); ++i)
        mv.label += (i ? "," : "") + instantiate(Fluent("x", {act.params[i]}), a).args[0].name();
      mv.label += ")";
      mv.cost = act.cost;
      for (const auto& c : act.choices) {
        std::vector<Fluent> next(d.begin(), d.end());
        for (const auto& f : act.pre) next.erase(std::find(next.begin(), next.end(), instantiate(f, a)));
        for (const auto& f : c.effect) next.push_back(instantiate(f, a));
        FluentTerm t(next);
        if (t.has_duplicates() || !t.is_ground()) throw std::runtime_error("bad ground successor " + t.to_string());
        mv.outcomes.push_back({c.probability, t});
      }
      out.push_back(std::move(mv));
      return false;
    });
  }
  std::stable_sort(out.begin(), out.end(), [](const Move& x, const Move& y) { return x.label < y.label; });
  return out;
}

std::size_t Mdp::at(const FluentTerm& d) const {
  auto it = index.find(d.to_string());
  if (it == index.end()) throw std::runtime_error("state not in the oracle MDP: " + d.to_string());
  return it->second;
}

Mdp explore(const pfc::Model& m, const FluentTerm& start, std::size_t cap) {
  Mdp g;
  g.reward = m.goal_reward;
  g.gamma = m.gamma;
  g.done_cost = done_cost_of(m);
  auto id = [&](const FluentTerm& d) {
    auto [it, fresh] = g.index.emplace(d.to_string(), g.states.size());
    if (fresh) {
      if (g.states.size() >= cap) throw std::runtime_error("oracle state cap exceeded");
      g.states.push_back(d);
    }
    return it->second;
  };
  g.initial = id(start);
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    FluentTerm d = g.states[s];
    bool goal = oracle::satisfies(d, m.goal);
    g.goal.push_back(goal);
    g.moves.emplace_back();
    g.next.emplace_back();
    if (goal) continue;
    for (auto& mv : moves(m.actions, d)) {
      std::vector<std::size_t> nx;
      for (const auto& o : mv.outcomes) nx.push_back(id(o.next));
      g.next[s].push_back(std::move(nx));
      g.moves[s].push_back(std::move(mv));
    }
  }
  return g;
}

std::vector<double> optimal_values(const Mdp& g, double eps) {
  std::vector<double> v(g.states.size(), 0.0), w(v.size());
  for (int it = 0; it < 10000000; ++it) {
    double delta = 0;
    for (std::size_t s = 0; s < v.size(); ++s) {
      w[s] = backup(g, v, s);
      delta = std::max(delta, std::fabs(w[s] - v[s]));
    }
    v.swap(w);
    if (delta < eps) return v;
  }
  throw std::runtime_error("oracle value iteration did not converge");
}

std::vector<double> iterates(const Mdp& g, double initial, int sweeps) {
  std::vector<double> v(g.states.size(), initial), w(v.size());
  for (int k = 0; k < sweeps; ++k) {
    for (std::size_t s = 0; s < v.size(); ++s) w[s] = backup(g, v, s);
    v.swap(w);
  }
  return v;
}

std::vector<double> policy_values(const Mdp& g, const std::vector<int>& choice) {
  const auto n = static_cast<Eigen::Index>(g.states.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    auto u = static_cast<std::size_t>(s);
    if (g.goal[u]) {
      b(s) = g.reward;
    } else if (choice[u] < 0) {
      b(s) = -g.done_cost;
    } else {
      auto k = static_cast<std::size_t>(choice[u]);
      b(s) = -g.moves[u][k].cost;
      for (std::size_t j = 0; j < g.moves[u][k].outcomes.size(); ++j)
        A(s, static_cast<Eigen::Index>(g.next[u][k][j])) -= g.gamma * g.moves[u][k].outcomes[j].probability;
    }
  }
  Eigen::VectorXd x = A.fullPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

std::vector<int> greedy(const Mdp& g, const std::vector<double>& v) {
  std::vector<int> out(g.states.size(), -1);
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    if (g.goal[s]) continue;
    double best = -g.done_cost;
    for (std::size_t k = 0; k < g.moves[s].size(); ++k) {
      double q = 0;
      for (std::size_t j = 0; j < g.moves[s][k].outcomes.size(); ++j)
        q += g.moves[s][k].outcomes[j].probability * v[g.next[s][k][j]];
      q = -g.moves[s][k].cost + g.gamma * q;
      if (q > best + 1e-9) {
        best = q;
        out[s] = static_cast<int>(k);
      }
    }
  }
  return out;
}

std::vector<FluentTerm> all_towers(const std::vector<std::string>& objects,
                                   const std::vector<std::pair<std::string, std::vector<std::string>>>& colours) {
  std::vector<std::string> perm = objects;
  std::sort(perm.begin(), perm.end());
  std::vector<FluentTerm> out;
  do {
    std::vector<Fluent> fs{pfc::make_fluent("e", {})};
    for (std::size_t i = 0; i < perm.size(); ++i)
      fs.push_back(pfc::make_fluent("on", {perm[i], i == 0 ? std::string_view("table") : std::string_view(perm[i - 1])}));
    for (const auto& [c, members] : colours)
      for (const auto& o : members) fs.push_back(pfc::make_fluent(c, {o}));
    out.emplace_back(std::move(fs));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::uint64_t count_colour_sequences(const std::vector<std::pair<std::string, std::vector<std::string>>>& colours,
                                     const std::vector<std::string>& pattern) {
  std::map<std::string, std::string> colour_of;
  std::vector<std::string> objects;
  for (const auto& [c, members] : colours)
    for (const auto& o : members) {
      colour_of[o] = c;
      objects.push_back(o);
    }
  std::sort(objects.begin(), objects.end());
  std::uint64_t n = 0;
  do {
    bool ok = objects.size() == pattern.size();
    for (std::size_t i = 0; ok && i < objects.size(); ++i) ok = colour_of[objects[objects.size() - 1 - i]] == pattern[i];
    n += ok;
  } while (std::next_permutation(objects.begin(), objects.end()));
  return n;
}

}  // namespace oracle
