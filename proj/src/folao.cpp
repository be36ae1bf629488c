#include "pfc/folao.hpp"

#include <chrono>
#include <cstdio>

#include "pfc/error.hpp"

namespace pfc {

namespace {

std::uint64_t bucket_key(const StateProfile& p) {
  std::uint64_t k = p.shape;
  k ^= (static_cast<std::uint64_t>(p.size) << 1) * 0x9e3779b97f4a7c15ULL;
  k ^= (static_cast<std::uint64_t>(p.variables) << 17) + (static_cast<std::uint64_t>(p.constant_slots) << 33);
  return k;
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

std::size_t StateRegistry::add(const AbstractState& z) {
  auto k = by_key_.find(z.key());
  if (k != by_key_.end()) return k->second;
  auto& bucket = by_shape_[bucket_key(z.profile())];
  for (std::size_t id : bucket)
    if (equivalent(states_[id], z)) {
      by_key_.emplace(z.key(), id);
      return id;
    }
  std::size_t id = states_.size();
  states_.push_back(z);
  bucket.push_back(id);
  by_key_.emplace(z.key(), id);
  return id;
}

std::size_t SearchGraph::add(const AbstractState& z) {
  std::size_t id = registry_.add(z);
  if (id >= in_g_.size()) {
    in_g_.resize(id + 1, 0);
    parent_.resize(id + 1, kNone);
  }
  return id;
}

void SearchGraph::seed_g(std::size_t id) {
  if (!in_g_[id]) {
    in_g_[id] = 1;
    ++g_count_;
  }
}

std::vector<std::size_t> SearchGraph::g_members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < in_g_.size(); ++i)
    if (in_g_[i]) out.push_back(i);
  return out;
}

const Option* SearchGraph::policy_option(const Policy& pi, const AbstractState& z) {
  const StateInfo& info = tc_.info(z);
  if (info.options.empty()) return nullptr;
  if (const PolicyEntry* e = pi.find(z)) {
    std::string want = e->app.canonical();
    for (const auto& o : info.options)
      if (o.action->name == e->action && o.app.canonical() == want) return &o;
  }
  return &info.options.front();
}

void SearchGraph::expand(const Policy& pi, const std::vector<std::size_t>& s0, std::vector<std::size_t>& E,
                         std::vector<std::size_t>& F) {
  E.clear();
  F.clear();
  std::vector<char> in_e, in_f, in_to;
  auto mark = [](std::vector<char>& v, std::size_t id) {
    if (id >= v.size()) v.resize(id + 1, 0);
    bool was = v[id];
    v[id] = 1;
    return !was;
  };
  auto has = [](const std::vector<char>& v, std::size_t id) { return id < v.size() && v[id]; };

  std::vector<std::size_t> from;
  std::vector<char> in_from;
  for (std::size_t id : s0)
    if (mark(in_from, id)) from.push_back(id);
  while (!from.empty()) {
    std::vector<std::size_t> to;
    in_to.assign(in_to.size(), 0);
    for (std::size_t z : from) {
      const Option* o = policy_option(pi, registry_.state(z));
      if (!o || o->action->terminal) continue;
      for (const auto& s : o->outcomes) {
        std::size_t before = registry_.size();
        std::size_t id = add(s);
        if (id >= before) parent_[id] = z;
        if (mark(in_to, id)) to.push_back(id);
      }
    }
    for (std::size_t id : to)
      if (!in_g(id) && mark(in_f, id)) F.push_back(id);
    for (std::size_t z : from)
      if (mark(in_e, z)) E.push_back(z);
    from.clear();
    for (std::size_t id : to)
      if (in_g(id) && !has(in_e, id)) from.push_back(id);
  }
  for (std::size_t id : F) {
    if (mark(in_e, id)) E.push_back(id);
    if (!in_g_[id]) {
      in_g_[id] = 1;
      ++g_count_;
    }
  }
}

SearchFrontier policy_expansion(const Policy& pi, const std::vector<AbstractState>& S0,
                                const std::vector<AbstractState>& G, const Model& m, TransitionCache& tc) {
  SearchGraph graph(m, tc);
  std::vector<std::size_t> s0;
  for (const auto& z : G) graph.seed_g(graph.add(z));
  for (const auto& z : S0) s0.push_back(graph.add(z));
  std::vector<std::size_t> E, F;
  graph.expand(pi, s0, E, F);
  SearchFrontier out;
  for (std::size_t id : E) out.E.push_back(graph.state(id));
  for (std::size_t id : F) out.F.push_back(graph.state(id));
  for (std::size_t id : graph.g_members()) out.G.push_back(graph.state(id));
  return out;
}

Policy init_policy(const std::vector<AbstractState>& S0, TransitionCache& tc) {
  Policy pi;
  for (const auto& z : S0) {
    const StateInfo& info = tc.info(z);
    if (info.options.empty()) throw Error(ErrorKind::NoApplicableAction, "no action applicable in " + z.to_string());
    pi.set(z, info.options.front().action->name, info.options.front().app);
  }
  return pi;
}

SolveResult solve(const Model& m, const SolverConfig& cfg, const ValueFunction& h, TransitionCache& tc) {
  auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count(); };
  SolveResult res;
  SearchGraph graph(m, tc);
  std::vector<std::size_t> s0{graph.add(m.init)};
  std::vector<AbstractState> s0_states{graph.state(s0[0])};
  res.policy = init_policy(s0_states, tc);
  ValueFunction V = h;
  std::vector<std::size_t> E, F;
  for (int it = 1; it <= cfg.max_outer; ++it) {
    graph.expand(res.policy, s0, E, F);
    std::vector<AbstractState> Es;
    for (std::size_t id : E) Es.push_back(graph.state(id));
    double r = 0;
    for (int k = 0; k < std::max(1, cfg.inner_sweeps); ++k) {
      auto t0 = std::chrono::steady_clock::now();
      ValueFunction prev = V;
      std::vector<ValueEntry> entries = prev.entries();
      for (const auto& z : Es) {
        double v = backup_state(z, tc, prev, cfg.gamma).value;
        if (auto idx = prev.find_equivalent(z))
          entries[*idx].value = v;
        else
          entries.push_back({z, v});
      }
      std::size_t updated = entries.size();
      auto t1 = std::chrono::steady_clock::now();
      V = normalize(ValueFunction(std::move(entries)));
      double t_norm = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
      res.norm_seconds += t_norm;
      r = residual(V, prev, Es);
      res.telemetry.push_back({static_cast<int>(res.telemetry.size()), updated, V.size(),
                               std::chrono::duration<double>(t1 - t0).count(), t_norm});
    }
    Policy fresh = extract_policy(V, Es, tc, cfg.gamma);
    bool revised = false;
    for (const auto& e : fresh.entries()) {
      const PolicyEntry* before = res.policy.find(e.state);
      if (!before || before->action != e.action || before->app.canonical() != e.app.canonical()) revised = true;
      res.policy.set(e.state, e.action, e.app);
    }
    res.iterations = it;
    res.residual = r;
    res.e_size = E.size();
    res.f_size = F.size();
    res.g_size = graph.g_size();
    res.E = Es;
    char line[160];
    std::snprintf(line, sizeof line, "iteration=%d E=%zu F=%zu G=%zu residual=%.9g", it, E.size(), F.size(),
                  graph.g_size(), r);
    res.progress.emplace_back(line);
    if (F.empty() && !revised && r <= cfg.epsilon) {
      res.converged = true;
      break;
    }
    if (cfg.time_limit > 0 && elapsed() > cfg.time_limit) break;
  }
  res.value = std::move(V);
  return res;
}

}  // namespace pfc
