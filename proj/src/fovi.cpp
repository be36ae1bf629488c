#include "pfc/fovi.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "pfc/error.hpp"

namespace pfc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const StateInfo& TransitionCache::info(const AbstractState& z) {
  auto it = cache_.find(z.key());
  if (it != cache_.end()) return *it->second;
  auto si = std::make_unique<StateInfo>();
  si->goal = model_.is_goal(z);
  for (const auto& a : model_.actions) {
    if (si->goal && !a.terminal) continue;
    for (auto& app : forward_applicable(z, a)) {
      Option o;
      o.action = &a;
      for (const auto& c : a.choices) o.outcomes.push_back(successor(z, a, c, app));
      o.app = std::move(app);
      si->options.push_back(std::move(o));
    }
  }
  const StateInfo& ref = *si;
  cache_.emplace(z.key(), std::move(si));
  return ref;
}

double q_value(const AbstractState&, const StateInfo& info, const Option& o, const ValueFunction& v, double gamma,
               double goal_reward) {
  double r = info.goal ? goal_reward : 0.0;
  double q = r - o.action->cost;
  if (o.action->terminal) return q;
  double future = 0;
  for (std::size_t j = 0; j < o.outcomes.size(); ++j)
    future += o.action->choices[j].probability * evaluate(v, o.outcomes[j]);
  return q + gamma * future;
}

StateBackup backup_state(const AbstractState& z, TransitionCache& tc, const ValueFunction& v_prev, double gamma) {
  const StateInfo& info = tc.info(z);
  StateBackup b;
  if (info.goal) {
    b.value = tc.model().goal_reward;
    b.option = 0;
    return b;
  }
  if (info.options.empty())
    throw Error(ErrorKind::NoApplicableAction, "no action applicable in " + z.to_string());
  bool first = true;
  for (std::size_t i = 0; i < info.options.size(); ++i) {
    double q = q_value(z, info, info.options[i], v_prev, gamma, tc.model().goal_reward);
    if (first || q > b.value) {
      b.value = q;
      b.option = i;
      first = false;
    }
  }
  return b;
}

ValueFunction backup(const std::vector<AbstractState>& E, TransitionCache& tc, double gamma, const ValueFunction& v_prev) {
  std::vector<ValueEntry> out;
  for (const auto& z : E) out.push_back({z, backup_state(z, tc, v_prev, gamma).value});
  return ValueFunction(std::move(out));
}

Policy extract_policy(const ValueFunction& v, const std::vector<AbstractState>& E, TransitionCache& tc, double gamma) {
  Policy pi;
  for (const auto& z : E) {
    const StateInfo& info = tc.info(z);
    if (info.options.empty()) continue;
    std::size_t best = 0;
    if (!info.goal) best = backup_state(z, tc, v, gamma).option;
    const Option& o = info.options[best];
    pi.set(z, o.action->name, o.app);
  }
  return pi;
}

std::string telemetry_csv(const std::vector<TelemetryRow>& rows, const std::string& phase, bool header) {
  std::ostringstream o;
  if (header) o << "phase,iteration,s_update,s_norm,update_seconds,norm_seconds\n";
  for (const auto& r : rows)
    o << phase << ',' << r.iteration << ',' << r.s_update << ',' << r.s_norm << ',' << r.update_seconds << ',' << r.norm_seconds << '\n';
  return o.str();
}

SweepResult fovi_sweeps(const Model& m, TransitionCache& tc, const SolverConfig& cfg, int sweeps, bool until_converged) {
  SweepResult res;
  res.value = ValueFunction({{AbstractState(), m.goal_reward}});
  std::vector<AbstractState> S{m.init};
  int limit = until_converged ? cfg.max_iterations : sweeps;
  for (int j = 0; j < limit; ++j) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<AbstractState> U = S;
    std::unordered_set<std::string> seen;
    for (const auto& z : S) seen.insert(z.key());
    for (const auto& z : S)
      for (const auto& o : tc.info(z).options)
        for (const auto& s : o.outcomes)
          if (seen.insert(s.key()).second) U.push_back(s);
    std::vector<ValueEntry> entries;
    for (const auto& z : U) entries.push_back({z, backup_state(z, tc, res.value, cfg.gamma).value});
    std::size_t updated = entries.size();
    for (std::size_t u : res.value.universal_entries()) entries.push_back(res.value.entries()[u]);
    double t_update = seconds_since(t0);
    auto t1 = std::chrono::steady_clock::now();
    ValueFunction next = normalize(ValueFunction(std::move(entries)));
    double t_norm = seconds_since(t1);

    std::vector<AbstractState> S_next;
    for (const auto& e : next.entries())
      if (!e.state.is_universal()) S_next.push_back(e.state);
    res.telemetry.push_back({j, updated, S_next.size(), t_update, t_norm});

    double r = 0;
    bool grew = false;
    for (const auto& z : S_next) {
      r = std::max(r, std::fabs(evaluate(next, z) - evaluate(res.value, z)));
      if (until_converged && !grew && !res.value.find_equivalent(z)) grew = true;
    }
    res.value = std::move(next);
    S = std::move(S_next);
    res.residual = r;
    res.sweeps = j + 1;
    if (until_converged && !grew && r <= cfg.epsilon) {
      res.converged = true;
      break;
    }
  }
  if (!until_converged) res.converged = true;
  res.states = std::move(S);
  return res;
}

ValueFunction make_heuristic(const Model& m, int iterations, TransitionCache& tc, double gamma,
                             std::vector<TelemetryRow>* telemetry) {
  SolverConfig cfg;
  cfg.gamma = gamma;
  SweepResult r = fovi_sweeps(m, tc, cfg, iterations, false);
  if (telemetry) *telemetry = r.telemetry;
  return r.value;
}

ValueFunction make_heuristic(const Model& m, int iterations) {
  TransitionCache tc(m);
  return make_heuristic(m, iterations, tc, m.gamma);
}

}  // namespace pfc
