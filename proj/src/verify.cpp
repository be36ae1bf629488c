#include "pfc/verify.hpp"

#include <algorithm>
#include <cstdio>

#include "pfc/error.hpp"
#include "pfc/folao.hpp"
#include "pfc/ground.hpp"

namespace pfc {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Lazily built pieces shared by the checks.
struct Workbench {
  const Model& model;
  const VerifyOptions& opts;
  TransitionCache tc;
  std::optional<GroundMDP> ground;
  std::vector<double> v_star;

  Workbench(const Model& m, const VerifyOptions& o) : model(m), opts(o), tc(m) {}

  const GroundMDP& mdp() {
    if (!ground) {
      ground = ground_problem(model, opts.ground_state_cap);
      v_star = ground_value_iteration(*ground, 1e-9);
    }
    return *ground;
  }
};

CheckResult check_validation(const ProblemSpec& spec) {
  try {
    validate_problem(spec);
    return {"model-validation", true, "ok"};
  } catch (const Error& e) {
    return {"model-validation", false, e.what()};
  }
}

CheckResult check_subsumption(Workbench& wb) {
  const GroundMDP& g = wb.mdp();
  ValueFunction h = make_heuristic(wb.model, std::min(wb.opts.heuristic_iterations, 3), wb.tc, wb.model.gamma);
  std::vector<AbstractState> zs;
  for (const auto& e : h.entries()) zs.push_back(e.state);
  for (const auto& z : std::vector<AbstractState>(zs))
    for (const auto& o : wb.tc.info(z).options) zs.insert(zs.end(), o.outcomes.begin(), o.outcomes.end());
  zs.push_back(wb.model.goal);
  std::size_t pairs = 0;
  for (const auto& a : zs)
    for (const auto& b : zs) {
      if (!is_subsumed(a, b)) continue;
      ++pairs;
      for (const auto& d : g.states)
        if (satisfies(d, a) && !satisfies(d, b))
          return {"subsumption-soundness", false,
                  a.to_string() + " is subsumed by " + b.to_string() + " but " + d.to_string() + " separates them"};
    }
  return {"subsumption-soundness", true, std::to_string(pairs) + " subsuming pairs checked on " +
                                             std::to_string(g.states.size()) + " ground states"};
}

CheckResult check_normalization(Workbench& wb) {
  const GroundMDP& g = wb.mdp();
  ValueFunction h = make_heuristic(wb.model, std::min(wb.opts.heuristic_iterations, 3), wb.tc, wb.model.gamma);
  std::vector<ValueEntry> raw;
  for (const auto& e : h.entries()) {
    if (e.state.is_universal()) continue;
    raw.push_back({e.state, backup_state(e.state, wb.tc, h, wb.model.gamma).value});
    for (const auto& o : wb.tc.info(e.state).options)
      for (const auto& s : o.outcomes) raw.push_back({s, backup_state(s, wb.tc, h, wb.model.gamma).value});
  }
  raw.push_back({AbstractState(), wb.model.goal_reward});
  ValueFunction before(raw);
  ValueFunction after = normalize(before);
  ValueFunction twice = normalize(after);
  if (twice.size() != after.size())
    return {"normalization-semantics", false, "normalize is not idempotent"};
  for (const auto& d : g.states) {
    double x = evaluate_ground(before, d), y = evaluate_ground(after, d);
    if (x != y)
      return {"normalization-semantics", false, d.to_string() + ": " + fmt(x) + " before, " + fmt(y) + " after"};
  }
  return {"normalization-semantics", true,
          std::to_string(before.size()) + " -> " + std::to_string(after.size()) + " entries, " +
              std::to_string(g.states.size()) + " ground states agree"};
}

CheckResult check_admissibility(Workbench& wb) {
  const GroundMDP& g = wb.mdp();
  SolverConfig cfg;
  cfg.gamma = wb.model.gamma;
  std::vector<double> prev;
  for (int k = 0; k <= wb.opts.heuristic_iterations; ++k) {
    SweepResult r = fovi_sweeps(wb.model, wb.tc, cfg, k, false);
    std::vector<double> cur(g.states.size());
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      cur[i] = evaluate_ground(r.value, g.states[i]);
      if (cur[i] < wb.v_star[i])
        return {"heuristic-admissibility", false,
                "after " + std::to_string(k) + " sweeps " + g.states[i].to_string() + " has h=" + fmt(cur[i]) +
                    " < V*=" + fmt(wb.v_star[i])};
      if (!prev.empty() && cur[i] > prev[i])
        return {"heuristic-admissibility", false,
                "sweep " + std::to_string(k) + " raised " + g.states[i].to_string() + " from " + fmt(prev[i]) +
                    " to " + fmt(cur[i])};
    }
    prev = std::move(cur);
  }
  return {"heuristic-admissibility", true,
          "h >= V* and nonincreasing for 0.." + std::to_string(wb.opts.heuristic_iterations) + " sweeps"};
}

CheckResult check_value_agreement(Workbench& wb) {
  const GroundMDP& g = wb.mdp();
  SolverConfig cfg;
  cfg.gamma = wb.model.gamma;
  ValueFunction h = make_heuristic(wb.model, wb.opts.heuristic_iterations, wb.tc, cfg.gamma);
  SolveResult r = solve(wb.model, cfg, h, wb.tc);
  double lifted = evaluate(r.value, wb.model.init);
  double exact = wb.v_star[g.initial];
  bool ok = r.converged && std::abs(lifted - exact) <= wb.opts.tolerance;
  return {"value-agreement", ok,
          "V(z0)=" + fmt(lifted) + " V*(z0)=" + fmt(exact) + (r.converged ? "" : " (not converged)")};
}

}  // namespace

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names{"model-validation", "subsumption-soundness", "normalization-semantics",
                                              "heuristic-admissibility", "value-agreement"};
  return names;
}

namespace {

// Full names, or the name with its first or last hyphenated word dropped.
std::string resolve_check(const std::string& w) {
  for (const auto& n : verify_check_names()) {
    auto dash = n.find('-');
    if (w == n || w == n.substr(0, dash) || w == n.substr(dash + 1)) return n;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown check '" + w + "'");
}

}  // namespace

std::vector<CheckResult> run_verify(const ProblemSpec& spec, const VerifyOptions& opts) {
  std::vector<std::string> wanted;
  for (const auto& w : opts.checks.empty() ? verify_check_names() : opts.checks) wanted.push_back(resolve_check(w));
  Model m = build_model(spec, {opts.lift});
  Workbench wb(m, opts);
  std::vector<CheckResult> out;
  for (const auto& name : verify_check_names()) {
    if (std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    try {
      if (name == "model-validation") out.push_back(check_validation(spec));
      else if (name == "subsumption-soundness") out.push_back(check_subsumption(wb));
      else if (name == "normalization-semantics") out.push_back(check_normalization(wb));
      else if (name == "heuristic-admissibility") out.push_back(check_admissibility(wb));
      else out.push_back(check_value_agreement(wb));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::UniverseTooLarge) throw;
      out.push_back({name, false, e.what()});
    }
  }
  return out;
}

std::string render_checks(const std::vector<CheckResult>& results) {
  std::string o;
  for (const auto& r : results) o += (r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
  return o;
}

}  // namespace pfc
