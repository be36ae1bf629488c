#include "pfc/run.hpp"

#include <chrono>
#include <cstdio>
#include <set>

#include "pfc/error.hpp"

namespace pfc {

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double sum_norm(const std::vector<TelemetryRow>& rows) {
  double s = 0;
  for (const auto& r : rows) s += r.norm_seconds;
  return s;
}

const char* mode_name(SolveMode m) {
  switch (m) {
    case SolveMode::Folao: return "folao";
    case SolveMode::FoviOnly: return "fovi-only";
    case SolveMode::TrivialHeuristic: return "trivial-heuristic";
  }
  return "?";
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::optional<std::uint64_t> colour_goal_groundings(const ProblemSpec& spec) {
  if (spec.colors.empty()) return std::nullopt;
  std::set<Symbol> colour_names;
  for (const auto& [c, members] : spec.colors) colour_names.insert(intern(c));
  std::size_t coloured = 0;
  for (const auto& f : spec.goal.positive())
    if (colour_names.count(f.name)) ++coloured;
  if (coloured != spec.objects.size()) return std::nullopt;
  std::uint64_t n = 1;
  for (const auto& [c, members] : spec.colors)
    for (std::uint64_t k = 2; k <= members.size(); ++k) n *= k;
  return n;
}

std::string render_report(const RunReport& r) {
  std::string o;
  auto line = [&](const char* k, const std::string& v) { o += std::string(k) + "=" + v + "\n"; };
  line("problem", r.problem);
  line("mode", r.mode);
  line("blocks", std::to_string(r.blocks));
  line("colors", std::to_string(r.colors));
  line("total_av_reward", r.total_av_reward ? fmt(*r.total_av_reward) : "n/a");
  line("total_seconds", fmt(r.total_seconds));
  line("heuristic_seconds", fmt(r.heuristic_seconds));
  line("nas", std::to_string(r.nas));
  line("ngs", r.ngs ? std::to_string(*r.ngs) : "n/a");
  line("goal_groundings", r.goal_groundings ? std::to_string(*r.goal_groundings) : "n/a");
  line("norm_pct", fmt(r.norm_pct));
  line("converged", r.converged ? "true" : "false");
  line("iterations", std::to_string(r.iterations));
  line("residual", fmt(r.residual));
  line("value_init", fmt(r.value_init));
  line("heuristic_iterations", std::to_string(r.heuristic_iterations));
  line("epsilon", fmt(r.epsilon));
  line("gamma", fmt(r.gamma));
  line("seed", std::to_string(r.seed));
  return o;
}

SolveOutcome run_solve(const ProblemSpec& spec, const Model& model, const SolveOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg;
  cfg.gamma = opts.gamma.value_or(model.gamma);
  cfg.epsilon = opts.epsilon.value_or(spec.epsilon);
  cfg.heuristic_iterations = opts.mode == SolveMode::TrivialHeuristic ? 0 : opts.heuristic_iterations;
  cfg.max_outer = opts.max_outer;
  cfg.inner_sweeps = opts.inner_sweeps;
  cfg.max_iterations = opts.max_iterations;
  cfg.time_limit = opts.time_limit;
  if (cfg.gamma <= 0 || cfg.gamma > 1) throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1]");
  if (cfg.epsilon <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (cfg.heuristic_iterations < 0) throw Error(ErrorKind::InvalidArgument, "heuristic iterations must be >= 0");

  Model m = model;
  m.gamma = cfg.gamma;
  TransitionCache tc(m);
  SolveOutcome out;
  RunReport& rep = out.report;
  rep.problem = spec.problem_name;
  rep.mode = mode_name(opts.mode);
  rep.blocks = spec.objects.size();
  rep.colors = spec.colors.size();
  rep.heuristic_iterations = opts.mode == SolveMode::FoviOnly ? 0 : cfg.heuristic_iterations;
  rep.epsilon = cfg.epsilon;
  rep.gamma = cfg.gamma;
  rep.seed = opts.seed;
  double norm_seconds = 0;

  if (opts.mode == SolveMode::FoviOnly) {
    SweepResult r = fovi_sweeps(m, tc, cfg, 0, true);
    std::vector<AbstractState> probe = r.states;
    probe.push_back(m.init);
    out.policy = extract_policy(r.value, probe, tc, cfg.gamma);
    out.value = std::move(r.value);
    out.telemetry = telemetry_csv(r.telemetry, "fovi");
    norm_seconds = sum_norm(r.telemetry);
    rep.nas = r.states.size();
    rep.converged = r.converged;
    rep.iterations = r.sweeps;
    rep.residual = r.residual;
  } else {
    std::vector<TelemetryRow> hrows;
    auto th = std::chrono::steady_clock::now();
    ValueFunction h = make_heuristic(m, cfg.heuristic_iterations, tc, cfg.gamma, &hrows);
    rep.heuristic_seconds = since(th);
    SolveResult r = solve(m, cfg, h, tc);
    out.policy = std::move(r.policy);
    out.value = std::move(r.value);
    out.progress = std::move(r.progress);
    out.telemetry = telemetry_csv(hrows, "heuristic") + telemetry_csv(r.telemetry, "search", false);
    norm_seconds = sum_norm(hrows) + sum_norm(r.telemetry);
    rep.nas = r.e_size;
    rep.converged = r.converged;
    rep.iterations = r.iterations;
    rep.residual = r.residual;
  }
  rep.value_init = evaluate(out.value, m.init);
  rep.total_seconds = since(t0);
  rep.norm_pct = rep.total_seconds > 0 ? 100.0 * norm_seconds / rep.total_seconds : 0.0;
  rep.goal_groundings = colour_goal_groundings(spec);
  if (m.ground_init) {
    try {
      rep.ngs = ground_problem(m, opts.ground_state_cap).states.size();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UniverseTooLarge) throw;
    }
    if (opts.eval_runs > 0) {
      SimulationConfig sc;
      sc.runs = opts.eval_runs;
      sc.seed = opts.seed;
      rep.total_av_reward = simulate_policy(m, out.policy, *m.ground_init, sc).mean;
    }
  }
  return out;
}

}  // namespace pfc
