// One pass/fail line per acceptance criterion; nonzero exit if any fails.
// --record rewrites the golden files instead of comparing against them.
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "properties.hpp"
#include "pfc/action.hpp"
#include "pfc/blocksworld.hpp"
#include "pfc/error.hpp"
#include "pfc/folao.hpp"
#include "pfc/fovi.hpp"
#include "pfc/ground.hpp"
#include "pfc/model.hpp"
#include "pfc/run.hpp"

using namespace pfc;

namespace {

bool record = false;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fixture(const std::string& name) { return std::string(PFC_FIXTURES) + "/" + name; }
std::string golden(const std::string& name) { return std::string(PFC_GOLDEN) + "/" + name; }

// Compares text against a golden file, or writes it when recording.
bool matches_golden(const std::string& name, const std::string& text, Outcome& out) {
  if (record) {
    std::ofstream(golden(name), std::ios::binary) << text;
    return true;
  }
  std::ifstream in(golden(name), std::ios::binary);
  if (!in) {
    out.require(false, "missing golden " + name);
    return false;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  bool same = ss.str() == text;
  out.require(same, "differs from golden " + name);
  return same;
}

ProblemSpec bw(int blocks, const char* colours, std::uint64_t seed) {
  BWGeneratorConfig cfg;
  cfg.blocks = blocks;
  cfg.colors = parse_color_spec(colours);
  cfg.seed = seed;
  return generate_colored_bw(cfg);
}

SolverConfig solver() {
  SolverConfig c;
  c.gamma = 1.0;
  c.epsilon = 1e-4;
  return c;
}

Fluent on(const char* x, const char* y) { return make_fluent("on", {x, y}); }

Outcome worked_examples() {
  Outcome out;
  ProblemSpec spec = load_problem(fixture("pickup.pfc"));
  const ActionSchema* pickup = nullptr;
  for (const auto& a : spec.actions)
    if (a.name == "pickup") pickup = &a;
  AbstractState z(FluentTerm{on("b", "table"), on("X1", "b"), make_fluent("e", {})}, {FluentTerm{on("X2", "X1")}});
  const Applicability* hit = nullptr;
  std::vector<Applicability> apps = forward_applicable(z, *pickup);
  for (const auto& app : apps) {
    const FluentTerm* u1 = app.theta.lookup_extension(intern("U1"));
    const FluentTerm* u2 = app.sigma.lookup_extension(intern("U2"));
    if (app.theta.apply(Term::var("X")) == Term::var("X1") && app.theta.apply(Term::var("Y")) == Term::constant("b") &&
        u1 && *u1 == FluentTerm{on("b", "table")} && app.sigma.apply(Term::var("X2")) == Term::var("W") && u2 &&
        u2->empty())
      hit = &app;
  }
  out.require(hit, "pickup substitutions not found");
  if (hit) {
    AbstractState next = successor(z, *pickup, pickup->choices[0], *hit);
    AbstractState expected(FluentTerm{make_fluent("holding", {"X1"}), on("b", "table")}, {FluentTerm{on("X1", "b")}});
    out.require(equivalent(next, expected), "pickup successor " + next.to_string());
  }

  AbstractState z1(FluentTerm{on("X1", "a"), on("a", "table")}, {FluentTerm{make_fluent("red", {"Y1"})}});
  AbstractState z2(FluentTerm{on("X2", "a")}, {FluentTerm{make_fluent("red", {"X2"})}});
  auto w = subsumes(z1, z2);
  out.require(w.has_value(), "no subsumption witness");
  if (w) {
    const FluentTerm* u1 = w->theta.lookup_extension(intern("U1"));
    out.require(w->theta.apply(Term::var("X2")) == Term::var("X1"), "theta of X2");
    out.require(u1 && *u1 == FluentTerm{on("a", "table")}, "theta extension");
    bool sigma = w->sigma.size() == 1 && w->sigma[0].bindings().size() == 1 &&
                 w->sigma[0].bindings()[0].second == Term::var("X1") && w->sigma[0].lookup_extension(intern("U2")) &&
                 w->sigma[0].lookup_extension(intern("U2"))->empty();
    out.require(sigma, "sigma of the negative");
  }
  out.require(!subsumes(z2, z1), "reverse subsumption");
  out.detail = out.pass ? std::to_string(apps.size()) + " applicabilities" : out.detail;
  return out;
}

Outcome grounding_counts() {
  Outcome out;
  auto towers = [](const ProblemSpec& spec) {
    Model m = build_model(spec);
    std::uint64_t n = 0;
    for (const auto& d : oracle::all_towers(spec.objects, spec.colors)) n += m.is_goal(d);
    return n;
  };
  std::uint64_t mixed = towers(bw(8, "4:red,3:green,1:blue", 1));
  std::uint64_t mono = towers(bw(8, "8:red", 1));
  out.require(mixed == 144, "4,3,1 colouring gives " + std::to_string(mixed));
  out.require(mono == 40320, "one colour gives " + std::to_string(mono));
  out.detail = std::to_string(mixed) + " and " + std::to_string(mono);
  return out;
}

Outcome value_agreement() {
  Outcome out;
  double worst = 0;
  for (const auto& spec : props::small_blocksworlds()) {
    Model m = build_model(spec);
    oracle::Mdp g = oracle::explore(m, *m.ground_init);
    double vstar = oracle::optimal_values(g, 1e-9)[g.initial];
    TransitionCache tc(m);
    SolveResult r = solve(m, solver(), make_heuristic(m, 20, tc, 1.0), tc);
    double gap = std::fabs(evaluate(r.value, m.init) - vstar);
    worst = std::max(worst, gap);
    out.require(r.converged, spec.problem_name + " did not converge");
    out.require(gap <= 1e-3, spec.problem_name + " off by " + std::to_string(gap));
  }
  if (out.pass) out.detail = "largest gap " + std::to_string(worst);
  return out;
}

Outcome admissibility() {
  Outcome out;
  long checked = 0;
  for (const auto& spec : props::small_blocksworlds()) {
    Model m = build_model(spec);
    oracle::Mdp g = oracle::explore(m, *m.ground_init);
    std::vector<double> vstar = oracle::optimal_values(g, 1e-9);
    std::vector<ValueFunction> hs;
    for (int k : {0, 5, 20}) hs.push_back(make_heuristic(m, k));
    for (std::size_t s = 0; s < g.states.size(); ++s) {
      double prev = INFINITY;
      for (std::size_t k = 0; k < hs.size(); ++k) {
        double h = evaluate_ground(hs[k], g.states[s]);
        out.require(h >= vstar[s], spec.problem_name + " underestimates at " + g.states[s].to_string());
        out.require(h <= prev, spec.problem_name + " increases at " + g.states[s].to_string());
        prev = h;
        ++checked;
      }
    }
  }
  if (out.pass) out.detail = std::to_string(checked) + " state-heuristic pairs";
  return out;
}

Outcome normalization() {
  Outcome out;
  props::Report r = props::normalization_semantics(300, 104);
  out.require(r.ok(), r.summary());

  Model m = build_model(bw(10, "10:red", 1), {true});
  TransitionCache tc(m);
  SweepResult sw = fovi_sweeps(m, tc, solver(), 10, false);
  std::string csv = "iteration,s_update,s_norm\n";
  for (const auto& row : sw.telemetry) {
    out.require(row.s_norm < row.s_update, "no shrink on sweep " + std::to_string(row.iteration));
    csv += std::to_string(row.iteration) + "," + std::to_string(row.s_update) + "," + std::to_string(row.s_norm) + "\n";
  }
  out.require(sw.telemetry.size() == 10, "expected ten sweeps");
  matches_golden("shrinkage-bw10.csv", csv, out);
  if (out.pass && !sw.telemetry.empty())
    out.detail = std::to_string(r.cases) + " value functions; sweep 1 " + std::to_string(sw.telemetry[1].s_update) +
                 " -> " + std::to_string(sw.telemetry[1].s_norm) + ", sweep 9 " +
                 std::to_string(sw.telemetry.back().s_update) + " -> " + std::to_string(sw.telemetry.back().s_norm);
  return out;
}

Outcome simulation() {
  Outcome out;
  Model m = build_model(load_problem(fixture("bw3.pfc")));
  oracle::Mdp g = oracle::explore(m, *m.ground_init);
  double vstar = oracle::optimal_values(g, 1e-9)[g.initial];
  TransitionCache tc(m);
  SolveResult r = solve(m, solver(), make_heuristic(m, 20, tc, 1.0), tc);
  out.require(r.converged, "three-block solve did not converge");
  SimulationStats many = simulate_policy(m, r.policy, *m.ground_init, SimulationConfig{10000, 1000, 1});
  double z = std::fabs(many.mean - vstar) / many.std_error;
  out.require(std::fabs(many.mean - vstar) <= 3 * many.std_error,
              "mean " + std::to_string(many.mean) + " vs " + std::to_string(vstar) + " is " + std::to_string(z) + " SE");
  SimulationStats thirty = simulate_policy(m, r.policy, *m.ground_init, SimulationConfig{30, 1000, 7});
  matches_golden("competition-bw3-seed7.txt", format_stats(thirty), out);
  if (out.pass)
    out.detail = "mean " + std::to_string(many.mean) + " vs V* " + std::to_string(vstar) + " (" + std::to_string(z) + " SE)";
  return out;
}

Outcome properties() {
  Outcome out;
  std::vector<props::Report> rs{props::matching_completeness(1000, 101), props::subsumption_soundness(1000, 102),
                                props::successor_agreement(), props::parser_round_trip(1000, 103)};
  long cases = 0;
  for (const auto& r : rs) {
    out.require(r.ok(), r.summary());
    cases += r.cases;
  }
  out.require(rs[0].cases >= 1000 && rs[1].cases >= 1000 && rs[3].cases >= 1000, "too few cases");
  if (out.pass) out.detail = std::to_string(cases) + " cases";
  return out;
}

Outcome scaling() {
  Outcome out;
  ProblemSpec spec = bw(5, "2:red,2:green,1:blue", 1);
  Model m = build_model(spec, {true});
  SolveOptions opts;
  opts.eval_runs = 0;
  opts.epsilon = 1e-4;
  opts.gamma = 1.0;
  SolveOutcome folao = run_solve(spec, m, opts);
  opts.mode = SolveMode::FoviOnly;
  SolveOutcome fovi = run_solve(spec, m, opts);
  out.require(folao.report.converged, "FOLAO* hit its cap");
  out.require(fovi.report.converged, "fovi-only hit its cap");
  out.require(folao.report.nas < fovi.report.nas,
              "|E| " + std::to_string(folao.report.nas) + " not below " + std::to_string(fovi.report.nas));
  if (out.pass)
    out.detail = "|E| " + std::to_string(folao.report.nas) + " vs " + std::to_string(fovi.report.nas) +
                 " normalized states after " + std::to_string(folao.report.iterations) + " outer iterations";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) record = record || std::strcmp(argv[i], "--record") == 0;
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "worked examples", 1, worked_examples},
      {2, "grounding counts", 30, grounding_counts},
      {3, "oracle value agreement", 60, value_agreement},
      {4, "heuristic admissibility", 60, admissibility},
      {5, "normalization semantics and shrinkage", 120, normalization},
      {6, "policy quality by simulation", 60, simulation},
      {7, "property suites", 300, properties},
      {8, "scaling smoke", 600, scaling},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.budget) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.budget)) + " s budget)";
    }
    failed += !o.pass;
    std::printf("criterion %d: %s %s [%.2f s] %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
