#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "properties.hpp"
#include "pfc/folao.hpp"

using namespace pfc;

namespace {

Fluent at(const std::string& x) { return make_fluent("at", {x}); }
AbstractState at_state(const std::string& x) { return AbstractState(FluentTerm{at(x)}, {}); }

ActionSchema fork(const std::string& name, const std::string& from, const std::string& left, const std::string& right) {
  ActionSchema a;
  a.name = name;
  a.cost = 1;
  a.pre = FluentTerm{at(from)};
  for (const auto& to : {left, right}) {
    NatureChoice c;
    c.name = name + "-" + to;
    c.probability = 0.5;
    c.effect = FluentTerm{at(to)};
    a.choices.push_back(c);
  }
  return a;
}

ActionSchema done_action() {
  ActionSchema d;
  d.name = "done";
  d.terminal = true;
  return d;
}

// a1: s0 -> s1 | s2, a2: s0 -> s2 | s3, b: s2 -> s4 | s5
Model expansion_toy() {
  return make_model({done_action(), fork("a1", "s0", "s1", "s2"), fork("a2", "s0", "s2", "s3"), fork("b", "s2", "s4", "s5")},
                    at_state("s9"), 500, 1, at_state("s0"));
}

void choose(Policy& pi, TransitionCache& tc, const AbstractState& z, const std::string& action) {
  for (const auto& o : tc.info(z).options)
    if (o.action->name == action) {
      pi.set(z, action, o.app);
      return;
    }
  FAIL("action not applicable: " << action);
}

std::vector<std::string> names(const std::vector<AbstractState>& zs) {
  std::vector<std::string> out;
  for (const auto& z : zs) out.push_back(z.positive()[0].args[0].name());
  std::sort(out.begin(), out.end());
  return out;
}

using Names = std::vector<std::string>;

SolverConfig config() {
  SolverConfig c;
  c.epsilon = 1e-4;
  c.gamma = 1.0;
  return c;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("policy expansion visits the current partial policy and revisits known tips") {
    Model m = expansion_toy();
    TransitionCache tc(m);
    Policy first;
    choose(first, tc, at_state("s0"), "a1");
    SearchFrontier one = policy_expansion(first, {at_state("s0")}, {}, m, tc);
    CHECK(names(one.E) == Names{"s0", "s1", "s2"});
    CHECK(names(one.F) == Names{"s1", "s2"});
    CHECK(names(one.G) == Names{"s1", "s2"});

    Policy second;
    choose(second, tc, at_state("s0"), "a2");
    choose(second, tc, at_state("s2"), "b");
    SearchFrontier two = policy_expansion(second, {at_state("s0")}, one.G, m, tc);
    CHECK(names(two.E) == Names{"s0", "s2", "s3", "s4", "s5"});
    CHECK(names(two.F) == Names{"s3", "s4", "s5"});
  }

  TEST_CASE("an absorbing start has nothing to expand") {
    Model m = make_model({done_action()}, at_state("s0"), 500, 1, at_state("s0"));
    TransitionCache tc(m);
    Policy pi = init_policy({m.init}, tc);
    CHECK(pi.find(m.init)->action == "done");
    SearchFrontier f = policy_expansion(pi, {m.init}, {}, m, tc);
    CHECK(f.F.empty());
    CHECK(names(f.E) == Names{"s0"});
  }

  TEST_CASE("a start that is already a goal converges at once") {
    Model m = make_model({done_action(), fork("a1", "s0", "s1", "s2")}, at_state("s0"), 500, 1, at_state("s0"));
    TransitionCache tc(m);
    SolveResult r = solve(m, config(), make_heuristic(m, 20, tc, 1.0), tc);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.policy.find(m.init)->action == "done");
    CHECK(evaluate(r.value, m.init) == 500);
  }

  TEST_CASE("the initial policy takes the first action in name order") {
    Model m = build_model(props::small_blocksworlds().at(4));
    TransitionCache tc(m);
    CHECK(init_policy({m.init}, tc).find(m.init)->action == "done");
  }

  TEST_CASE("a revised policy is expanded before convergence is declared") {
    Model m = make_model({done_action(), fork("a1", "s0", "s1", "s1"), fork("a2", "s1", "s2", "s2")}, at_state("s2"), 500, 1,
                         at_state("s0"));
    TransitionCache tc(m);
    SolveResult r = solve(m, config(), make_heuristic(m, 20, tc, 1.0), tc);
    CHECK(r.converged);
    CHECK(r.policy.find(at_state("s1")));
    CHECK(evaluate(r.value, m.init) == 498);
  }

  TEST_CASE("solutions on small blocksworlds match the ground optimum") {
    for (const auto& spec : props::small_blocksworlds()) {
      Model m = build_model(spec);
      oracle::Mdp g = oracle::explore(m, *m.ground_init);
      double vstar = oracle::optimal_values(g)[g.initial];
      TransitionCache tc(m);
      SolveResult r = solve(m, config(), make_heuristic(m, 20, tc, 1.0), tc);
      CHECK(r.converged);
      CHECK(r.residual <= 1e-4);
      CHECK(std::fabs(evaluate(r.value, m.init) - vstar) <= 1e-3);
    }
  }

  TEST_CASE("explicit states are reachable, distinct and certified") {
    Model m = build_model(props::small_blocksworlds().at(5));
    TransitionCache tc(m);
    SolveResult r = solve(m, config(), make_heuristic(m, 20, tc, 1.0), tc);
    REQUIRE(r.converged);

    ValueFunction again = backup(r.E, tc, 1.0, r.value);
    for (const auto& z : r.E) CHECK(std::fabs(evaluate(again, z) - evaluate(r.value, z)) <= 1e-4);

    SearchGraph graph(m, tc);
    std::vector<std::size_t> s0{graph.add(m.init)}, E, F;
    do graph.expand(r.policy, s0, E, F);
    while (!F.empty());
    auto members = graph.g_members();
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        CHECK_FALSE(equivalent(graph.state(members[i]), graph.state(members[j])));
    for (std::size_t id : E) {
      std::size_t at = id;
      int steps = 0;
      while (at != s0[0] && steps++ < 1000) {
        std::size_t up = graph.parent(at);
        const Option* o = graph.policy_option(r.policy, graph.state(up));
        REQUIRE(o);
        bool child = false;
        for (const auto& s : o->outcomes) child = child || equivalent(s, graph.state(at));
        CHECK(child);
        at = up;
      }
      CHECK(at == s0[0]);
    }
  }
}
