#include "pfc/model.hpp"

#include <algorithm>
#include <set>

#include "pfc/error.hpp"

namespace pfc {

namespace {

void collect(const FluentTerm& t, std::set<std::pair<std::string, int>>& sigs, std::set<std::string>& consts) {
  for (const auto& f : t) {
    sigs.emplace(symbol_name(f.name), f.arity);
    for (Term a : f.arguments())
      if (!a.is_var()) consts.insert(a.name());
  }
}

void collect(const AbstractState& z, std::set<std::pair<std::string, int>>& sigs, std::set<std::string>& consts) {
  collect(z.positive(), sigs, consts);
  for (const auto& n : z.negatives()) collect(n, sigs, consts);
}

void collect(const ActionSchema& a, std::set<std::pair<std::string, int>>& sigs, std::set<std::string>& consts) {
  collect(a.pre, sigs, consts);
  for (const auto& n : a.pre_negatives) collect(n, sigs, consts);
  for (const auto& c : a.choices) {
    collect(c.effect, sigs, consts);
    for (const auto& n : c.effect_negatives) collect(n, sigs, consts);
  }
}

std::vector<ActionSchema> prepare_actions(std::vector<ActionSchema> actions) {
  std::vector<ActionSchema> out;
  for (const auto& a : actions) out.push_back(standardize_action(a));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

GroundUniverse make_universe(const std::vector<ActionSchema>& actions, const AbstractState& goal,
                             const AbstractState& init, const std::vector<std::string>& objects) {
  std::set<std::pair<std::string, int>> sigs;
  std::set<std::string> consts(objects.begin(), objects.end());
  for (const auto& a : actions) collect(a, sigs, consts);
  collect(goal, sigs, consts);
  collect(init, sigs, consts);
  GroundUniverse u;
  for (const auto& c : consts) u.objects.push_back(Term::constant(c));
  for (const auto& [n, k] : sigs) u.signatures.emplace_back(intern(n), k);
  return u;
}

}  // namespace

const ActionSchema* Model::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

Model build_model(const ProblemSpec& spec, ModelOptions opts) {
  Model m;
  m.name = spec.problem_name;
  m.actions = prepare_actions(spec.actions);
  m.goal = spec.goal.canonical();
  m.goal_reward = spec.goal_reward;
  m.gamma = spec.gamma;

  std::vector<Fluent> pos(spec.init.positive().begin(), spec.init.positive().end());
  for (const auto& [colour, members] : spec.colors)
    for (const auto& o : members) pos.push_back(Fluent(intern(colour), std::vector<Term>{Term::constant(o)}));
  FluentTerm p(std::move(pos));
  if (p.has_duplicates()) throw Error(ErrorKind::Validation, "initial state repeats a fluent: " + p.to_string());
  AbstractState init(p, spec.init.negatives());
  m.universe = make_universe(m.actions, m.goal, init, spec.objects);
  if (p.is_ground()) m.ground_init = p;

  if (opts.lift) {
    std::set<std::string> fixed;
    std::set<std::pair<std::string, int>> sigs;
    for (const auto& a : spec.actions) collect(a, sigs, fixed);
    collect(spec.goal, sigs, fixed);
    Substitution lift;
    for (const auto& o : spec.objects) {
      if (fixed.count(o))
        throw Error(ErrorKind::InvalidArgument, "cannot lift object " + o + ": it is named by an action or the goal");
      lift.bind(intern(o), Term::var("O_" + o));
    }
    // Constants are not variables, so bind via a renaming over the fluents.
    auto lift_term = [&](const FluentTerm& t) {
      std::vector<Fluent> fs;
      for (Fluent f : t) {
        for (int i = 0; i < f.arity; ++i)
          if (!f.args[i].is_var())
            if (const Term* v = lift.lookup(f.args[i].symbol())) f.args[i] = *v;
        fs.push_back(f);
      }
      return FluentTerm(std::move(fs));
    };
    std::vector<FluentTerm> negs;
    for (const auto& n : init.negatives()) negs.push_back(lift_term(n));
    init = AbstractState(lift_term(init.positive()), std::move(negs));
  }
  m.init = init.canonical();
  return m;
}

Model make_model(std::vector<ActionSchema> actions, AbstractState goal, double goal_reward, double gamma,
                 AbstractState init) {
  Model m;
  m.name = "model";
  m.actions = prepare_actions(std::move(actions));
  m.goal = goal.canonical();
  m.goal_reward = goal_reward;
  m.gamma = gamma;
  m.universe = make_universe(m.actions, m.goal, init, {});
  if (init.positive().is_ground()) m.ground_init = init.positive();
  m.init = init.canonical();
  return m;
}

}  // namespace pfc
