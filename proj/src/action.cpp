#include "pfc/action.hpp"

#include <algorithm>

#include "pfc/error.hpp"

namespace pfc {

namespace {

const Symbol kU1 = intern("U1");
const Symbol kU2 = intern("U2");

Symbol foreign_name(std::size_t i) { return intern("_R#" + std::to_string(i)); }

// N_p theta, with action-local variables kept apart from the state's P-variables.
FluentTerm instantiate_negative(const FluentTerm& n, const Substitution& theta, const std::vector<Symbol>& pvars) {
  Substitution th = theta;
  std::size_t k = 0;
  for (Symbol v : n.variables())
    if (!theta.lookup(v) && std::binary_search(pvars.begin(), pvars.end(), v)) th.bind(v, Term::var(foreign_name(k++)));
  return th.apply(n);
}

}  // namespace

std::vector<Applicability> forward_applicable(const AbstractState& z, const ActionSchema& a) {
  std::vector<Applicability> out;
  if (a.terminal) {
    Applicability app;
    app.theta.bind_extension(kU1, z.positive());
    out.push_back(std::move(app));
    return out;
  }
  const auto& pvars = z.positive_variables();
  MatchScope scope;
  for_each_embedding(a.pre, z.positive(), scope, [&](const Substitution& theta, const std::vector<char>& used) {
    std::vector<std::vector<NegativeCover>> options;
    for (const auto& np : a.pre_negatives) {
      FluentTerm target = instantiate_negative(np, theta, pvars);
      auto covers = covering_negatives(pvars, z.negatives(), target, false);
      if (covers.empty()) return true;
      options.push_back(std::move(covers));
    }
    Substitution th = theta;
    th.bind_extension(kU1, unused_part(z.positive(), used));
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
      Applicability app;
      app.theta = th;
      for (std::size_t j = 0; j < options.size(); ++j) {
        const NegativeCover& c = options[j][pick[j]];
        app.covers.push_back(c);
        for (const auto& [v, t] : c.sigma.bindings())
          if (!app.sigma.lookup(v)) app.sigma.bind(v, t);
        if (j == 0) app.sigma.bind_extension(kU2, *c.sigma.lookup_extension(kU2));
      }
      out.push_back(std::move(app));
      std::size_t j = 0;
      while (j < pick.size() && ++pick[j] == options[j].size()) pick[j++] = 0;
      if (j == pick.size()) break;
    }
    return true;
  });
  std::vector<std::pair<std::string, std::size_t>> order;
  for (std::size_t i = 0; i < out.size(); ++i) order.emplace_back(out[i].canonical(), i);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first == y.first; }),
              order.end());
  std::vector<Applicability> sorted;
  for (const auto& [k, i] : order) sorted.push_back(std::move(out[i]));
  return sorted;
}

AbstractState successor(const AbstractState& z, const ActionSchema& a, const NatureChoice& choice,
                        const Applicability& app) {
  if (a.terminal) return z;
  const FluentTerm* rest = app.theta.lookup_extension(kU1);
  FluentTerm pos = combine(app.theta.apply(choice.effect), rest ? *rest : FluentTerm{});
  if (pos.has_duplicates())
    throw Error(ErrorKind::InconsistentSuccessor,
                "successor of " + z.to_string() + " under " + choice.name + " repeats a fluent: " + pos.to_string());
  const auto& pvars = z.positive_variables();
  std::vector<FluentTerm> consumed;
  for (const auto& np : a.pre_negatives)
    consumed.push_back(canonical_negative(instantiate_negative(np, app.theta, pvars), pvars));

  std::vector<FluentTerm> negs;
  const auto& zn = z.negatives();
  for (std::size_t k = 0; k < zn.size(); ++k) {
    auto matches = [&](const FluentTerm& n) {
      FluentTerm c = canonical_negative(n, pvars);
      return std::find(consumed.begin(), consumed.end(), c) != consumed.end();
    };
    bool removed = matches(zn[k]);
    for (const auto& c : app.covers)
      if (!removed && c.index == k) removed = matches(c.sigma.apply(zn[k]));
    if (!removed) negs.push_back(zn[k]);
  }
  for (const auto& ne : choice.effect_negatives) negs.push_back(app.theta.apply(ne));
  return AbstractState(std::move(pos), std::move(negs)).canonical();
}

std::vector<Transition> all_successors(const AbstractState& z, const std::vector<ActionSchema>& actions) {
  std::vector<Transition> out;
  for (const auto& a : actions) {
    for (auto& app : forward_applicable(z, a)) {
      if (a.terminal) {
        out.push_back({&a, std::move(app), static_cast<std::size_t>(-1), z});
        continue;
      }
      for (std::size_t j = 0; j < a.choices.size(); ++j) {
        AbstractState next = successor(z, a, a.choices[j], app);
        out.push_back({&a, app, j, std::move(next)});
      }
    }
  }
  return out;
}

ActionSchema standardize_action(const ActionSchema& a) {
  std::vector<Symbol> vars;
  auto collect = [&](const FluentTerm& t) {
    for (Symbol v : t.variables()) vars.push_back(v);
  };
  collect(a.pre);
  for (const auto& n : a.pre_negatives) collect(n);
  for (const auto& c : a.choices) {
    collect(c.effect);
    for (const auto& n : c.effect_negatives) collect(n);
  }
  for (Term p : a.params)
    if (p.is_var()) vars.push_back(p.symbol());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  Substitution ren;
  for (Symbol v : vars) ren.bind(v, Term::var("_" + a.name + "." + symbol_name(v)));
  ActionSchema s = a;
  for (auto& p : s.params) p = ren.apply(p);
  s.pre = ren.apply(a.pre);
  for (auto& n : s.pre_negatives) n = ren.apply(n);
  for (auto& c : s.choices) {
    c.effect = ren.apply(c.effect);
    for (auto& n : c.effect_negatives) n = ren.apply(n);
  }
  return s;
}

}  // namespace pfc
