#include "pfc/state.hpp"

#include <algorithm>
#include <functional>

#include "pfc/error.hpp"

namespace pfc {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t name_hash(Symbol s) { return std::hash<std::string>{}(symbol_name(s)); }

std::uint64_t fluent_hash(const Fluent& f) {
  std::uint64_t h = mix(name_hash(f.name) + f.arity);
  for (int i = 0; i < f.arity; ++i) h = mix(h ^ (name_hash(f.args[i].symbol()) + (f.args[i].is_var() ? 7 : 0)));
  return h;
}

// Colour refinement over the term/fluent incidence graph. Variables start
// uncoloured, so the result is invariant under renaming.
std::uint64_t shape_hash(const FluentTerm& p) {
  std::vector<std::uint32_t> terms;
  for (const auto& f : p)
    for (int i = 0; i < f.arity; ++i) terms.push_back(f.args[i].raw());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  auto index = [&](Term t) {
    return static_cast<std::size_t>(std::lower_bound(terms.begin(), terms.end(), t.raw()) - terms.begin());
  };
  std::vector<std::uint64_t> col(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Symbol s = terms[i] >> 1;
    col[i] = (terms[i] & 1u) ? 0x51afd7ed558ccd1ULL : mix(name_hash(s));
  }
  std::vector<std::uint64_t> fc(p.size());
  std::vector<std::vector<std::uint64_t>> occ(terms.size());
  for (int round = 0; round < 3; ++round) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Fluent& f = p[i];
      std::uint64_t h = mix(name_hash(f.name) * 31 + f.arity);
      for (int k = 0; k < f.arity; ++k) h = mix(h ^ (col[index(f.args[k])] + static_cast<std::uint64_t>(k) * 0x2545f491));
      fc[i] = h;
    }
    for (auto& o : occ) o.clear();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Fluent& f = p[i];
      for (int k = 0; k < f.arity; ++k) occ[index(f.args[k])].push_back(mix(fc[i] + static_cast<std::uint64_t>(k)));
    }
    for (std::size_t t = 0; t < terms.size(); ++t) {
      std::sort(occ[t].begin(), occ[t].end());
      std::uint64_t h = col[t];
      for (auto x : occ[t]) h = mix(h ^ x);
      col[t] = h;
    }
  }
  std::sort(fc.begin(), fc.end());
  std::uint64_t h = mix(p.size());
  for (auto x : fc) h = mix(h ^ x);
  return h;
}

StateProfile make_profile(const FluentTerm& p, const std::vector<Symbol>& pvars) {
  StateProfile pr;
  pr.size = static_cast<std::uint32_t>(p.size());
  pr.variables = static_cast<std::uint32_t>(pvars.size());
  for (const auto& f : p) {
    bool ground = true;
    for (int i = 0; i < f.arity; ++i) {
      if (f.args[i].is_var()) {
        ground = false;
      } else {
        ++pr.constant_slots;
        std::uint64_t key = (static_cast<std::uint64_t>(f.name) << 35) ^ (static_cast<std::uint64_t>(i) << 32) ^
                            f.args[i].symbol();
        auto it = std::lower_bound(pr.constant_counts.begin(), pr.constant_counts.end(), key,
                                   [](const auto& a, std::uint64_t k) { return a.first < k; });
        if (it != pr.constant_counts.end() && it->first == key)
          ++it->second;
        else
          pr.constant_counts.insert(it, {key, 1});
      }
    }
    if (ground) pr.ground_bloom |= std::uint64_t{1} << (fluent_hash(f) & 63);
    auto it = std::lower_bound(pr.name_counts.begin(), pr.name_counts.end(), f.name,
                               [](const auto& a, Symbol s) { return a.first < s; });
    if (it != pr.name_counts.end() && it->first == f.name)
      ++it->second;
    else
      pr.name_counts.insert(it, {f.name, 1});
  }
  pr.shape = shape_hash(p);
  return pr;
}

int compare_fluent_terms(const FluentTerm& a, const FluentTerm& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_fluents(a[i], b[i]);
    if (c) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

bool contains_symbol(const std::vector<Symbol>& sorted, Symbol s) {
  return std::binary_search(sorted.begin(), sorted.end(), s);
}

Symbol local_name(std::size_t i) {
  static std::vector<Symbol> names = [] {
    std::vector<Symbol> v;
    for (int k = 0; k < 64; ++k) v.push_back(intern("_L" + std::to_string(k)));
    return v;
  }();
  return i < names.size() ? names[i] : intern("_L" + std::to_string(i));
}

// Placeholder names used to keep foreign local variables apart from P-variables
// during matching; '#' cannot appear in parsed identifiers.
Symbol reserved_name(std::size_t i) {
  static std::vector<Symbol> names = [] {
    std::vector<Symbol> v;
    for (int k = 0; k < 64; ++k) v.push_back(intern("_R#" + std::to_string(k)));
    return v;
  }();
  return i < names.size() ? names[i] : intern("_R#" + std::to_string(i));
}

// Renames variables of `n` that are neither bound by `theta` nor protected but
// collide with `pvars`.
Substitution separate_locals(const FluentTerm& n, const std::vector<Symbol>& own_vars, const Substitution& theta,
                             const std::vector<Symbol>& pvars) {
  Substitution th = theta;
  std::size_t k = 0;
  for (Symbol v : n.variables()) {
    if (contains_symbol(own_vars, v)) continue;
    if (theta.lookup(v)) continue;
    if (contains_symbol(pvars, v)) th.bind(v, Term::var(reserved_name(k++)));
  }
  return th;
}

const Symbol kU1 = intern("U1");
const Symbol kU2 = intern("U2");

}  // namespace

FluentTerm canonical_negative(const FluentTerm& n, const std::vector<Symbol>& pvars) {
  bool has_local = false;
  for (const auto& f : n)
    for (int i = 0; i < f.arity; ++i)
      if (f.args[i].is_var() && !contains_symbol(pvars, f.args[i].symbol())) has_local = true;
  if (!has_local) return n;
  auto is_local = [&](Term t) { return t.is_var() && !contains_symbol(pvars, t.symbol()); };
  std::vector<Fluent> fs(n.begin(), n.end());
  std::stable_sort(fs.begin(), fs.end(), [&](const Fluent& a, const Fluent& b) {
    if (a.name != b.name) return compare_fluents(a, b) < 0;
    if (a.arity != b.arity) return a.arity < b.arity;
    for (int i = 0; i < a.arity; ++i) {
      bool la = is_local(a.args[i]), lb = is_local(b.args[i]);
      if (la && lb) continue;
      if (la != lb) return la;
      int c = compare_terms(a.args[i], b.args[i]);
      if (c) return c < 0;
    }
    return false;
  });
  Substitution ren;
  std::size_t next = 0;
  for (const auto& f : fs)
    for (int i = 0; i < f.arity; ++i) {
      Term t = f.args[i];
      if (is_local(t) && !ren.lookup(t.symbol())) ren.bind(t.symbol(), Term::var(local_name(next++)));
    }
  return ren.apply(n);
}

AbstractState::AbstractState() : AbstractState(FluentTerm{}, {}) {}

AbstractState::AbstractState(FluentTerm positive, std::vector<FluentTerm> negatives) {
  if (positive.has_duplicates())
    throw Error(ErrorKind::InconsistentState, "fluent occurs twice in positive part: " + positive.to_string());
  auto d = std::make_shared<Data>();
  d->pvars = positive.variables();
  std::vector<std::pair<FluentTerm, FluentTerm>> items;  // canonical, original
  for (auto& n : negatives) {
    if (n.empty()) throw Error(ErrorKind::InconsistentState, "empty negative in abstract state");
    FluentTerm c = canonical_negative(n, d->pvars);
    items.emplace_back(std::move(c), std::move(n));
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return compare_fluent_terms(a.first, b.first) < 0; });
  items.erase(std::unique(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              items.end());
  std::string key = "(P: " + positive.to_string();
  for (std::size_t i = 0; i < items.size(); ++i) key += (i ? ", {" : " | N: {") + items[i].first.to_string() + "}";
  key += ")";
  d->key = std::move(key);
  for (auto& [c, orig] : items) d->negatives.push_back(std::move(orig));
  d->profile = make_profile(positive, d->pvars);
  d->positive = std::move(positive);
  d_ = std::move(d);
}

std::vector<Symbol> AbstractState::local_variables(std::size_t negative) const {
  std::vector<Symbol> out;
  for (Symbol v : d_->negatives.at(negative).variables())
    if (!contains_symbol(d_->pvars, v)) out.push_back(v);
  return out;
}

AbstractState AbstractState::canonical() const {
  bool same = true;
  std::vector<FluentTerm> negs;
  for (const auto& n : d_->negatives) {
    negs.push_back(canonical_negative(n, d_->pvars));
    if (!(negs.back() == n)) same = false;
  }
  if (same) return *this;
  return AbstractState(d_->positive, std::move(negs));
}

std::string AbstractState::to_string() const {
  std::string s = "(P: " + d_->positive.to_string();
  for (std::size_t i = 0; i < d_->negatives.size(); ++i)
    s += (i ? ", {" : " | N: {") + d_->negatives[i].to_string() + "}";
  return s + ")";
}

bool may_subsume(const StateProfile& a, const StateProfile& b) {
  if (b.size > a.size) return false;
  if ((b.ground_bloom & ~a.ground_bloom) != 0) return false;
  std::size_t i = 0;
  for (const auto& [name, count] : b.name_counts) {
    while (i < a.name_counts.size() && a.name_counts[i].first < name) ++i;
    if (i == a.name_counts.size() || a.name_counts[i].first != name || a.name_counts[i].second < count) return false;
  }
  i = 0;
  for (const auto& [key, count] : b.constant_counts) {
    while (i < a.constant_counts.size() && a.constant_counts[i].first < key) ++i;
    if (i == a.constant_counts.size() || a.constant_counts[i].first != key || a.constant_counts[i].second < count)
      return false;
  }
  // Equal size, no variable sent to a constant and equally many variables
  // force the positive match to be a renaming.
  if (a.size == b.size && a.constant_slots == b.constant_slots && a.variables == b.variables && a.shape != b.shape)
    return false;
  return true;
}

std::vector<NegativeCover> covering_negatives(const std::vector<Symbol>& pvars, const std::vector<FluentTerm>& negs,
                                              const FluentTerm& target, bool first_only) {
  std::vector<NegativeCover> out;
  MatchScope scope;
  scope.rigid = pvars;
  for (std::size_t i = 0; i < negs.size(); ++i) {
    bool go_on = for_each_embedding(negs[i], target, scope, [&](const Substitution& s, const std::vector<char>& used) {
      Substitution sigma = s;
      sigma.bind_extension(kU2, unused_part(target, used));
      for (const auto& c : out)
        if (c.index == i && c.sigma == sigma) return true;
      out.push_back({i, std::move(sigma)});
      return !first_only;
    });
    if (!go_on) break;
  }
  return out;
}

std::vector<Substitution> entails_negative(const FluentTerm& P, const FluentTerm& n_elem,
                                           const std::vector<FluentTerm>& n_set, const Substitution& theta) {
  std::vector<Symbol> pvars = P.variables();
  Substitution th = separate_locals(n_elem, {}, theta, pvars);
  FluentTerm target = th.apply(n_elem);
  std::vector<Substitution> out;
  for (auto& c : covering_negatives(pvars, n_set, target, false)) out.push_back(std::move(c.sigma));
  return out;
}

namespace {

std::optional<SubsumptionWitness> subsume_impl(const AbstractState& z1, const AbstractState& z2, bool want_witness) {
  if (!may_subsume(z1.profile(), z2.profile())) return std::nullopt;
  const auto& n1 = z1.negatives();
  const auto& n2 = z2.negatives();
  if (!n2.empty() && n1.empty()) return std::nullopt;
  std::optional<SubsumptionWitness> result;
  MatchScope scope;
  auto covered = [&](const FluentTerm& n, const Substitution& theta) {
    Substitution th = separate_locals(n, z2.positive_variables(), theta, z1.positive_variables());
    return !covering_negatives(z1.positive_variables(), n1, th.apply(n), true).empty();
  };
  // Negatives of z2 are tested as soon as the P-variables they mention are bound.
  std::vector<std::vector<Symbol>> needs(n2.size());
  for (std::size_t k = 0; k < n2.size(); ++k) {
    for (Symbol v : n2[k].variables())
      if (contains_symbol(z2.positive_variables(), v)) needs[k].push_back(v);
    if (needs[k].empty() && !covered(n2[k], Substitution{})) return std::nullopt;
  }
  auto prune = [&](PartialBindings b, std::size_t fresh_from) {
    auto find = [&](Symbol v, std::size_t from) {
      for (std::size_t i = from; i < b.size(); ++i)
        if (b[i].first == v) return true;
      return false;
    };
    for (std::size_t k = 0; k < n2.size(); ++k) {
      if (needs[k].empty()) continue;
      bool fresh = false, complete = true;
      for (Symbol v : needs[k]) {
        if (find(v, fresh_from))
          fresh = true;
        else if (!find(v, 0))
          complete = false;
      }
      if (!fresh || !complete) continue;
      Substitution theta;
      for (const auto& [v, t] : b) theta.bind(v, t);
      if (!covered(n2[k], theta)) return false;
    }
    return true;
  };
  for_each_embedding(z2.positive(), z1.positive(), scope, [&](const Substitution& theta, const std::vector<char>& used) {
    SubsumptionWitness w;
    for (const auto& n : n2) {
      Substitution th = separate_locals(n, z2.positive_variables(), theta, z1.positive_variables());
      FluentTerm target = th.apply(n);
      auto covers = covering_negatives(z1.positive_variables(), n1, target, true);
      if (covers.empty()) return true;
      if (want_witness) {
        w.covering.push_back(covers[0].index);
        w.sigma.push_back(std::move(covers[0].sigma));
      }
    }
    if (want_witness) {
      w.theta = theta;
      w.theta.bind_extension(kU1, unused_part(z1.positive(), used));
    }
    result = std::move(w);
    return false;
  }, prune);
  return result;
}

}  // namespace

std::optional<SubsumptionWitness> subsumes(const AbstractState& z1, const AbstractState& z2) {
  return subsume_impl(z1, z2, true);
}

bool is_subsumed(const AbstractState& z1, const AbstractState& z2) { return subsume_impl(z1, z2, false).has_value(); }

bool equivalent(const AbstractState& a, const AbstractState& b) {
  if (a.profile().size != b.profile().size || a.profile().shape != b.profile().shape) return false;
  return is_subsumed(a, b) && is_subsumed(b, a);
}

bool satisfies(const FluentTerm& d, const AbstractState& z, Substitution* witness) {
  bool ok = false;
  MatchScope scope;
  for_each_embedding(z.positive(), d, scope, [&](const Substitution& theta, const std::vector<char>&) {
    for (const auto& n : z.negatives())
      if (has_embedding(theta.apply(n), d, scope)) return true;
    ok = true;
    if (witness) *witness = theta;
    return false;
  });
  return ok;
}

std::vector<Fluent> GroundUniverse::ground_fluents() const {
  std::vector<Fluent> out;
  for (const auto& [name, arity] : signatures) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
    if (arity > 0 && objects.empty()) continue;
    while (true) {
      std::vector<Term> args;
      for (auto i : idx) args.push_back(objects[i]);
      out.emplace_back(name, args);
      int k = arity - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == objects.size()) idx[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
  }
  std::sort(out.begin(), out.end(), fluent_less);
  return out;
}

std::size_t GroundUniverse::ground_fluent_count() const {
  std::size_t n = 0;
  for (const auto& [name, arity] : signatures) {
    std::size_t c = 1;
    for (int i = 0; i < arity; ++i) c *= objects.size();
    n += c;
  }
  return n;
}

std::vector<FluentTerm> ground_interpretation(const AbstractState& z, const GroundUniverse& u, std::size_t cap) {
  std::size_t k = u.ground_fluent_count();
  if (k > cap)
    throw Error(ErrorKind::UniverseTooLarge,
                "universe has " + std::to_string(k) + " ground fluents, cap is " + std::to_string(cap));
  std::vector<Fluent> all = u.ground_fluents();
  std::vector<FluentTerm> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<Fluent> fs;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) fs.push_back(all[i]);
    FluentTerm d(std::move(fs));
    if (satisfies(d, z)) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace pfc
