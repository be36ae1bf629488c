#include "pfc/value.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pfc {

ValueFunction::ValueFunction(std::vector<ValueEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const AbstractState& z = entries_[i].state;
    if (z.is_universal()) {
      universal_.push_back(i);
      continue;
    }
    const StateProfile& p = z.profile();
    auto it = std::find_if(buckets_.begin(), buckets_.end(), [&](const Bucket& b) {
      return b.size == p.size && b.variables == p.variables && b.constant_slots == p.constant_slots;
    });
    if (it == buckets_.end()) {
      buckets_.push_back({p.size, p.variables, p.constant_slots, {}, {}});
      it = buckets_.end() - 1;
    }
    it->all.push_back(i);
    it->by_shape[p.shape].push_back(i);
  }
}

void ValueFunction::for_each_subsumer(const AbstractState& z, const std::function<bool(std::size_t)>& f) const {
  const StateProfile& p = z.profile();
  for (const Bucket& b : buckets_) {
    if (b.size > p.size) continue;
    const std::vector<std::size_t>* cands = &b.all;
    if (b.size == p.size && b.variables == p.variables && b.constant_slots == p.constant_slots) {
      auto it = b.by_shape.find(p.shape);
      if (it == b.by_shape.end()) continue;
      cands = &it->second;
    }
    for (std::size_t i : *cands) {
      const AbstractState& e = entries_[i].state;
      if (!may_subsume(p, e.profile())) continue;
      if (is_subsumed(z, e) && !f(i)) return;
    }
  }
}

std::optional<std::size_t> ValueFunction::find_equivalent(const AbstractState& z) const {
  if (z.is_universal()) {
    if (universal_.empty()) return std::nullopt;
    return universal_.front();
  }
  const StateProfile& p = z.profile();
  for (const Bucket& b : buckets_) {
    if (b.size != p.size || b.variables != p.variables || b.constant_slots != p.constant_slots) continue;
    auto it = b.by_shape.find(p.shape);
    if (it == b.by_shape.end()) return std::nullopt;
    for (std::size_t i : it->second)
      if (entries_[i].state.key() == z.key() || equivalent(entries_[i].state, z)) return i;
  }
  return std::nullopt;
}

double evaluate(const ValueFunction& v, const AbstractState& z) {
  bool any = false;
  double best = 0;
  v.for_each_subsumer(z, [&](std::size_t i) {
    double x = v.entries()[i].value;
    if (!any || x > best) best = x;
    any = true;
    return true;
  });
  if (any) return best;
  for (std::size_t i : v.universal_entries()) {
    double x = v.entries()[i].value;
    if (!any || x > best) best = x;
    any = true;
  }
  return any ? best : 0.0;
}

double evaluate_ground(const ValueFunction& v, const FluentTerm& d) {
  AbstractState zd(d, {});
  bool any = false;
  double best = 0;
  for (const auto& e : v.entries()) {
    if (e.state.is_universal()) continue;
    if (!may_subsume(zd.profile(), e.state.profile())) continue;
    if (satisfies(d, e.state)) {
      if (!any || e.value > best) best = e.value;
      any = true;
    }
  }
  if (any) return best;
  for (std::size_t i : v.universal_entries()) {
    double x = v.entries()[i].value;
    if (!any || x > best) best = x;
    any = true;
  }
  return any ? best : 0.0;
}

ValueFunction normalize(const ValueFunction& v) {
  const auto& es = v.entries();
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < es.size(); ++i) groups[es[i].value].push_back(i);
  std::vector<char> alive(es.size(), 1);
  for (const auto& [value, members] : groups) {
    if (members.size() < 2) continue;
    std::vector<ValueEntry> sub;
    for (std::size_t i : members) sub.push_back(es[i]);
    ValueFunction group(sub);
    std::vector<char> here(members.size(), 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t a = 0; a < members.size(); ++a) {
        if (!here[a]) continue;
        const AbstractState& za = sub[a].state;
        bool drop = false;
        if (za.is_universal()) {
          for (std::size_t u : group.universal_entries())
            if (u < a && here[u]) drop = true;
        } else {
          group.for_each_subsumer(za, [&](std::size_t b) {
            if (b == a || !here[b]) return true;
            if (b < a || !is_subsumed(sub[b].state, za)) {
              drop = true;
              return false;
            }
            return true;
          });
        }
        if (drop) {
          here[a] = 0;
          changed = true;
        }
      }
    }
    for (std::size_t a = 0; a < members.size(); ++a)
      if (!here[a]) alive[members[a]] = 0;
  }
  std::vector<ValueEntry> out;
  for (std::size_t i = 0; i < es.size(); ++i)
    if (alive[i]) out.push_back(es[i]);
  return ValueFunction(std::move(out));
}

double residual(const ValueFunction& v, const ValueFunction& v_prev, const std::vector<AbstractState>& probe) {
  double r = 0;
  for (const auto& z : probe) r = std::max(r, std::fabs(evaluate(v, z) - evaluate(v_prev, z)));
  return r;
}

void Policy::set(const AbstractState& z, std::string action, Applicability app) {
  auto it = by_key_.find(z.key());
  if (it != by_key_.end()) {
    entries_[it->second].action = std::move(action);
    entries_[it->second].app = std::move(app);
    return;
  }
  by_key_.emplace(z.key(), entries_.size());
  entries_.push_back({z, std::move(action), std::move(app)});
}

const PolicyEntry* Policy::find(const AbstractState& z) const {
  auto it = by_key_.find(z.key());
  return it == by_key_.end() ? nullptr : &entries_[it->second];
}

const PolicyEntry* Policy::lookup_ground(const FluentTerm& d, Substitution* embedding) const {
  AbstractState zd(d, {});
  std::vector<std::size_t> matches;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const AbstractState& z = entries_[i].state;
    if (!z.is_universal() && !may_subsume(zd.profile(), z.profile())) continue;
    if (satisfies(d, z)) matches.push_back(i);
  }
  if (matches.empty()) return nullptr;
  std::sort(matches.begin(), matches.end(),
            [&](std::size_t a, std::size_t b) { return entries_[a].state.key() < entries_[b].state.key(); });
  std::size_t best = matches.front();
  for (std::size_t i : matches)
    if (i != best && is_subsumed(entries_[i].state, entries_[best].state) &&
        !is_subsumed(entries_[best].state, entries_[i].state))
      best = i;
  if (embedding) satisfies(d, entries_[best].state, embedding);
  return &entries_[best];
}

}  // namespace pfc
