#include "pfc/terms.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace pfc {

namespace {

// Names live in fixed-size chunks so readers never race with growth.
constexpr std::size_t kChunkBits = 12;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = 4096;

struct Interner {
  std::mutex mu;
  std::unordered_map<std::string, Symbol> ids;
  std::array<std::atomic<std::string*>, kMaxChunks> chunks{};
  std::size_t count = 0;

  Interner() { add(""); }

  Symbol add(std::string_view name) {
    std::size_t id = count;
    std::size_t c = id >> kChunkBits;
    if (c >= kMaxChunks) throw std::length_error("symbol table exhausted");
    std::string* chunk = chunks[c].load(std::memory_order_relaxed);
    if (!chunk) {
      chunk = new std::string[kChunkSize];
      chunks[c].store(chunk, std::memory_order_release);
    }
    chunk[id & (kChunkSize - 1)] = std::string(name);
    ids.emplace(std::string(name), static_cast<Symbol>(id));
    ++count;
    return static_cast<Symbol>(id);
  }
};

Interner& interner() {
  static Interner* in = new Interner();
  return *in;
}

}  // namespace

Symbol intern(std::string_view name) {
  Interner& in = interner();
  std::lock_guard<std::mutex> lock(in.mu);
  auto it = in.ids.find(std::string(name));
  if (it != in.ids.end()) return it->second;
  return in.add(name);
}

const std::string& symbol_name(Symbol s) {
  Interner& in = interner();
  std::string* chunk = in.chunks[s >> kChunkBits].load(std::memory_order_acquire);
  return chunk[s & (kChunkSize - 1)];
}

bool is_variable_name(std::string_view name) {
  if (name.empty()) return false;
  unsigned char c = static_cast<unsigned char>(name[0]);
  return std::isupper(c) || c == '_';
}

int compare_terms(Term a, Term b) {
  if (a == b) return 0;
  int c = a.name().compare(b.name());
  if (c != 0) return c < 0 ? -1 : 1;
  return a.is_var() ? -1 : 1;
}

Fluent::Fluent(std::string_view n, std::initializer_list<Term> a) : Fluent(intern(n), std::span<const Term>(a.begin(), a.size())) {}

Fluent::Fluent(Symbol n, std::span<const Term> a) : name(n) {
  if (a.size() > static_cast<std::size_t>(kMaxArity))
    throw std::invalid_argument("fluent " + symbol_name(n) + " exceeds the maximum arity of 4");
  arity = static_cast<std::uint8_t>(a.size());
  std::copy(a.begin(), a.end(), args.begin());
}

bool Fluent::is_ground() const {
  for (int i = 0; i < arity; ++i)
    if (args[i].is_var()) return false;
  return true;
}

std::string Fluent::to_string() const {
  std::string s = symbol_name(name);
  if (arity == 0) return s;
  s += '(';
  for (int i = 0; i < arity; ++i) {
    if (i) s += ',';
    s += args[i].name();
  }
  s += ')';
  return s;
}

int compare_fluents(const Fluent& a, const Fluent& b) {
  if (a.name != b.name) {
    int c = symbol_name(a.name).compare(symbol_name(b.name));
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (a.arity != b.arity) return a.arity < b.arity ? -1 : 1;
  for (int i = 0; i < a.arity; ++i) {
    int c = compare_terms(a.args[i], b.args[i]);
    if (c) return c;
  }
  return 0;
}

Fluent make_fluent(std::string_view name, std::initializer_list<std::string_view> args) {
  std::vector<Term> ts;
  for (auto a : args) ts.push_back(Term::parse(a));
  return Fluent(intern(name), ts);
}

FluentTerm::FluentTerm(std::vector<Fluent> fluents) : fluents_(std::move(fluents)) {
  std::sort(fluents_.begin(), fluents_.end(), fluent_less);
}

bool FluentTerm::has_duplicates() const {
  return std::adjacent_find(fluents_.begin(), fluents_.end()) != fluents_.end();
}

bool FluentTerm::is_ground() const {
  return std::all_of(fluents_.begin(), fluents_.end(), [](const Fluent& f) { return f.is_ground(); });
}

bool FluentTerm::contains(const Fluent& f) const {
  return std::binary_search(fluents_.begin(), fluents_.end(), f, fluent_less);
}

std::vector<Symbol> FluentTerm::variables() const {
  std::vector<Symbol> vs;
  for (const auto& f : fluents_)
    for (int i = 0; i < f.arity; ++i)
      if (f.args[i].is_var()) vs.push_back(f.args[i].symbol());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::string FluentTerm::to_string() const {
  if (fluents_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < fluents_.size(); ++i) {
    if (i) s += " o ";
    s += fluents_[i].to_string();
  }
  return s;
}

FluentTerm combine(const FluentTerm& a, const FluentTerm& b) {
  std::vector<Fluent> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), fluent_less);
  FluentTerm t;
  t = FluentTerm(std::move(out));
  return t;
}

FluentTerm subtract(const FluentTerm& a, const FluentTerm& b) {
  std::vector<Fluent> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), fluent_less);
  return FluentTerm(std::move(out));
}

const Term* Substitution::lookup(Symbol var) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), var,
                             [](const auto& p, Symbol v) { return p.first < v; });
  if (it != vars_.end() && it->first == var) return &it->second;
  return nullptr;
}

const FluentTerm* Substitution::lookup_extension(Symbol ext) const {
  for (const auto& [k, v] : ext_)
    if (k == ext) return &v;
  return nullptr;
}

void Substitution::bind(Symbol var, Term value) {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), var,
                             [](const auto& p, Symbol v) { return p.first < v; });
  if (it != vars_.end() && it->first == var)
    it->second = value;
  else
    vars_.insert(it, {var, value});
}

void Substitution::bind_extension(Symbol ext, FluentTerm value) {
  for (auto& [k, v] : ext_)
    if (k == ext) {
      v = std::move(value);
      return;
    }
  ext_.emplace_back(ext, std::move(value));
}

Term Substitution::apply(Term t) const {
  if (!t.is_var()) return t;
  const Term* v = lookup(t.symbol());
  return v ? *v : t;
}

Fluent Substitution::apply(const Fluent& f) const {
  Fluent g = f;
  for (int i = 0; i < g.arity; ++i) g.args[i] = apply(g.args[i]);
  return g;
}

FluentTerm Substitution::apply(const FluentTerm& t) const {
  if (vars_.empty()) return t;
  std::vector<Fluent> out;
  out.reserve(t.size());
  for (const auto& f : t) out.push_back(apply(f));
  return FluentTerm(std::move(out));
}

std::string Substitution::to_string() const {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [k, v] : vars_) items.emplace_back(symbol_name(k), v.name());
  std::sort(items.begin(), items.end());
  std::vector<std::pair<std::string, std::string>> exts;
  for (const auto& [k, v] : ext_) exts.emplace_back(symbol_name(k), v.to_string());
  std::sort(exts.begin(), exts.end());
  std::string s = "{";
  bool first = true;
  for (const auto& list : {items, exts})
    for (const auto& [k, v] : list) {
      if (!first) s += ", ";
      first = false;
      s += k + "->" + v;
    }
  return s + "}";
}

FluentTerm apply_substitution(const FluentTerm& t, const Substitution& s, std::optional<Symbol> ext) {
  FluentTerm out = s.apply(t);
  if (ext)
    if (const FluentTerm* u = s.lookup_extension(*ext)) out = combine(out, *u);
  return out;
}

bool MatchScope::is_rigid(Symbol v) const { return std::binary_search(rigid.begin(), rigid.end(), v); }

namespace {

class Embedder {
 public:
  Embedder(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope, const MatchVisitor& visit,
           const MatchPruner* prune)
      : P_(pattern.fluents()), T_(target.fluents()), scope_(scope), visit_(visit), prune_(prune),
        pdone_(P_.size(), 0), used_(T_.size(), 0), lo_(P_.size()), hi_(P_.size()) {
    for (std::size_t i = 0; i < P_.size(); ++i) {
      std::size_t j = 0;
      while (j < T_.size() && (T_[j].name != P_[i].name || T_[j].arity != P_[i].arity)) ++j;
      lo_[i] = j;
      while (j < T_.size() && T_[j].name == P_[i].name && T_[j].arity == P_[i].arity) ++j;
      hi_[i] = j;
    }
    degree_.assign(P_.size(), 0);
    for (std::size_t i = 0; i < P_.size(); ++i)
      for (int k = 0; k < P_[i].arity; ++k) {
        Term a = P_[i].args[k];
        if (!a.is_var() || scope_.is_rigid(a.symbol())) continue;
        for (std::size_t o = 0; o < P_.size(); ++o)
          if (o != i)
            for (int q = 0; q < P_[o].arity; ++q)
              if (P_[o].args[q] == a) ++degree_[i];
      }
    bindings_.reserve(16);
  }

  bool run() { return dfs(0); }

 private:
  const Term* bound(Symbol v) const {
    for (const auto& [k, t] : bindings_)
      if (k == v) return &t;
    return nullptr;
  }

  bool unify(const Fluent& p, const Fluent& t) {
    for (int k = 0; k < p.arity; ++k) {
      Term a = p.args[k];
      Term b = t.args[k];
      if (a.is_var() && !scope_.is_rigid(a.symbol())) {
        if (const Term* v = bound(a.symbol())) {
          if (*v != b) return false;
        } else {
          bindings_.emplace_back(a.symbol(), b);
        }
      } else if (a != b) {
        return false;
      }
    }
    return true;
  }

  bool dfs(std::size_t depth) {
    if (depth == P_.size()) {
      Substitution s;
      for (const auto& [k, t] : bindings_) s.bind(k, t);
      return visit_(s, used_);
    }
    std::size_t best = P_.size();
    std::size_t best_count = SIZE_MAX;
    for (std::size_t i = 0; i < P_.size(); ++i) {
      if (pdone_[i]) continue;
      std::size_t count = 0;
      for (std::size_t j = lo_[i]; j < hi_[i]; ++j) {
        if (used_[j]) continue;
        std::size_t mark = bindings_.size();
        if (unify(P_[i], T_[j])) ++count;
        bindings_.resize(mark);
      }
      if (count == 0) return true;
      if (count < best_count || (count == best_count && degree_[i] > degree_[best])) {
        best_count = count;
        best = i;
      }
    }
    pdone_[best] = 1;
    for (std::size_t j = lo_[best]; j < hi_[best]; ++j) {
      if (used_[j]) continue;
      std::size_t mark = bindings_.size();
      if (unify(P_[best], T_[j]) && (!prune_ || (*prune_)(PartialBindings(bindings_), mark))) {
        used_[j] = 1;
        bool go_on = dfs(depth + 1);
        used_[j] = 0;
        if (!go_on) {
          bindings_.resize(mark);
          pdone_[best] = 0;
          return false;
        }
      }
      bindings_.resize(mark);
    }
    pdone_[best] = 0;
    return true;
  }

  const std::vector<Fluent>& P_;
  const std::vector<Fluent>& T_;
  const MatchScope& scope_;
  const MatchVisitor& visit_;
  const MatchPruner* prune_;
  std::vector<char> pdone_;
  std::vector<char> used_;
  std::vector<std::size_t> lo_, hi_;
  std::vector<std::uint32_t> degree_;  // pattern fluents sharing a variable; breaks ties in fluent choice
  std::vector<std::pair<Symbol, Term>> bindings_;
};

}  // namespace

bool for_each_embedding(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope,
                        const MatchVisitor& visit) {
  if (pattern.size() > target.size()) return true;
  if (!scope.allow_remainder && pattern.size() != target.size()) return true;
  Embedder e(pattern, target, scope, visit, nullptr);
  return e.run();
}

bool for_each_embedding(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope,
                        const MatchVisitor& visit, const MatchPruner& prune) {
  if (pattern.size() > target.size()) return true;
  if (!scope.allow_remainder && pattern.size() != target.size()) return true;
  Embedder e(pattern, target, scope, visit, &prune);
  return e.run();
}

bool has_embedding(const FluentTerm& pattern, const FluentTerm& target, const MatchScope& scope) {
  bool found = false;
  for_each_embedding(pattern, target, scope, [&](const Substitution&, const std::vector<char>&) {
    found = true;
    return false;
  });
  return found;
}

FluentTerm unused_part(const FluentTerm& target, const std::vector<char>& used) {
  std::vector<Fluent> rest;
  for (std::size_t j = 0; j < target.size(); ++j)
    if (!used[j]) rest.push_back(target[j]);
  return FluentTerm(std::move(rest));
}

std::vector<Substitution> ac1_match(const MatchProblem& p) {
  std::vector<Substitution> out;
  MatchScope scope;
  for_each_embedding(p.pattern, p.target, scope, [&](const Substitution& s, const std::vector<char>& used) {
    Substitution full = s;
    full.bind_extension(p.extension, unused_part(p.target, used));
    if (std::find(out.begin(), out.end(), full) == out.end()) out.push_back(std::move(full));
    return true;
  });
  return out;
}

Symbol fresh_variable(std::string_view base) {
  static std::atomic<std::uint64_t> counter{0};
  std::string stem(base);
  auto tick = stem.find('\'');
  if (tick != std::string::npos) stem.resize(tick);
  if (!is_variable_name(stem)) stem = "V" + stem;
  return intern(stem + "'" + std::to_string(++counter));
}

Renaming standardize_apart(const FluentTerm& t, std::span<const Symbol>) {
  Renaming r;
  for (Symbol v : t.variables()) r.map.bind(v, Term::var(fresh_variable(symbol_name(v))));
  r.term = r.map.apply(t);
  return r;
}

}  // namespace pfc
