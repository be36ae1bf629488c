#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "pfc/terms.hpp"

using namespace pfc;

namespace {

Term V(const char* n) { return Term::var(n); }
Term C(const char* n) { return Term::constant(n); }
Fluent on(const char* x, const char* y) { return make_fluent("on", {x, y}); }
Fluent e() { return make_fluent("e", {}); }

}  // namespace

TEST_SUITE("terms") {
  TEST_CASE("fluent terms are multisets in canonical order") {
    FluentTerm a{on("b", "table"), e(), on("X1", "b")};
    FluentTerm b{e(), on("X1", "b"), on("b", "table")};
    CHECK(a == b);
    CHECK(a.to_string() == b.to_string());
    CHECK(FluentTerm{}.to_string() == "1");
    CHECK(FluentTerm{on("a", "b"), on("a", "b")}.has_duplicates());
    CHECK_FALSE(a.is_ground());
    CHECK(a.variables() == std::vector<Symbol>{intern("X1")});
  }

  TEST_CASE("combine and subtract are multiset union and difference") {
    FluentTerm x{on("a", "b")}, y{e()};
    CHECK(combine(x, y) == FluentTerm{e(), on("a", "b")});
    CHECK(subtract(combine(x, y), y) == x);
    CHECK(combine(FluentTerm{}, x) == x);
  }

  TEST_CASE("substitution instantiates variables") {
    Substitution s;
    s.bind(intern("X"), V("X1"));
    s.bind(intern("Y"), C("b"));
    CHECK(s.apply(FluentTerm{on("X", "Y")}) == FluentTerm{on("X1", "b")});
    CHECK(Substitution().apply(FluentTerm{on("X", "Y"), e()}) == FluentTerm{on("X", "Y"), e()});
  }

  TEST_CASE("an extension bound to the unit disappears") {
    Substitution s;
    s.bind(intern("X"), C("a"));
    s.bind(intern("Y"), C("b"));
    s.bind_extension(intern("U1"), FluentTerm{});
    CHECK(apply_substitution(FluentTerm{on("X", "Y")}, s, intern("U1")) == FluentTerm{on("a", "b")});
  }

  TEST_CASE("matching the pickup precondition against the worked state") {
    FluentTerm target{on("b", "table"), on("X1", "b"), e()};
    auto sols = ac1_match({FluentTerm{on("X", "Y"), e()}, intern("U1"), target});
    std::set<std::string> got;
    for (const auto& s : sols) got.insert(oracle::describe(s, intern("U1")));
    CHECK(got.count("X=X1,Y=b|on(b,table)"));
    CHECK(got.count("X=b,Y=table|on(X1,b)"));
    CHECK(got.size() == 2);
  }

  TEST_CASE("a bare extension absorbs the whole target") {
    FluentTerm target{on("a", "b"), e()};
    auto sols = ac1_match({FluentTerm{}, intern("U1"), target});
    REQUIRE(sols.size() == 1);
    CHECK(*sols[0].lookup_extension(intern("U1")) == target);
  }

  TEST_CASE("no match without a fluent of the right name") {
    CHECK(ac1_match({FluentTerm{on("X", "Y")}, intern("U1"), FluentTerm{make_fluent("holding", {"a"})}}).empty());
  }

  TEST_CASE("one on-fluent pattern against two on-fluents gives two solutions") {
    auto pattern = FluentTerm{on("X", "Y")};
    auto target = FluentTerm{on("a", "b"), on("b", "c")};
    CHECK(ac1_match({pattern, intern("U1"), target}).size() == 2);
    CHECK(oracle::embeddings(pattern, target).size() == 2);
  }

  TEST_CASE("the unit matches the unit once, with the empty substitution") {
    auto sols = ac1_match({FluentTerm{}, intern("U1"), FluentTerm{}});
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].bindings().empty());
  }

  TEST_CASE("solutions are distinct substitutions") {
    auto sols = ac1_match({FluentTerm{make_fluent("p", {"X"})}, intern("U1"),
                           FluentTerm{make_fluent("p", {"a"}), make_fluent("p", {"b"})}});
    CHECK(sols.size() == 2);
    auto unit = ac1_match({FluentTerm{e()}, intern("U1"), FluentTerm{e(), on("a", "b")}});
    CHECK(unit.size() == 1);
  }

  TEST_CASE("rigid variables behave like constants") {
    std::vector<Symbol> rigid{intern("X")};
    MatchScope scope;
    scope.rigid = rigid;
    CHECK(has_embedding(FluentTerm{on("X", "Y")}, FluentTerm{on("X", "b")}, scope));
    CHECK_FALSE(has_embedding(FluentTerm{on("X", "Y")}, FluentTerm{on("a", "b")}, scope));
  }

  TEST_CASE("standardize apart renames reserved variables consistently") {
    std::vector<Symbol> reserved{intern("X")};
    Renaming r = standardize_apart(FluentTerm{on("X", "Y")}, reserved);
    REQUIRE(r.term.size() == 1);
    Term x = r.term[0].args[0], y = r.term[0].args[1];
    CHECK(x.is_var());
    CHECK(y.is_var());
    CHECK(x != V("X"));
    CHECK(x != y);
    CHECK(r.map.apply(V("X")) == x);
    CHECK(r.map.apply(V("Y")) == y);

    Renaming g = standardize_apart(FluentTerm{on("a", "b")}, reserved);
    CHECK(g.term == FluentTerm{on("a", "b")});
    CHECK(g.map.empty());
  }

  TEST_CASE("fresh variables are distinct and deterministic in form") {
    Symbol a = fresh_variable("X"), b = fresh_variable("X");
    CHECK(a != b);
    CHECK(is_variable_name(symbol_name(a)));
    CHECK(is_variable_name(symbol_name(fresh_variable("lower"))));
  }
}

TEST_SUITE("properties") {
  TEST_CASE("matching is invariant under renaming the pattern") {
    gen::Rng r(11);
    gen::Signature sig = gen::small_signature();
    for (int i = 0; i < 300; ++i) {
      FluentTerm target = gen::random_term(r, sig, {"a", "b", "c"}, r.between(0, 5));
      FluentTerm pattern = gen::random_term(r, sig, {"X", "Y", "a"}, r.between(0, 3));
      Renaming ren = standardize_apart(pattern, pattern.variables());
      CHECK(ac1_match({pattern, intern("U1"), target}).size() ==
            ac1_match({ren.term, intern("U1"), target}).size());
    }
  }
}
