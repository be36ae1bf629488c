#include <doctest.h>

#include "properties.hpp"

namespace {

void expect(const props::Report& r, long min_cases) {
  INFO(r.summary());
  CHECK(r.failures == 0);
  CHECK(r.cases >= min_cases);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("library matching finds exactly the brute-force embeddings") {
    expect(props::matching_completeness(1000, 101), 1000);
  }

  TEST_CASE("subsumption witnesses imply inclusion of ground interpretations") {
    expect(props::subsumption_soundness(1000, 102), 1000);
  }

  TEST_CASE("lifted successors agree with ground execution") { expect(props::successor_agreement(), 1); }

  TEST_CASE("generated problems survive render and parse") { expect(props::parser_round_trip(1000, 103), 1000); }

  TEST_CASE("normalization preserves ground values and is idempotent") {
    expect(props::normalization_semantics(300, 104), 300);
  }
}
