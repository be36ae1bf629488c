#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfc/problem.hpp"

namespace props {

struct Report {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::string first_failure;
  std::string note;

  bool ok() const { return failures == 0 && cases > 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  std::string summary() const;
};

// Library matcher against raw injection enumeration, patterns and targets of at most six fluents.
Report matching_completeness(long cases, std::uint64_t seed);

// Whenever a witness is returned, the ground interpretation of the subsumed
// state lies inside the other's over a three-object universe. Counts only
// pairs with a witness, generating until `cases` of them were checked.
Report subsumption_soundness(long cases, std::uint64_t seed);

// Lifted successors against ground execution on every reachable ground state
// of small coloured blocksworld instances.
Report successor_agreement();

// render then parse reproduces generated problems exactly.
Report parser_round_trip(long cases, std::uint64_t seed);

// normalize keeps every ground value and is idempotent, for random value
// functions over every ground state of a three-object universe.
Report normalization_semantics(long cases, std::uint64_t seed);

// Coloured blocksworld instances of one to three blocks.
std::vector<pfc::ProblemSpec> small_blocksworlds();

}  // namespace props
