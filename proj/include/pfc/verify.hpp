#pragma once

#include <string>
#include <vector>

#include "pfc/model.hpp"
#include "pfc/problem.hpp"

namespace pfc {

// model-validation, subsumption-soundness, normalization-semantics,
// heuristic-admissibility, value-agreement
const std::vector<std::string>& verify_check_names();

struct VerifyOptions {
  std::vector<std::string> checks;  // empty runs all
  int heuristic_iterations = 20;
  double tolerance = 1e-3;
  std::size_t ground_state_cap = 20000;
  bool lift = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// `spec` may be unvalidated; problems the validator rejects fail model-validation.
std::vector<CheckResult> run_verify(const ProblemSpec& spec, const VerifyOptions& opts);

std::string render_checks(const std::vector<CheckResult>& results);

}  // namespace pfc
