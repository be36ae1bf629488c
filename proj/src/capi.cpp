#include "pfc/pfc.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "pfc/blocksworld.hpp"
#include "pfc/error.hpp"
#include "pfc/policy_io.hpp"
#include "pfc/run.hpp"
#include "pfc/verify.hpp"

struct pfc_problem {
  pfc::ProblemSpec spec;
  pfc::Model model;
  bool lift = false;
};

struct pfc_result {
  pfc::SolveOutcome outcome;
};

namespace {

thread_local std::string last_error;

pfc_status status_of(pfc::ErrorKind k) {
  switch (k) {
    case pfc::ErrorKind::Syntax: return PFC_ERR_SYNTAX;
    case pfc::ErrorKind::Validation: return PFC_ERR_VALIDATION;
    case pfc::ErrorKind::Io: return PFC_ERR_IO;
    case pfc::ErrorKind::UniverseTooLarge: return PFC_ERR_UNIVERSE_TOO_LARGE;
    case pfc::ErrorKind::InconsistentState: return PFC_ERR_INCONSISTENT_STATE;
    case pfc::ErrorKind::InconsistentSuccessor: return PFC_ERR_INCONSISTENT_SUCCESSOR;
    case pfc::ErrorKind::NoApplicableAction: return PFC_ERR_NO_APPLICABLE_ACTION;
    case pfc::ErrorKind::IterationCap: return PFC_ERR_ITERATION_CAP;
    case pfc::ErrorKind::InvalidArgument: return PFC_ERR_INVALID_ARGUMENT;
  }
  return PFC_ERR_INTERNAL;
}

template <class F>
pfc_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return PFC_OK;
  } catch (const pfc::Error& e) {
    last_error = std::string(pfc::error_kind_name(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  }
  return PFC_ERR_INTERNAL;
}

pfc_status require(bool ok, const char* what) {
  if (ok) return PFC_OK;
  last_error = std::string("invalid-argument: ") + what;
  return PFC_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

pfc_status make_problem(pfc::ProblemSpec spec, unsigned flags, pfc_problem** out) {
  return guarded([&] {
    auto p = std::make_unique<pfc_problem>();
    p->lift = flags & PFC_LOAD_LIFT;
    p->model = pfc::build_model(spec, {p->lift});
    p->spec = std::move(spec);
    *out = p.release();
  });
}

}  // namespace

extern "C" {

const char* pfc_last_error(void) { return last_error.c_str(); }
const char* pfc_version(void) { return "1.0.0"; }
void pfc_string_free(char* s) { std::free(s); }

void pfc_solve_options_init(pfc_solve_options* o) {
  if (!o) return;
  o->mode = PFC_MODE_FOLAO;
  o->heuristic_iterations = 20;
  o->epsilon = 0;
  o->gamma = 0;
  o->max_outer = 500;
  o->inner_sweeps = 1;
  o->max_iterations = 1000;
  o->time_limit = 0;
  o->eval_runs = 30;
  o->seed = 1;
}

pfc_status pfc_problem_load(const char* path, unsigned flags, pfc_problem** out) {
  if (auto s = require(path && out, "null argument")) return s;
  pfc::ProblemSpec spec;
  pfc::ParseOptions po;
  po.validate = !(flags & PFC_LOAD_NO_VALIDATE);
  if (auto s = guarded([&] { spec = pfc::load_problem(path, po); })) return s;
  return make_problem(std::move(spec), flags, out);
}

pfc_status pfc_problem_parse(const char* text, unsigned flags, pfc_problem** out) {
  if (auto s = require(text && out, "null argument")) return s;
  pfc::ProblemSpec spec;
  pfc::ParseOptions po;
  po.validate = !(flags & PFC_LOAD_NO_VALIDATE);
  if (auto s = guarded([&] { spec = pfc::parse_problem(text, po); })) return s;
  return make_problem(std::move(spec), flags, out);
}

void pfc_problem_free(pfc_problem* p) { delete p; }

pfc_status pfc_problem_render(const pfc_problem* p, char** text) {
  if (auto s = require(p && text, "null argument")) return s;
  return guarded([&] { *text = dup(pfc::render_problem(p->spec)); });
}

pfc_status pfc_generate_blocksworld(int blocks, const char* colors, uint64_t seed, double success_probability,
                                    char** text) {
  if (auto s = require(colors && text, "null argument")) return s;
  return guarded([&] {
    pfc::BWGeneratorConfig cfg;
    cfg.blocks = blocks;
    cfg.colors = pfc::parse_color_spec(colors);
    cfg.seed = seed;
    cfg.success_probability = success_probability;
    *text = dup(pfc::render_problem(pfc::generate_colored_bw(cfg)));
  });
}

pfc_status pfc_goal_groundings(const pfc_problem* p, uint64_t* count) {
  if (auto s = require(p && count, "null argument")) return s;
  return guarded([&] { *count = pfc::colour_goal_groundings(p->spec).value_or(0); });
}

pfc_status pfc_solve(const pfc_problem* p, const pfc_solve_options* o, pfc_result** out) {
  if (auto s = require(p && o && out, "null argument")) return s;
  return guarded([&] {
    pfc::SolveOptions so;
    switch (o->mode) {
      case PFC_MODE_FOLAO: so.mode = pfc::SolveMode::Folao; break;
      case PFC_MODE_FOVI_ONLY: so.mode = pfc::SolveMode::FoviOnly; break;
      case PFC_MODE_TRIVIAL_HEURISTIC: so.mode = pfc::SolveMode::TrivialHeuristic; break;
      default: throw pfc::Error(pfc::ErrorKind::InvalidArgument, "unknown mode");
    }
    so.heuristic_iterations = o->heuristic_iterations;
    if (o->epsilon > 0) so.epsilon = o->epsilon;
    if (o->gamma > 0) so.gamma = o->gamma;
    so.max_outer = o->max_outer;
    so.inner_sweeps = o->inner_sweeps;
    so.max_iterations = o->max_iterations;
    so.time_limit = o->time_limit;
    so.eval_runs = o->eval_runs;
    so.seed = o->seed;
    auto r = std::make_unique<pfc_result>();
    r->outcome = pfc::run_solve(p->spec, p->model, so);
    *out = r.release();
  });
}

void pfc_result_free(pfc_result* r) { delete r; }
int pfc_result_converged(const pfc_result* r) { return r && r->outcome.report.converged ? 1 : 0; }
double pfc_result_initial_value(const pfc_result* r) { return r ? r->outcome.report.value_init : 0.0; }

pfc_status pfc_result_report(const pfc_result* r, char** text) {
  if (auto s = require(r && text, "null argument")) return s;
  return guarded([&] { *text = dup(pfc::render_report(r->outcome.report)); });
}

pfc_status pfc_result_policy(const pfc_result* r, char** text) {
  if (auto s = require(r && text, "null argument")) return s;
  return guarded([&] { *text = dup(pfc::render_policy(r->outcome.policy)); });
}

pfc_status pfc_result_value(const pfc_result* r, char** text) {
  if (auto s = require(r && text, "null argument")) return s;
  return guarded([&] { *text = dup(pfc::render_value(r->outcome.value)); });
}

pfc_status pfc_result_telemetry(const pfc_result* r, char** csv) {
  if (auto s = require(r && csv, "null argument")) return s;
  return guarded([&] { *csv = dup(r->outcome.telemetry); });
}

pfc_status pfc_result_progress(const pfc_result* r, char** text) {
  if (auto s = require(r && text, "null argument")) return s;
  return guarded([&] {
    std::string o;
    for (const auto& l : r->outcome.progress) o += l + "\n";
    *text = dup(o);
  });
}

pfc_status pfc_evaluate(const pfc_problem* p, const char* policy_text, int runs, int horizon, uint64_t seed,
                        char** text) {
  if (auto s = require(p && policy_text && text, "null argument")) return s;
  if (auto s = require(runs > 0 && horizon > 0, "runs and horizon must be positive")) return s;
  return guarded([&] {
    if (!p->model.ground_init) throw pfc::Error(pfc::ErrorKind::InvalidArgument, "the initial state is not ground");
    pfc::Policy pi = pfc::parse_policy(policy_text);
    pfc::SimulationConfig sc;
    sc.runs = runs;
    sc.horizon = horizon;
    sc.seed = seed;
    pfc::SimulationStats st = pfc::simulate_policy(p->model, pi, *p->model.ground_init, sc);
    std::ostringstream o;
    o.precision(10);
    o << "total_av_reward=" << st.mean << "\n" << pfc::format_stats(st) << "\n";
    *text = dup(o.str());
  });
}

pfc_status pfc_verify(const pfc_problem* p, const char* checks, int heuristic_iterations, char** text, int* passed) {
  if (auto s = require(p && text && passed, "null argument")) return s;
  return guarded([&] {
    pfc::VerifyOptions vo;
    vo.heuristic_iterations = heuristic_iterations;
    vo.lift = p->lift;
    if (checks && *checks) {
      std::string c = checks;
      std::size_t i = 0;
      while (i <= c.size()) {
        std::size_t j = c.find(',', i);
        if (j == std::string::npos) j = c.size();
        if (j > i) vo.checks.push_back(c.substr(i, j - i));
        i = j + 1;
      }
    }
    auto results = pfc::run_verify(p->spec, vo);
    *passed = 1;
    for (const auto& r : results)
      if (!r.passed) *passed = 0;
    *text = dup(pfc::render_checks(results));
  });
}

}  // extern "C"
