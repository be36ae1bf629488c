// pfcplan: solve, eval, verify and generate front end over the C interface.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "pfc/pfc.h"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kVerifyFailed = 2;

struct Text {
  char* p = nullptr;
  ~Text() { pfc_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ProblemPtr = std::unique_ptr<pfc_problem, decltype(&pfc_problem_free)>;
using ResultPtr = std::unique_ptr<pfc_result, decltype(&pfc_result_free)>;

int report_error(const char* what) {
  std::cerr << "pfcplan: " << what << ": " << pfc_last_error() << "\n";
  return kFailure;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "pfcplan: cannot write " << path << "\n";
    return false;
  }
  return true;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "pfcplan: cannot read " << path << "\n";
    return false;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return true;
}

ProblemPtr load(const std::string& path, unsigned flags, int& status) {
  pfc_problem* p = nullptr;
  if (pfc_problem_load(path.c_str(), flags, &p) != PFC_OK) status = report_error(path.c_str());
  return ProblemPtr(p, &pfc_problem_free);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order MDP planner over probabilistic fluent calculus problems"};
  app.require_subcommand(1);

  std::string problem_path;
  bool lift = false;

  auto* solve = app.add_subcommand("solve", "Solve a problem with FOLAO* or plain FOVI");
  pfc_solve_options so;
  pfc_solve_options_init(&so);
  std::string mode = "folao", output, telemetry;
  bool quiet = false;
  solve->add_option("--problem", problem_path, "Problem file (.pfc)")->required();
  solve->add_option("--mode", mode, "folao, fovi-only or trivial-heuristic")
      ->check(CLI::IsMember({"folao", "fovi-only", "trivial-heuristic"}));
  solve->add_option("--epsilon", so.epsilon, "Convergence threshold (default: problem's)");
  solve->add_option("--gamma", so.gamma, "Discount factor (default: problem's)");
  solve->add_option("--heuristic-iters", so.heuristic_iterations, "FOVI sweeps building the heuristic")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--max-outer", so.max_outer, "Cap on FOLAO* outer iterations")->check(CLI::PositiveNumber);
  solve->add_option("--inner-sweeps", so.inner_sweeps, "FOVI sweeps per outer iteration")->check(CLI::PositiveNumber);
  solve->add_option("--max-iterations", so.max_iterations, "Cap on fovi-only sweeps")->check(CLI::PositiveNumber);
  solve->add_option("--time-limit", so.time_limit, "Wall-clock limit in seconds, 0 for none");
  solve->add_option("--runs", so.eval_runs, "Simulated runs for the reported reward")->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", so.seed, "Simulation seed");
  solve->add_option("--output", output, "Directory for policy.pfc, value.pfc, report.txt, telemetry.csv");
  solve->add_option("--telemetry", telemetry, "Write the per-sweep CSV here");
  solve->add_flag("--lift", lift, "Treat initial-state objects as variables");
  solve->add_flag("--quiet", quiet, "Do not print progress lines");

  auto* eval = app.add_subcommand("eval", "Simulate a saved policy from the ground initial state");
  std::string policy_path;
  int runs = 30, horizon = 1000;
  std::uint64_t seed = 1;
  eval->add_option("--problem", problem_path, "Problem file (.pfc)")->required();
  eval->add_option("--policy", policy_path, "Policy file written by solve")->required();
  eval->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
  eval->add_option("--horizon", horizon, "Step cap per run")->check(CLI::PositiveNumber);
  eval->add_option("--seed", seed, "Seed of the mt19937_64 streams");
  eval->add_flag("--lift", lift, "Load the problem lifted");

  auto* verify = app.add_subcommand("verify", "Check lifted computation against the ground oracle");
  std::vector<std::string> checks;
  int verify_iters = 20;
  verify->add_option("--problem", problem_path, "Problem file (.pfc)")->required();
  verify->add_option("--check", checks,
                     "model-validation, subsumption-soundness, normalization-semantics, heuristic-admissibility, "
                     "value-agreement (repeatable; default all)")
      ->delimiter(',');
  verify->add_option("--heuristic-iters", verify_iters, "Largest heuristic sweep count checked")
      ->check(CLI::NonNegativeNumber);
  verify->add_flag("--lift", lift, "Load the problem lifted");

  auto* generate = app.add_subcommand("generate", "Write a random coloured Blocksworld problem");
  int blocks = 0;
  std::string colors;
  double success = 0.75;
  std::uint64_t gen_seed = 1;
  std::string gen_output;
  generate->add_option("--blocks", blocks, "Number of blocks")->required()->check(CLI::PositiveNumber);
  generate->add_option("--colors", colors, "Multiplicities, e.g. 4:red,3:green,1:blue")->required();
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--success-prob", success, "Success probability of pickup and putdown");
  generate->add_option("--output", gen_output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kFailure;
  }

  int status = kOk;
  unsigned flags = lift ? PFC_LOAD_LIFT : 0u;

  if (*generate) {
    Text t;
    if (pfc_generate_blocksworld(blocks, colors.c_str(), gen_seed, success, &t.p) != PFC_OK)
      return report_error("generate");
    if (gen_output.empty()) {
      std::cout << t.str();
      return kOk;
    }
    return write_file(gen_output, t.str()) ? kOk : kFailure;
  }

  if (*solve) {
    so.mode = mode == "fovi-only" ? PFC_MODE_FOVI_ONLY
              : mode == "trivial-heuristic" ? PFC_MODE_TRIVIAL_HEURISTIC
                                            : PFC_MODE_FOLAO;
    ProblemPtr p = load(problem_path, flags, status);
    if (!p) return status;
    pfc_result* raw = nullptr;
    if (pfc_solve(p.get(), &so, &raw) != PFC_OK) return report_error("solve");
    ResultPtr r(raw, &pfc_result_free);
    Text report, policy, value, csv, progress;
    if (pfc_result_report(r.get(), &report.p) || pfc_result_policy(r.get(), &policy.p) ||
        pfc_result_value(r.get(), &value.p) || pfc_result_telemetry(r.get(), &csv.p) ||
        pfc_result_progress(r.get(), &progress.p))
      return report_error("solve");
    if (!quiet) std::cerr << progress.str();
    std::cout << report.str();
    if (!output.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(output, ec);
      namespace fs = std::filesystem;
      if (!write_file((fs::path(output) / "policy.pfc").string(), policy.str()) ||
          !write_file((fs::path(output) / "value.pfc").string(), value.str()) ||
          !write_file((fs::path(output) / "report.txt").string(), report.str()) ||
          !write_file((fs::path(output) / "telemetry.csv").string(), csv.str()))
        return kFailure;
    }
    if (!telemetry.empty() && !write_file(telemetry, csv.str())) return kFailure;
    if (!pfc_result_converged(r.get())) {
      std::cerr << "pfcplan: solve: stopped before convergence (iteration cap or time limit)\n";
      return kFailure;
    }
    return kOk;
  }

  if (*eval) {
    std::string text;
    if (!read_file(policy_path, text)) return kFailure;
    ProblemPtr p = load(problem_path, flags, status);
    if (!p) return status;
    Text out;
    if (pfc_evaluate(p.get(), text.c_str(), runs, horizon, seed, &out.p) != PFC_OK) return report_error("eval");
    std::cout << out.str();
    return kOk;
  }

  if (*verify) {
    ProblemPtr p = load(problem_path, flags | PFC_LOAD_NO_VALIDATE, status);
    if (!p) return status;
    std::string joined;
    for (const auto& c : checks) joined += (joined.empty() ? "" : ",") + c;
    Text out;
    int passed = 0;
    if (pfc_verify(p.get(), joined.c_str(), verify_iters, &out.p, &passed) != PFC_OK) return report_error("verify");
    std::cout << out.str();
    return passed ? kOk : kVerifyFailed;
  }
  return status;
}
