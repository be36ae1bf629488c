/* C interface to the planner. Every function returns a pfc_status; on failure
   pfc_last_error() describes the problem for the calling thread. Strings
   returned through char** are owned by the caller and released with
   pfc_string_free. */
#ifndef PFC_PFC_H
#define PFC_PFC_H

#include <stdint.h>

#if defined(__GNUC__)
#define PFC_API __attribute__((visibility("default")))
#else
#define PFC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pfc_status {
  PFC_OK = 0,
  PFC_ERR_SYNTAX = 1,
  PFC_ERR_VALIDATION = 2,
  PFC_ERR_IO = 3,
  PFC_ERR_UNIVERSE_TOO_LARGE = 4,
  PFC_ERR_INCONSISTENT_STATE = 5,
  PFC_ERR_INCONSISTENT_SUCCESSOR = 6,
  PFC_ERR_NO_APPLICABLE_ACTION = 7,
  PFC_ERR_ITERATION_CAP = 8,
  PFC_ERR_INVALID_ARGUMENT = 9,
  PFC_ERR_INTERNAL = 10
} pfc_status;

typedef struct pfc_problem pfc_problem;
typedef struct pfc_result pfc_result;

enum {
  PFC_LOAD_LIFT = 1,        /* objects of the initial state become variables */
  PFC_LOAD_NO_VALIDATE = 2  /* keep problems the validator would reject (for verify) */
};

typedef enum pfc_mode { PFC_MODE_FOLAO = 0, PFC_MODE_FOVI_ONLY = 1, PFC_MODE_TRIVIAL_HEURISTIC = 2 } pfc_mode;

typedef struct pfc_solve_options {
  pfc_mode mode;
  int heuristic_iterations;
  double epsilon; /* <= 0: the problem's value */
  double gamma;   /* <= 0: the problem's value */
  int max_outer;
  int inner_sweeps;
  int max_iterations;
  double time_limit; /* seconds, 0 = none */
  int eval_runs;     /* simulated runs for the reported reward, 0 = skip */
  uint64_t seed;
} pfc_solve_options;

PFC_API const char* pfc_last_error(void);
PFC_API const char* pfc_version(void);
PFC_API void pfc_string_free(char* s);

PFC_API void pfc_solve_options_init(pfc_solve_options* opts);

PFC_API pfc_status pfc_problem_load(const char* path, unsigned flags, pfc_problem** out);
PFC_API pfc_status pfc_problem_parse(const char* text, unsigned flags, pfc_problem** out);
PFC_API void pfc_problem_free(pfc_problem* p);
PFC_API pfc_status pfc_problem_render(const pfc_problem* p, char** text);

/* colors: "4:red,3:green,1:blue"; success_probability in (0,1] */
PFC_API pfc_status pfc_generate_blocksworld(int blocks, const char* colors, uint64_t seed, double success_probability,
                                    char** text);
/* Towers satisfying the colour goal of a problem, 0 when the goal is not a colour tower. */
PFC_API pfc_status pfc_goal_groundings(const pfc_problem* p, uint64_t* count);

PFC_API pfc_status pfc_solve(const pfc_problem* p, const pfc_solve_options* opts, pfc_result** out);
PFC_API void pfc_result_free(pfc_result* r);
PFC_API int pfc_result_converged(const pfc_result* r);
PFC_API double pfc_result_initial_value(const pfc_result* r);
PFC_API pfc_status pfc_result_report(const pfc_result* r, char** text);
PFC_API pfc_status pfc_result_policy(const pfc_result* r, char** text);
PFC_API pfc_status pfc_result_value(const pfc_result* r, char** text);
PFC_API pfc_status pfc_result_telemetry(const pfc_result* r, char** csv);
PFC_API pfc_status pfc_result_progress(const pfc_result* r, char** text);

/* Simulates a serialized policy from the ground initial state. */
PFC_API pfc_status pfc_evaluate(const pfc_problem* p, const char* policy_text, int runs, int horizon, uint64_t seed,
                        char** text);

/* checks: comma-separated names or NULL for all. *passed is 1 when every check passed. */
PFC_API pfc_status pfc_verify(const pfc_problem* p, const char* checks, int heuristic_iterations, char** text, int* passed);

#ifdef __cplusplus
}
#endif

#endif
