#ifndef TAILGAME_TAILGAME_H
#define TAILGAME_TAILGAME_H

#include <stddef.h>

#if defined(_WIN32)
#define TG_API __declspec(dllexport)
#else
#define TG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tg_status {
  TG_OK = 0,
  TG_INVALID_INPUT,
  TG_PRECONDITION_VIOLATION,
  TG_RANGE_ERROR,
  TG_OVERFLOW_ERROR,
  TG_EMPTY_INPUT,
  TG_DEGENERATE_DATA,
  TG_DEGREE_TOO_LARGE,
  TG_ZERO_MASS,
  TG_NO_CONVERGENCE,
  TG_SUPPORT_MISMATCH,
  TG_PARTITION_MISMATCH,
  TG_NOT_COMPARABLE,
  TG_DIMENSION_MISMATCH,
  TG_BAD_CUTPOINTS,
  TG_NUMERICAL_FAILURE,
  TG_INFEASIBLE,
  TG_REQUIRES_CATEGORICAL,
  TG_PARSE_ERROR,
  TG_INTERNAL_ERROR
} tg_status;

/* Order of f relative to g. */
typedef enum tg_order { TG_LESS = -1, TG_EQUAL = 0, TG_GREATER = 1 } tg_order;

typedef struct tg_density tg_density;
typedef struct tg_target tg_target;
typedef struct tg_game tg_game;

/* Message of the last failure on the calling thread; empty after success. */
TG_API const char* tg_last_error(void);
TG_API const char* tg_status_name(tg_status status);
/* 0 ok, 1 input error, 2 no convergence, 3 numerical failure. */
TG_API int tg_exit_code(tg_status status);

/* Every char* returned through an out parameter is released here. */
TG_API void tg_string_free(char* s);

/* Densities ------------------------------------------------------------- */

TG_API tg_status tg_density_from_json(const char* json, tg_density** out);
TG_API tg_status tg_density_to_json(const tg_density* f, char** out_json);
TG_API void tg_density_free(tg_density* f);
TG_API tg_status tg_density_support(const tg_density* f, double* a, double* b);
TG_API tg_status tg_density_eval(const tg_density* f, double x, double* out);
TG_API tg_status tg_density_moment(const tg_density* f, int n, double* out);
/* Writes {"valid", "mass", "min_value", "violations"}. */
TG_API tg_status tg_density_validate(const tg_density* f, int* valid, char** out_json);

/* Approximation targets ------------------------------------------------- */

TG_API tg_status tg_target_from_density(const tg_density* f, tg_target** out);
/* bandwidth may be NULL for the default rule. */
TG_API tg_status tg_target_from_samples(const double* samples, size_t n, const double* bandwidth,
                                        tg_target** out);
TG_API void tg_target_free(tg_target* t);
TG_API tg_status tg_target_support(const tg_target* t, double* a, double* b);
TG_API tg_status tg_target_eval(const tg_target* t, double x, double* out);

/* One real per line, '#' comments. Release *out with tg_doubles_free. */
TG_API tg_status tg_parse_samples(const char* text, double** out, size_t* n);
TG_API void tg_doubles_free(double* p);

/* grid_size <= 0 selects the default certification grid. On success *out
 * receives the fitted density; *out_json the full result with metadata and
 * trace. Either may be NULL. */
TG_API tg_status tg_degree_search(const tg_target* t, double epsilon, int grid_size, tg_density** out,
                                  char** out_json);
TG_API tg_status tg_approximate_at(const tg_target* t, int degree, double epsilon, int grid_size,
                                   tg_density** out, char** out_json);

/* Tail order ------------------------------------------------------------ */

TG_API tg_status tg_tail_compare(const tg_density* f, const tg_density* g, tg_order* out);
/* {"order", "witness", "dominance_index"}; dominance is omitted for equal
 * densities and null when inconclusive up to n_max. */
TG_API tg_status tg_compare_report(const tg_density* f, const tg_density* g, int n_max, char** out_json);
/* *found = 0 when inconclusive. Requires f below g. */
TG_API tg_status tg_moment_dominance_index(const tg_density* f, const tg_density* g, int n_max, int* found,
                                           int* index);
/* masses must hold n_cut + 1 entries. */
TG_API tg_status tg_discretize(const tg_density* f, const double* cutpoints, size_t n_cut, double* masses);
/* {"cutpoints", "masses"}; with as_quantiles != 0 the values are quantile
 * levels turned into cutpoints first. */
TG_API tg_status tg_discretize_report(const tg_density* f, const double* values, size_t n, int as_quantiles,
                                      char** out_json);
TG_API tg_status tg_quantile_cutpoints(const tg_density* f, const double* levels, size_t n, double* out);
/* Categorical comparison from the last coordinate down. */
TG_API tg_status tg_categorical_compare(const double* p, const double* q, size_t k, tg_order* out);

/* Matrix games ---------------------------------------------------------- */

/* Row-major payoff; rows maximize. x and y need rows and cols entries. */
TG_API tg_status tg_solve_zero_sum(const double* payoff, size_t rows, size_t cols, double* x, double* y,
                                   double* value);

TG_API tg_status tg_game_from_json(const char* json, tg_game** out);
TG_API void tg_game_free(tg_game* g);
TG_API tg_status tg_game_shape(const tg_game* g, size_t* rows, size_t* cols, size_t* stages);
TG_API tg_status tg_game_discretize(const tg_game* g, const double* cutpoints, size_t n_cut, tg_game** out);
/* Equilibrium, stage log, and both verification reports. */
TG_API tg_status tg_game_solve(const tg_game* g, char** out_json);
TG_API tg_status tg_game_fictitious_play(const tg_game* g, double epsilon, long long max_rounds,
                                         char** out_json);
TG_API tg_status tg_game_verify(const tg_game* g, const double* x, size_t nx, const double* y, size_t ny,
                                char** out_json);
/* Writes the categorical coordinates (or stage values) of the mixed payoff;
 * out must hold `stages` entries. */
TG_API tg_status tg_game_mixed_payoff(const tg_game* g, const double* x, size_t nx, const double* y, size_t ny,
                                      double* out);

#ifdef __cplusplus
}
#endif

#endif
