/* C interface to the bdiv library: bounded solutions of div u = f on grids.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every call returns a bdiv_status; on failure
 * bdiv_last_error() describes the problem (thread-local, valid until the
 * next failing call on the same thread). Strings returned through char**
 * are owned by the caller and released with bdiv_string_free. */
#ifndef BDIV_H
#define BDIV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BDIV_API __declspec(dllexport)
#else
#define BDIV_API __attribute__((visibility("default")))
#endif

typedef enum bdiv_status {
  BDIV_OK = 0,
  BDIV_ERR_INVALID = 1,   /* precondition violated, unknown method or norm */
  BDIV_ERR_IO = 2,        /* unreadable or malformed field file */
  BDIV_ERR_INTERNAL = 3,  /* anything else (allocation, FFT planning, ...) */
  BDIV_ERR_NULL = 4       /* a required pointer argument was NULL */
} bdiv_status;

typedef struct bdiv_field bdiv_field;        /* scalar field on a grid */
typedef struct bdiv_vector bdiv_vector;      /* d-component vector field */
typedef struct bdiv_solution bdiv_solution;  /* output of bdiv_solve */

BDIV_API const char* bdiv_version(void);
BDIV_API const char* bdiv_last_error(void);
BDIV_API void bdiv_string_free(char* s);

/* ---- fields ---------------------------------------------------------- */

/* Zero field on a grid with d axes; n, lo, hi and periodic hold d entries. */
BDIV_API bdiv_status bdiv_field_create(int d, const size_t* n, const double* lo, const double* hi,
                                       const int* periodic, bdiv_field** out);
BDIV_API bdiv_status bdiv_field_clone(const bdiv_field* f, bdiv_field** out);
BDIV_API void bdiv_field_free(bdiv_field* f);

BDIV_API bdiv_status bdiv_field_read(const char* path, bdiv_field** out);
BDIV_API bdiv_status bdiv_field_write(const bdiv_field* f, const char* path);

BDIV_API int bdiv_field_dim(const bdiv_field* f);
BDIV_API size_t bdiv_field_size(const bdiv_field* f);
/* Per-axis cell counts, bounds and periodic flags; NULL outputs are skipped. */
BDIV_API bdiv_status bdiv_field_grid(const bdiv_field* f, size_t* n, double* lo, double* hi, int* periodic);
/* Row-major values (last axis fastest). The pointer stays valid until the field is freed. */
BDIV_API double* bdiv_field_data(bdiv_field* f);
BDIV_API const double* bdiv_field_cdata(const bdiv_field* f);

BDIV_API bdiv_status bdiv_field_mean_zero(const bdiv_field* f, bdiv_field** out);
BDIV_API bdiv_status bdiv_field_integral(const bdiv_field* f, double* out);

/* ---- vector fields --------------------------------------------------- */

BDIV_API void bdiv_vector_free(bdiv_vector* v);
BDIV_API int bdiv_vector_dim(const bdiv_vector* v);
/* Copy of component i. */
BDIV_API bdiv_status bdiv_vector_component(const bdiv_vector* v, int i, bdiv_field** out);
/* Backward-difference divergence. */
BDIV_API bdiv_status bdiv_vector_divergence(const bdiv_vector* v, bdiv_field** out);
/* max over cells of the Euclidean magnitude. */
BDIV_API double bdiv_vector_max_magnitude(const bdiv_vector* v);
BDIV_API double bdiv_vector_max_abs(const bdiv_vector* v, int component);

/* ---- generators ------------------------------------------------------ */

BDIV_API bdiv_status bdiv_gen_nirenberg(size_t n, bdiv_field** out);
/* alpha * chi_{|x| <= radius} on [-half_width, half_width]^2. */
BDIV_API bdiv_status bdiv_gen_ball(double alpha, double radius, size_t n, double half_width, int periodic,
                                   bdiv_field** out);
BDIV_API bdiv_status bdiv_gen_tatar(double p, int levels, size_t n, bdiv_field** f, bdiv_field** g);

typedef enum bdiv_law { BDIV_LAW_GAUSSIAN = 0, BDIV_LAW_SPIKES = 1 } bdiv_law;

/* Seeded field on the periodic unit square (n x n). spikes/amplitude apply to BDIV_LAW_SPIKES. */
BDIV_API bdiv_status bdiv_gen_random(uint64_t seed, size_t n, bdiv_law law, size_t spikes, double amplitude,
                                     bdiv_field** out);
/* Same law on the grid of `like` (values of `like` are ignored). */
BDIV_API bdiv_status bdiv_gen_random_like(uint64_t seed, const bdiv_field* like, bdiv_law law, size_t spikes,
                                          double amplitude, bdiv_field** out);

/* ---- norms ----------------------------------------------------------- */

/* Norm names: "L<p>", "Linf", "L(<p>,<q>)", "weakL<p>", "Morrey", "TV_iso", "TV_aniso". */
BDIV_API bdiv_status bdiv_norm(const bdiv_field* f, const char* kind, double* out);

/* ---- solvers --------------------------------------------------------- */

typedef struct bdiv_solve_options {
  const char* method;   /* onestep2d disjoint2d inductive weakl2 helmholtz flambda twostep hier-p2 hier-p1 */
  double tau;           /* weakl2 threshold, > 1 */
  int max_iter;         /* weakl2 pass limit */
  double lambda;        /* flambda lambda; hier-p2 lambda_1; hier-p1 fixed lambda. <= 0 means default */
  int p;                /* flambda exponent, 1 or 2 */
  double eta;           /* hier-p2 closure constant, <= 0 estimates it */
  double gamma;         /* hier-p1 assumed admissibility constant */
  int levels;           /* hierarchy max levels */
  double stop_residual; /* hierarchy stop at ||r|| <= stop_residual ||f|| */
  int continuum;        /* helmholtz: continuum symbol instead of the discrete one */
  int strict_mean;      /* helmholtz: reject data with nonzero mean */
  long max_iters;       /* inner iteration budget of each minimization */
  double tol_objective; /* outer optimality tolerance */
  double inner_gap;     /* relative duality gap of inner solves */
} bdiv_solve_options;

/* Fills `opts` with the library defaults (method = "onestep2d"). */
BDIV_API void bdiv_solve_options_init(bdiv_solve_options* opts);

BDIV_API bdiv_status bdiv_solve(const bdiv_field* f, const bdiv_solve_options* opts, bdiv_solution** out);
BDIV_API void bdiv_solution_free(bdiv_solution* s);

BDIV_API bdiv_status bdiv_solution_u(const bdiv_solution* s, bdiv_vector** out);
/* f - div u */
BDIV_API bdiv_status bdiv_solution_residual(const bdiv_solution* s, bdiv_field** out);
BDIV_API int bdiv_solution_part_count(const bdiv_solution* s);
BDIV_API bdiv_status bdiv_solution_part(const bdiv_solution* s, int i, bdiv_field** out);
/* 1 when the method converged (complete decomposition, solver tolerance, hierarchy stop reached). */
BDIV_API int bdiv_solution_converged(const bdiv_solution* s);
/* 1 when every check of the embedded verification block passed. */
BDIV_API int bdiv_solution_verified(const bdiv_solution* s);
/* JSON report with a "verification" block. */
BDIV_API bdiv_status bdiv_solution_report_json(const bdiv_solution* s, char** out);
/* CSV axis,index,value,bound (header only for methods without certificates). */
BDIV_API bdiv_status bdiv_solution_certificates_csv(const bdiv_solution* s, char** out);
/* Per-level / per-pass / per-outer-step CSV; empty string when not applicable. */
BDIV_API bdiv_status bdiv_solution_trace_csv(const bdiv_solution* s, char** out);

/* ---- verification ---------------------------------------------------- */

/* Runs suite "fields", "norms", "explicit", "variational", "examples" or "all"
 * plus file checks on `inputs` (may be NULL when n_inputs is 0). `passed` is
 * set to 1 when every check passed; `json` receives the report. */
BDIV_API bdiv_status bdiv_verify(const char* suite, const char* const* inputs, size_t n_inputs, int* passed,
                                 char** json);

#ifdef __cplusplus
}
#endif

#endif /* BDIV_H */
