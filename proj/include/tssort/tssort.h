/* tssort — cycle-aware sortability measurement and structure-learning
 * baselines for multivariate time series.
 *
 * C API over an opaque-handle core. Every function returning int yields
 * TSSORT_OK (0) on success or an error status; tssort_last_error() holds a
 * thread-local message for the most recent failure on the calling thread.
 * Handles are created by the library and released with the matching _free
 * function; freeing NULL is a no-op.
 */
#ifndef TSSORT_H
#define TSSORT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TSSORT_API __declspec(dllexport)
#else
#define TSSORT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------ status */

enum tssort_status {
  TSSORT_OK = 0,
  TSSORT_E_INVALID = 1,       /* invalid argument or config */
  TSSORT_E_IO = 2,            /* file missing / unreadable / unwritable */
  TSSORT_E_PARSE = 3,         /* malformed CSV or JSON */
  TSSORT_E_DOMAIN = 4,        /* degenerate data, singularity, overflow */
  TSSORT_E_NO_PAIRS = 5,      /* sortability undefined: empty pair set */
  TSSORT_E_UNSTABLE = 6,      /* non-stationary process */
  TSSORT_E_NOT_CONVERGED = 7, /* reserved for strict callers */
  TSSORT_E_INTERNAL = 8
};

TSSORT_API const char* tssort_version(void);
TSSORT_API const char* tssort_last_error(void);
TSSORT_API void tssort_string_free(char* s);

/* Derives a child seed from (base, stream); use to give each trial,
 * realization or method call its own deterministic stream. */
TSSORT_API uint64_t tssort_derive_seed(uint64_t base, uint64_t stream);

/* ------------------------------------------------------------------- enums */

enum tssort_criterion { TSSORT_CRI_VARIANCE = 0, TSSORT_CRI_R2 = 1 };

enum tssort_pair_mode {
  TSSORT_MODE_ADMISSIBLE = 0,    /* pairs (i,j): i => j and j =/=> i */
  TSSORT_MODE_ALL_CONNECTED = 1, /* pairs (i,j): i => j */
  TSSORT_MODE_PATH_WEIGHTED = 2  /* classic path-weighted score; DAGs only */
};

enum tssort_scope {
  TSSORT_SCOPE_ALL = 0,
  TSSORT_SCOPE_CONTEMP = 1,
  TSSORT_SCOPE_LAGGED = 2
};

enum tssort_order {
  TSSORT_ORDER_VARIANCE = 0,
  TSSORT_ORDER_R2 = 1,
  TSSORT_ORDER_RANDOM = 2,
  TSSORT_ORDER_VARIANCE_REVERSED = 3
};

enum tssort_eval_mode {
  TSSORT_EVAL_OVERALL = 0,
  TSSORT_EVAL_CONTEMP = 1,
  TSSORT_EVAL_LAGGED = 2,
  TSSORT_EVAL_SUMMARY = 3
};

/* ----------------------------------------------------------------- handles */

typedef struct tssort_graph tssort_graph;     /* weighted ts-graph */
typedef struct tssort_summary tssort_summary; /* boolean summary graph */
typedef struct tssort_panel tssort_panel;     /* T x d observation matrix */

/* ------------------------------------------------------------------ graphs */

typedef struct tssort_gen_config {
  int32_t d;
  double contemp_degree; /* expected contemporaneous mean degree d_c */
  double lag_degree;     /* expected per-lag mean degree d_l */
  int32_t tau_max;
  double weight_decay;   /* delta > 1 */
  double contemp_low, contemp_high; /* |coefficient| interval, lag 0 */
  double lag_low, lag_high;         /* base |coefficient| interval, lag 1 */
} tssort_gen_config;

TSSORT_API void tssort_gen_config_init(tssort_gen_config* cfg);

TSSORT_API int tssort_graph_generate(const tssort_gen_config* cfg, uint64_t seed,
                                     tssort_graph** out);
TSSORT_API int tssort_graph_load_json(const char* path, tssort_graph** out);
TSSORT_API int tssort_graph_save_json(const tssort_graph* g, const char* path);
TSSORT_API int tssort_graph_dims(const tssort_graph* g, int32_t* d, int32_t* tau_max);
/* 1 if the companion spectral radius is < 1 - 1e-6, else 0. */
TSSORT_API int tssort_graph_is_stable(const tssort_graph* g, int32_t* stable);
/* 1 when the contemporaneous slice of a loaded graph is acyclic. */
TSSORT_API int tssort_graph_wc_acyclic(const tssort_graph* g, int32_t* acyclic);
TSSORT_API void tssort_graph_free(tssort_graph* g);

TSSORT_API int tssort_summary_from_graph(const tssort_graph* g, int scope,
                                         tssort_summary** out);
TSSORT_API int tssort_summary_load_csv(const char* path, tssort_summary** out);
TSSORT_API int tssort_summary_save_csv(const tssort_summary* s, const char* path);
TSSORT_API int tssort_summary_dims(const tssort_summary* s, int32_t* d);
TSSORT_API void tssort_summary_free(tssort_summary* s);

/* ------------------------------------------------------------------ panels */

typedef struct tssort_sim_config {
  int64_t n;       /* samples kept */
  int64_t burn_in; /* discarded start-up steps */
  double noise_std; /* uniform per-node noise std; overridden by the array */
  const double* noise_std_per_node; /* optional, length d */
} tssort_sim_config;

TSSORT_API void tssort_sim_config_init(tssort_sim_config* cfg);

TSSORT_API int tssort_simulate(const tssort_graph* g, const tssort_sim_config* cfg,
                               uint64_t seed, tssort_panel** out);
TSSORT_API int tssort_panel_load_csv(const char* path, tssort_panel** out);
TSSORT_API int tssort_panel_save_csv(const tssort_panel* p, const char* path);
TSSORT_API int tssort_panel_dims(const tssort_panel* p, int64_t* rows, int32_t* cols);
TSSORT_API int tssort_panel_standardize(const tssort_panel* p, tssort_panel** out);
TSSORT_API void tssort_panel_free(tssort_panel* p);

/* ------------------------------------------------------------- sortability */

typedef struct tssort_sortability_report {
  double score;
  int64_t pairs_total;
  int64_t pairs_increasing;
  int64_t pairs_tied;
  int32_t criterion; /* tssort_criterion */
  int32_t mode;      /* tssort_pair_mode */
} tssort_sortability_report;

/* tau_max is only used by the R2 criterion (lagged regressor depth). */
TSSORT_API int tssort_sortability(const tssort_panel* p, const tssort_summary* s,
                                  int criterion, int mode, int32_t tau_max,
                                  tssort_sortability_report* out);
/* Renders the report as a JSON object; free with tssort_string_free. */
TSSORT_API int tssort_sortability_report_json(const tssort_sortability_report* r,
                                              char** json_out);

/* ----------------------------------------------------------------- fitting */

typedef struct tssort_dyno_config {
  double lambda1;
  double lambda2;
  double threshold;
  int32_t max_outer;
  double h_tol;
  double rho_max;
} tssort_dyno_config;

typedef struct tssort_dyno_result {
  double h_value;
  int32_t outer_iterations;
  int32_t converged;
} tssort_dyno_result;

TSSORT_API void tssort_dyno_config_init(tssort_dyno_config* cfg);

TSSORT_API int tssort_fit_sortnregress(const tssort_panel* p, int32_t tau_max, int order,
                                       uint64_t seed, tssort_graph** out);
/* Returns TSSORT_OK with result->converged == 0 when the acyclicity
 * constraint was not met within the budget (best iterate still returned). */
TSSORT_API int tssort_fit_dynotears(const tssort_panel* p, int32_t tau_max,
                                    const tssort_dyno_config* cfg, tssort_graph** out,
                                    tssort_dyno_result* result);

/* -------------------------------------------------------------- evaluation */

typedef struct tssort_eval_report {
  int64_t tp, fp, fn;
  double f1;
  int32_t mode; /* tssort_eval_mode */
} tssort_eval_report;

/* Binarizes both graphs (|w| > threshold) and compares in the given mode. */
TSSORT_API int tssort_evaluate(const tssort_graph* est, double est_threshold,
                               const tssort_graph* truth, double truth_threshold, int mode,
                               tssort_eval_report* out);
/* Summary-mode comparison against a boolean summary truth. */
TSSORT_API int tssort_evaluate_vs_summary(const tssort_graph* est, double est_threshold,
                                          const tssort_summary* truth,
                                          tssort_eval_report* out);
TSSORT_API int tssort_eval_report_json(const tssort_eval_report* r, char** json_out);

/* ------------------------------------------------------------- experiments */

typedef struct tssort_scaling_config {
  const int32_t* d_list;
  int32_t n_d;
  int32_t graphs_per_d;
  int64_t n;
  int64_t burn_in;
  double noise_low; /* per-node noise stds drawn from [noise_low, noise_high] */
  double noise_high;
  double contemp_degree;
  double lag_degree;
  int32_t tau_max;
  double weight_decay;
  double contemp_low, contemp_high; /* |coefficient| interval, lag 0 */
  double lag_low, lag_high;         /* base |coefficient| interval, lag 1 */
  int32_t pair_mode;                /* tssort_pair_mode used for the scores */
  uint64_t base_seed;
  int32_t jobs;
} tssort_scaling_config;

typedef struct tssort_grid_config {
  int32_t d;
  const double* degrees; /* shared value list for d_c and d_l */
  int32_t n_degrees;
  int32_t trials;
  int64_t n;
  int64_t burn_in;
  double noise_low;
  double noise_high;
  int32_t tau_max;
  double weight_decay;
  double contemp_low, contemp_high;
  double lag_low, lag_high;
  int32_t pair_mode;
  uint64_t base_seed;
  int32_t jobs;
} tssort_grid_config;

typedef struct tssort_binned_config {
  tssort_gen_config gen;
  int64_t n;
  int64_t burn_in;
  double noise_low;  /* per-node noise stds drawn from [noise_low, noise_high] */
  double noise_high;
  const double* bin_edges; /* n_bins + 1 ascending values from 0 to 1 */
  int32_t n_bins;
  int32_t m; /* datasets per bin */
  int32_t criterion;
  int32_t pair_mode; /* pair set used when binning draws */
  const char* const* methods;
  int32_t n_methods;
  int64_t max_attempts_per_bin; /* 0 -> 200 * m */
  uint64_t base_seed;
  int32_t jobs;
  double eval_threshold;
  tssort_dyno_config dyno;
} tssort_binned_config;

TSSORT_API void tssort_scaling_config_init(tssort_scaling_config* cfg);
TSSORT_API void tssort_grid_config_init(tssort_grid_config* cfg);
TSSORT_API void tssort_binned_config_init(tssort_binned_config* cfg);

/* Each writes trials.csv + summary.json (plus study-specific tables) under
 * out_dir; byte-identical for identical configs and seeds, at any job count. */
TSSORT_API int tssort_bench_scaling(const tssort_scaling_config* cfg, const char* out_dir);
TSSORT_API int tssort_bench_grid(const tssort_grid_config* cfg, const char* out_dir);
TSSORT_API int tssort_bench_binned(const tssort_binned_config* cfg, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TSSORT_H */
