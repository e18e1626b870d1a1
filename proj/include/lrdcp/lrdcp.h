/* C interface to the lrdcp change-point library.
 *
 * Every function returns an lrdcp_status. On failure the message is available
 * from lrdcp_last_error() until the next call on the same thread. Strings
 * returned through char** are owned by the caller and must be released with
 * lrdcp_string_free(). */
#ifndef LRDCP_LRDCP_H
#define LRDCP_LRDCP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(LRDCP_BUILDING_LIBRARY)
#define LRDCP_API __attribute__((visibility("default")))
#else
#define LRDCP_API
#endif

typedef enum {
  LRDCP_OK = 0,
  LRDCP_ERR_DOMAIN = 1,      /* precondition on a parameter violated */
  LRDCP_ERR_INVALID_ARG = 2, /* null pointer or malformed option */
  LRDCP_ERR_NUMERIC = 3,     /* numerical procedure failed */
  LRDCP_ERR_IO = 4,
  LRDCP_ERR_PARSE = 5,       /* malformed input file or text */
  LRDCP_ERR_INTERNAL = 6
} lrdcp_status;

typedef enum { LRDCP_MODEL_FGN = 0, LRDCP_MODEL_FARIMA00 = 1, LRDCP_MODEL_FARIMA10 = 2, LRDCP_MODEL_AR1 = 3 } lrdcp_model_kind;

typedef struct {
  lrdcp_model_kind kind;
  double hurst; /* FGN */
  double d;     /* FARIMA00, FARIMA10 */
  double a1;    /* FARIMA10, AR1 */
} lrdcp_model;

typedef enum { LRDCP_STAT_KS = 0, LRDCP_STAT_CVM = 1, LRDCP_STAT_CUSUM = 2, LRDCP_STAT_WILCOXON = 3 } lrdcp_stat;

typedef struct lrdcp_series lrdcp_series;
typedef struct lrdcp_table lrdcp_table;

LRDCP_API const char* lrdcp_version(void);
LRDCP_API const char* lrdcp_last_error(void);
LRDCP_API void lrdcp_string_free(char* text);
/* Writes text through a sibling temporary file and a rename. */
LRDCP_API lrdcp_status lrdcp_write_text_atomic(const char* path, const char* text);
/* Caps worker threads; 0 restores the hardware default. */
LRDCP_API void lrdcp_set_threads(unsigned threads);

LRDCP_API lrdcp_status lrdcp_stat_from_name(const char* name, lrdcp_stat* out);
LRDCP_API lrdcp_status lrdcp_model_from_name(const char* name, lrdcp_model_kind* out);

/* Series */
LRDCP_API lrdcp_status lrdcp_series_create(const double* values, size_t n, lrdcp_series** out);
LRDCP_API void lrdcp_series_destroy(lrdcp_series* series);
LRDCP_API size_t lrdcp_series_length(const lrdcp_series* series);
LRDCP_API const double* lrdcp_series_data(const lrdcp_series* series);
LRDCP_API lrdcp_status lrdcp_series_read_csv(const char* path, lrdcp_series** out);
LRDCP_API lrdcp_status lrdcp_series_write_csv(const lrdcp_series* series, const char* path);

/* Simulation */
LRDCP_API lrdcp_status lrdcp_simulate(const lrdcp_model* model, size_t n, uint64_t seed, uint64_t replicate,
                                      lrdcp_series** out);
LRDCP_API lrdcp_status lrdcp_model_autocov(const lrdcp_model* model, long lag, double* out);

/* Hermite machinery. `transform` uses the names identity, square, abs,
 * meanshift:MU, scale:SIGMA, affine:SIGMA,MU, affinesquare:A,B,C,
 * splitsquare:APOS,ANEG. */
LRDCP_API lrdcp_status lrdcp_hermite_coeff(const char* transform, int q, double x, double* value);
/* {"q","x","value","method"} */
LRDCP_API lrdcp_status lrdcp_hermite_coeff_json(const char* transform, int q, double x, char** json);
LRDCP_API lrdcp_status lrdcp_hermite_rank(const char* transform, int qmax, int* rank);
/* exact != 0 selects the double sum, otherwise the asymptotic formula. */
LRDCP_API lrdcp_status lrdcp_normalization(size_t n, int m, const lrdcp_model* model, int exact, double* value);
LRDCP_API lrdcp_status lrdcp_reduction_residual(const lrdcp_model* model, const char* transform, int m, size_t n,
                                                size_t reps, uint64_t seed, double* value);

/* Statistics */
LRDCP_API lrdcp_status lrdcp_statistic(const lrdcp_series* series, lrdcp_stat stat, double* raw, size_t* argmax_k);

/* Estimation. method is "whittle" or "split"; lags = 0 selects floor(n^{1/3}).
 * Output: {"hurst": {...}, "scale": {"C_hat","K","d_hat_n"}}. */
LRDCP_API lrdcp_status lrdcp_estimate_json(const lrdcp_series* series, const char* method, lrdcp_stat stat, size_t lags,
                                           int mean_correction, char** json);

/* Critical value tables */
LRDCP_API lrdcp_status lrdcp_table_create(uint64_t master_seed, lrdcp_table** out);
LRDCP_API lrdcp_status lrdcp_table_load(const char* path, lrdcp_table** out);
LRDCP_API lrdcp_status lrdcp_table_save(const lrdcp_table* table, const char* path);
LRDCP_API void lrdcp_table_destroy(lrdcp_table* table);
LRDCP_API lrdcp_status lrdcp_table_set_created(lrdcp_table* table, const char* stamp);
LRDCP_API lrdcp_status lrdcp_table_calibrate(lrdcp_table* table, lrdcp_stat stat, size_t n, double hurst,
                                             const double* alphas, size_t n_alphas, size_t reps, uint64_t seed);
LRDCP_API lrdcp_status lrdcp_table_lookup(const lrdcp_table* table, lrdcp_stat stat, size_t n, double hurst,
                                          double alpha, double* value);
LRDCP_API lrdcp_status lrdcp_table_size(const lrdcp_table* table, size_t* count);

/* Testing */
typedef struct {
  lrdcp_stat stat;
  double alpha;
  const char* hurst_mode;  /* "known", "whittle", "split" */
  double hurst;            /* used when hurst_mode is "known" */
  const char* calibration; /* "mc" or "asymptotic" */
  int scale_correction;
  size_t reps;        /* J for Monte Carlo calibration */
  uint64_t seed;
  size_t limit_grid;  /* asymptotic mode */
  size_t limit_reps;
} lrdcp_test_options;

LRDCP_API void lrdcp_test_options_init(lrdcp_test_options* options);
/* table may be NULL. Missing Monte Carlo entries are simulated and, for a
 * known H, added to the table. */
LRDCP_API lrdcp_status lrdcp_run_test(const lrdcp_series* series, const lrdcp_test_options* options,
                                      lrdcp_table* table, char** json);

/* Limit functionals */
LRDCP_API lrdcp_status lrdcp_limit_quantile(int m, double hurst, double alpha, size_t grid, size_t reps, uint64_t seed,
                                            double* value);
LRDCP_API lrdcp_status lrdcp_asymptotic_power(double c, double tau, double hurst, double alpha, size_t reps,
                                              uint64_t seed, double* value);

/* Power studies. Zero fields keep the configuration's values. */
typedef struct {
  uint64_t seed;
  int seed_set;
  size_t reps;
  size_t calib_reps;
} lrdcp_power_overrides;

/* csv: scenario,stat,hurst_mode,n,H,rate,reps. resolved: the fully resolved
 * configuration as one line (may be NULL). */
LRDCP_API lrdcp_status lrdcp_power_study(const char* config_text, const lrdcp_power_overrides* overrides, char** csv,
                                         char** resolved);

/* ARE */
LRDCP_API lrdcp_status lrdcp_fstar(double c1, double c2, double q, double tau, double kappa1, double kappa2,
                                   double* value);
LRDCP_API lrdcp_status lrdcp_are_mean_variance(double c1_star, double c2_star, double q, double tau, double kappa1,
                                               double kappa2, double hurst, double* value);
LRDCP_API lrdcp_status lrdcp_gaussian_ratio(double* value);
/* JSON with limit and finite-n powers of the four tests. */
LRDCP_API lrdcp_status lrdcp_are_mean_shift_json(double hurst, double tau, double c, double alpha, size_t reps,
                                                 uint64_t seed, size_t n, char** json);

/* Invariant suites; ns may be NULL. */
LRDCP_API lrdcp_status lrdcp_verify(const char* suite, const size_t* ns, size_t n_ns, size_t reps, uint64_t seed,
                                    char** json, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
