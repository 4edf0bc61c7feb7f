/* C interface of the wetting library. All handles are opaque; every call that can
   fail returns a wt_status and leaves a message for wt_last_error(). */
#ifndef WETTING_H
#define WETTING_H

#include <stddef.h>
#include <stdint.h>

#if defined(WETTING_BUILDING_LIBRARY)
#define WT_API __attribute__((visibility("default")))
#else
#define WT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wt_status {
  WT_OK = 0,
  WT_INVALID_ARGUMENT = 1,
  WT_PARSE = 2,
  WT_IO = 3,
  WT_ZERO_MASS = 4,
  WT_UNCENTERED_POTENTIAL = 5,
  WT_DEGENERATE_SUPPORT = 6,
  WT_KERNEL_TOO_SHORT = 7,
  WT_NEGATIVE_DELTA = 8,
  WT_NOT_LOCALIZED = 9,
  WT_KERNEL_MASS_DEFICIT = 10,
  WT_INCONSISTENT_TABLES = 11,
  WT_IMPOSSIBLE_EXCURSION = 12,
  WT_NOT_DELOCALIZED = 13,
  WT_DOMAIN_ERROR = 14,
  WT_TOO_LARGE = 15,
  WT_INFEASIBLE = 16,
  WT_INTERNAL = 100
} wt_status;

typedef enum wt_regime { WT_STRICTLY_DELOCALIZED = 0, WT_CRITICAL = 1, WT_LOCALIZED = 2 } wt_regime;
typedef enum wt_boundary { WT_FREE = 0, WT_CONSTRAINED = 1 } wt_boundary;
typedef enum wt_solver { WT_SOLVER_AUTO = 0, WT_SOLVER_DIRECT = 1, WT_SOLVER_FAST = 2 } wt_solver;

typedef struct wt_model wt_model;
typedef struct wt_kernel wt_kernel;
typedef struct wt_table wt_table;
typedef struct wt_sampler wt_sampler;
typedef struct wt_sample wt_sample;
typedef struct wt_rows wt_rows;

WT_API const char* wt_version(void);
WT_API const char* wt_status_name(wt_status status);
/* message of the last failed call on this thread ("" if none) */
WT_API const char* wt_last_error(void);

/* ---- model ---- */

typedef struct wt_model_info {
  int min_step;
  int max_step;
  int exact; /* weights given as exact decimals/fractions */
  double kappa;
  double mean;
  double sigma2;
  double l_const; /* 1/sigma */
  uint64_t fingerprint;
} wt_model_info;

WT_API wt_status wt_model_load(const char* path, wt_model** out);
WT_API wt_status wt_model_parse(const char* text, wt_model** out);
WT_API void wt_model_free(wt_model* model);
WT_API wt_status wt_model_get_info(const wt_model* model, wt_model_info* out);
/* P(0..n_max) into out[n_max + 1] */
WT_API wt_status wt_model_survival(const wt_model* model, size_t n_max, double* out);
/* bridge_weight(n) = weight of a positive excursion of length n + 1 */
WT_API wt_status wt_model_bridge_weight(const wt_model* model, size_t n, double* out);
/* exact gamma when the smallest step is -1; *available = 0 otherwise */
WT_API wt_status wt_model_exact_gamma(const wt_model* model, double* out, int* available);

/* ---- contact kernel ---- */

typedef struct wt_kernel_info {
  size_t n_max;
  size_t period;
  double gamma;
  double cq;
  double l_const;
  double tail_coeff;
  double table_mass;
  double tail_mass;
} wt_kernel_info;

WT_API wt_status wt_kernel_build(const wt_model* model, size_t n_max, wt_kernel** out);
WT_API void wt_kernel_free(wt_kernel* kernel);
WT_API wt_status wt_kernel_get_info(const wt_kernel* kernel, wt_kernel_info* out);
/* q(0..n_max) into out[n_max + 1] */
WT_API wt_status wt_kernel_values(const wt_kernel* kernel, double* out);
/* delta = gamma * epsilon */
WT_API wt_status wt_epsilon_to_delta(const wt_kernel* kernel, double epsilon, double* delta);

/* ---- partition functions ---- */

WT_API wt_status wt_table_build(const wt_model* model, const wt_kernel* kernel, double delta, size_t n,
                                wt_solver solver, wt_table** out);
WT_API void wt_table_free(wt_table* table);
WT_API size_t wt_table_size(const wt_table* table); /* N; arrays have N + 1 entries */
/* natural logs of the modified partition functions; -inf where they vanish */
WT_API wt_status wt_table_log_values(const wt_table* table, double* log_zc, double* log_zf);
/* sum_{k <= k_max} delta^k q^{k*}(n), n = 0..N */
WT_API wt_status wt_neumann_series(const wt_kernel* kernel, double delta, size_t n, size_t k_max, double* out);

/* ---- regimes ---- */

typedef struct wt_free_energy {
  int localized;
  double f_delta;
  double mu_delta; /* 0 unless localized */
  double residual;
  double truncated_residual;
  double truncation_bias;
} wt_free_energy;

typedef struct wt_prediction {
  wt_regime regime;
  double zc; /* predicted Z~^c_N = zc * exp(log_scale) */
  double zf;
  double log_scale;
} wt_prediction;

WT_API wt_status wt_classify(double delta, wt_regime* out);
WT_API const char* wt_regime_name(wt_regime regime);
WT_API wt_status wt_free_energy_compute(const wt_kernel* kernel, double delta, wt_free_energy* out);
WT_API wt_status wt_predict(const wt_model* model, const wt_kernel* kernel, double delta, size_t n,
                            wt_prediction* out);

/* ---- sampling ---- */

/* Finite volume (infinite = 0): contacts of the measure on N sites with the given
   boundary. Infinite volume (infinite = 1): the limiting renewal observed up to
   horizon N; the boundary is ignored. with_paths = 1 also assembles heights. */
WT_API wt_status wt_sampler_create(const wt_model* model, const wt_kernel* kernel, double delta, size_t n,
                                   wt_boundary boundary, int infinite, int with_paths, wt_sampler** out);
WT_API void wt_sampler_free(wt_sampler* sampler);

WT_API wt_status wt_sample_create(wt_sample** out);
WT_API void wt_sample_free(wt_sample* sample);
/* draw number `index` of the stream rooted at `seed`; a pure function of (seed, index) */
WT_API wt_status wt_sampler_draw(const wt_sampler* sampler, uint64_t seed, uint64_t index, wt_sample* into);

/* contact epochs tau_0 = 0 < tau_1 < ...; for the constrained boundary the last one is N + 1 */
WT_API size_t wt_sample_contact_count(const wt_sample* sample);
WT_API const int64_t* wt_sample_contacts(const wt_sample* sample);
/* heights x_0..x_N; 0 entries when paths were not requested */
WT_API size_t wt_sample_height_count(const wt_sample* sample);
WT_API const int64_t* wt_sample_heights(const wt_sample* sample);
WT_API int wt_sample_terminated(const wt_sample* sample);
WT_API int wt_sample_beyond_horizon(const wt_sample* sample);
WT_API size_t wt_sample_returns(const wt_sample* sample);
/* d_t: first contact strictly after t N, divided by N (+inf if none up to the horizon) */
WT_API wt_status wt_sample_first_zero_after(const wt_sample* sample, size_t n, double t, double* out);
/* X^N_t = x_{tN} L / sqrt(N), linearly interpolated; needs heights */
WT_API wt_status wt_sample_rescaled_at(const wt_sample* sample, const wt_model* model, double t, double* out);

/* P(last zero = k) and P(number of returns = k), k = 0..k_max, plus the tail mass */
WT_API wt_status wt_deloc_last_zero_law(const wt_kernel* kernel, double delta, size_t k_max, double* law,
                                        double* tail);
WT_API wt_status wt_deloc_return_law(double delta, size_t k_max, double* law, double* tail);

/* ---- scaling ---- */

typedef struct wt_zero_set_row {
  double x;
  double empirical;
  double reference;
  double deviation;
  double half_width;
} wt_zero_set_row;

typedef struct wt_marginal_row {
  double x;
  double empirical;
  double reference;
} wt_marginal_row;

#define WT_ZERO_SET_GRID 40
#define WT_MARGINAL_ROWS 41

WT_API wt_status wt_bm_zero_tail(double t, double x, double* out);
/* grid x = t (1 + j/10), j = 1..40, against P(d_t >= x); d values may be +inf.
   x_known: largest x for which the samples decide d_t >= x. */
WT_API wt_status wt_zero_set_test(const double* d_values, size_t count, double t, double x_known,
                                  wt_zero_set_row rows[WT_ZERO_SET_GRID], double* sup_deviation);
/* KS distance to |N(0, t)| (free) or |N(0, t(1 - t))| (constrained) */
WT_API wt_status wt_marginal_test(const double* values, size_t count, wt_boundary boundary, double t,
                                  wt_marginal_row rows[WT_MARGINAL_ROWS], double* ks, int* degenerate);

/* ---- oracle ---- */

/* check: "partition", "ladder", "llt" or "contacts" */
WT_API wt_status wt_oracle_check(const wt_model* model, const char* check, size_t n, wt_rows** out);
WT_API size_t wt_rows_count(const wt_rows* rows);
WT_API wt_status wt_rows_get(const wt_rows* rows, size_t i, const char** label, const char** lhs, const char** rhs,
                             int* pass);
WT_API void wt_rows_free(wt_rows* rows);

#ifdef __cplusplus
}
#endif

#endif
