/* C interface to libcongamma. All handles are opaque; every call returns a
 * status code and, on failure, leaves a message for congamma_last_error()
 * on the calling thread. Arbitrary-precision values cross the boundary as
 * decimal strings written into caller buffers: pass buf = NULL or a short
 * buffer to learn the required size through *needed. */
#ifndef CONGAMMA_H
#define CONGAMMA_H

#include <stddef.h>
#include <stdint.h>

#if defined(CONGAMMA_BUILDING_LIBRARY)
#define CONGAMMA_API __attribute__((visibility("default")))
#else
#define CONGAMMA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum congamma_status {
  CONGAMMA_OK = 0,
  CONGAMMA_E_DOMAIN = 1,
  CONGAMMA_E_RANGE = 2,
  CONGAMMA_E_RESOURCE = 3,
  CONGAMMA_E_VALIDATION = 4,
  CONGAMMA_E_CORRUPTION = 5,
  CONGAMMA_E_PRECISION = 6,
  CONGAMMA_E_SINGULAR = 7,
  CONGAMMA_E_BUFFER = 8, /* output buffer too small; see *needed */
  CONGAMMA_E_ARGUMENT = 9, /* null handle or pointer */
  CONGAMMA_E_INTERNAL = 10
} congamma_status;

typedef struct congamma_policy congamma_policy;
typedef struct congamma_series congamma_series;
typedef struct congamma_prime_table congamma_prime_table;
typedef struct congamma_straddle congamma_straddle;
typedef struct congamma_potential congamma_potential;
typedef struct congamma_config congamma_config;

typedef void (*congamma_sink)(const char* text, size_t len, void* user);

CONGAMMA_API const char* congamma_version(void);
CONGAMMA_API const char* congamma_last_error(void);
/* Name of the offending input for the last error ("" if none). */
CONGAMMA_API const char* congamma_last_error_parameter(void);
/* Suggested value for the parameter after CONGAMMA_E_PRECISION, else 0. */
CONGAMMA_API long congamma_last_error_suggested(void);
/* Line number after CONGAMMA_E_CORRUPTION, else 0. */
CONGAMMA_API long congamma_last_error_line(void);

/* ---- precision policy ---- */
CONGAMMA_API int congamma_policy_new(int digits, long max_terms, double tail_tol, congamma_policy** out);
CONGAMMA_API int congamma_policy_set_auto_raise(congamma_policy* policy, int enabled);
CONGAMMA_API void congamma_policy_free(congamma_policy* policy);

/* ---- special functions (results as decimal strings) ---- */
CONGAMMA_API int congamma_lower_gamma(const congamma_policy* policy, long n, const char* z, char* buf, size_t len,
                                      size_t* needed);
CONGAMMA_API int congamma_regularized_p(const congamma_policy* policy, long n, const char* z, char* buf, size_t len,
                                        size_t* needed);
CONGAMMA_API int congamma_mobius(uint64_t n, int* out);
CONGAMMA_API int congamma_zeta_int(const congamma_policy* policy, long k, char* buf, size_t len, size_t* needed);
CONGAMMA_API int congamma_log_integral(const congamma_policy* policy, const char* x, char* buf, size_t len,
                                       size_t* needed);

/* ---- series results ---- */
CONGAMMA_API int congamma_riemann_r(const congamma_policy* policy, double x, congamma_series** out);
CONGAMMA_API int congamma_integer_count(const congamma_policy* policy, double x, congamma_series** out);
CONGAMMA_API int congamma_pi1_bar(const congamma_policy* policy, double x, congamma_series** out);
CONGAMMA_API int congamma_mobius_inverted_pi(const congamma_policy* policy, double x, congamma_series** out);
CONGAMMA_API int congamma_pi2i_bar(const congamma_policy* policy, double x, uint64_t i, congamma_series** out);
CONGAMMA_API int congamma_series_value(const congamma_series* s, char* buf, size_t len, size_t* needed);
CONGAMMA_API int congamma_series_tail_bound(const congamma_series* s, char* buf, size_t len, size_t* needed);
CONGAMMA_API long congamma_series_terms(const congamma_series* s);
CONGAMMA_API int congamma_series_precision(const congamma_series* s);
CONGAMMA_API int congamma_series_validity_warning(const congamma_series* s);
CONGAMMA_API double congamma_series_value_double(const congamma_series* s);
CONGAMMA_API void congamma_series_free(congamma_series* s);

/* ---- constants ---- */
CONGAMMA_API int congamma_twin_constant(const congamma_policy* policy, char* buf, size_t len, size_t* needed);
CONGAMMA_API int congamma_double_constant(const congamma_policy* policy, uint64_t i, char* buf, size_t len,
                                          size_t* needed);

/* ---- sieve ---- */
CONGAMMA_API int congamma_prime_table_new(uint64_t limit, unsigned threads, congamma_prime_table** out);
CONGAMMA_API void congamma_prime_table_free(congamma_prime_table* table);
CONGAMMA_API int congamma_pi_exact(const congamma_prime_table* table, double x, uint64_t* out);
CONGAMMA_API int congamma_big_pi_exact(const congamma_prime_table* table, double x, int digits, char* buf, size_t len,
                                       size_t* needed);
CONGAMMA_API int congamma_double_count_exact(const congamma_prime_table* table, uint64_t i, uint64_t x, uint64_t* out);
CONGAMMA_API int congamma_straddle_count_exact(const congamma_prime_table* table, uint64_t x, uint64_t* out);
CONGAMMA_API int congamma_c2i_square_sum(const congamma_policy* policy, uint64_t limit, unsigned threads, char* buf,
                                         size_t len, size_t* needed);

/* ---- Goldbach straddles ---- */
/* mode: "direct", "factored" or "paper_lower_bound"; cache_path may be NULL. */
CONGAMMA_API int congamma_straddle_expectation(const congamma_policy* policy, uint64_t x, const char* mode,
                                               const char* cache_path, congamma_straddle** out);
CONGAMMA_API int congamma_straddle_S(const congamma_straddle* r, char* buf, size_t len, size_t* needed);
CONGAMMA_API int congamma_straddle_log10_failure(const congamma_straddle* r, char* buf, size_t len, size_t* needed);
CONGAMMA_API int congamma_straddle_c2i_sum(const congamma_straddle* r, char* buf, size_t len, size_t* needed);
CONGAMMA_API void congamma_straddle_free(congamma_straddle* r);
CONGAMMA_API int congamma_straddle_density(const congamma_policy* policy, uint64_t i, double x, char* buf, size_t len,
                                           size_t* needed);
CONGAMMA_API int congamma_cramer_gap(const congamma_policy* policy, uint64_t p, char* buf, size_t len, size_t* needed);

/* ---- 1D propagators (hbar = m = 1) ---- */
/* out[4] = {Re r, Im r, Re t, Im t} */
CONGAMMA_API int congamma_step_coeffs(double E, double V0, double out[4]);
CONGAMMA_API int congamma_potential_new(const double* breakpoints, size_t n, const double* values,
                                        congamma_potential** out);
CONGAMMA_API int congamma_potential_parse(const char* text, congamma_potential** out);
CONGAMMA_API void congamma_potential_free(congamma_potential* p);
/* out[2] = {Re G, Im G} */
CONGAMMA_API int congamma_transfer_matrix_green(const congamma_potential* p, double E, double x_a, double x_b,
                                                double out[2]);
CONGAMMA_API int congamma_path_decomposition_green(const congamma_potential* p, double E, double x_a, double x_b,
                                                   int depth, double out[2], int* converged);
/* v0 <= 0 or infinite means infinite walls. */
CONGAMMA_API int congamma_bounce_spectrum(double L, double v0, double emin, double emax, double tol, double* out,
                                          size_t cap, size_t* count);

/* ---- experiment configs ---- */
CONGAMMA_API int congamma_config_new(congamma_config** out);
CONGAMMA_API int congamma_config_parse(const char* text, congamma_config** out);
CONGAMMA_API int congamma_config_load(const char* path, congamma_config** out);
CONGAMMA_API int congamma_config_set(congamma_config* cfg, const char* key, const char* value);
CONGAMMA_API int congamma_config_get(const congamma_config* cfg, const char* key, char* buf, size_t len,
                                     size_t* needed);
CONGAMMA_API int congamma_config_serialize(const congamma_config* cfg, char* buf, size_t len, size_t* needed);
CONGAMMA_API void congamma_config_free(congamma_config* cfg);
/* Runs the configured command. Returns the process exit status: 0 success,
 * 2 validation error, 3 precision exhaustion, 1 other failure. */
CONGAMMA_API int congamma_run(const congamma_config* cfg, congamma_sink out, congamma_sink err, void* user);

#ifdef __cplusplus
}
#endif

#endif /* CONGAMMA_H */
