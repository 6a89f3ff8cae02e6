#ifndef DELAYSTAB_H
#define DELAYSTAB_H

/*
 * C interface to the delaystab library: closed-form stability decisions for
 *
 *   x'(t) + a x(t) + alpha x(t - tau) + b y(t) = 0
 *   y'(t) + a y(t) + c x(t) + alpha y(t - tau) = 0
 *
 * plus the numerical cross-checks (root counting, imaginary-axis crossings,
 * method-of-steps simulation).
 *
 * Conventions:
 *  - Every fallible call returns a dstab_status; DSTAB_OK is zero.
 *  - On failure, dstab_last_error() holds a message for the calling thread.
 *  - Variable-size results come back as opaque handles owned by the caller
 *    and released with the matching *_free function (NULL is accepted).
 *  - Text outputs use caller buffers: pass buf = NULL / cap = 0 to query the
 *    length (excluding the terminating NUL) reported through *len; the call
 *    then returns DSTAB_ERR_BUFFER_TOO_SMALL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DELAYSTAB_BUILDING)
#    define DSTAB_API __declspec(dllexport)
#  else
#    define DSTAB_API __declspec(dllimport)
#  endif
#else
#  define DSTAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dstab_status {
    DSTAB_OK = 0,
    DSTAB_ERR_INVALID_ARGUMENT = 1,
    DSTAB_ERR_PRECONDITION = 2,
    DSTAB_ERR_EXCLUDED_BY_HYPOTHESIS = 3,
    DSTAB_ERR_UNDEFINED_AT_RESONANCE = 4,
    DSTAB_ERR_NO_IMAGINARY_ROOTS = 5,
    DSTAB_ERR_ROOT_NEAR_CONTOUR = 6,
    DSTAB_ERR_INSUFFICIENT_SAMPLES = 7,
    DSTAB_ERR_NOT_A_CROSSING = 8,
    DSTAB_ERR_DEGENERATE = 9,
    DSTAB_ERR_BUFFER_TOO_SMALL = 10,
    DSTAB_ERR_IO = 11,
    DSTAB_ERR_INTERNAL = 12
} dstab_status;

typedef enum dstab_verdict_status {
    DSTAB_STABLE = 0,
    DSTAB_UNSTABLE = 1,
    DSTAB_EXCLUDED_BY_HYPOTHESIS = 2
} dstab_verdict_status;

typedef enum dstab_hayes_kind {
    DSTAB_HAYES_ALL_TAU = 0,
    DSTAB_HAYES_UP_TO = 1,
    DSTAB_HAYES_NONE = 2
} dstab_hayes_kind;

typedef enum dstab_direction {
    DSTAB_LEFT_TO_RIGHT = 0,
    DSTAB_RIGHT_TO_LEFT = 1,
    DSTAB_DEGENERATE = 2
} dstab_direction;

typedef enum dstab_decay_hint {
    DSTAB_DECAYING = 0,
    DSTAB_GROWING = 1,
    DSTAB_INCONCLUSIVE = 2
} dstab_decay_hint;

typedef struct dstab_coefficients {
    double a, alpha, b, c;
} dstab_coefficients;

typedef struct dstab_params {
    double a, alpha, b, c, tau;
} dstab_params;

/* Each has_* flag is non-zero when the matching value applies. */
typedef struct dstab_derived {
    double bc;
    int has_beta;   double beta;
    int has_d;      double d;
    int has_D;      double D;
    int has_sqrtD;  double sqrtD;
    int has_E;      double E;
    int has_omega;  double omega1, omega2;
    int has_kl;     long long k, l;
} dstab_derived;

typedef struct dstab_contour {
    double radius;
    double left_edge;
    int samples;
} dstab_contour;

typedef struct dstab_sim_config {
    double step;
    double horizon;
    double x0, y0;
    int random_history;  /* non-zero: add a seeded smooth perturbation */
    uint64_t seed;
} dstab_sim_config;

typedef struct dstab_verdict dstab_verdict;
typedef struct dstab_windows dstab_windows;
typedef struct dstab_crossings dstab_crossings;
typedef struct dstab_trajectory dstab_trajectory;

DSTAB_API const char* dstab_version(void);
DSTAB_API const char* dstab_status_message(dstab_status status);
DSTAB_API const char* dstab_last_error(void);

/* ---- core model ---- */
DSTAB_API dstab_status dstab_derive(const dstab_coefficients* k, dstab_derived* out);
DSTAB_API dstab_status dstab_derived_to_json(const dstab_coefficients* k, char* buf, size_t cap, size_t* len);

/* ---- criterion ---- */
DSTAB_API dstab_status dstab_hayes_stable(double p, double q, double tau, int* stable);
DSTAB_API dstab_status dstab_hayes_threshold(double p, double q, dstab_hayes_kind* kind, double* bound);
/* The sign branch is taken from k->alpha. */
DSTAB_API dstab_status dstab_switch_time_r1(const dstab_coefficients* k, long long n, double* out);
DSTAB_API dstab_status dstab_switch_time_r2(const dstab_coefficients* k, long long n, double* out);

DSTAB_API dstab_status dstab_check(const dstab_params* p, dstab_verdict** out);
DSTAB_API dstab_verdict_status dstab_verdict_get_status(const dstab_verdict* v);
DSTAB_API const char* dstab_verdict_branch(const dstab_verdict* v);
/* NULL when the verdict carries no witness. */
DSTAB_API const char* dstab_verdict_witness(const dstab_verdict* v);
DSTAB_API dstab_status dstab_verdict_to_json(const dstab_verdict* v, char* buf, size_t cap, size_t* len);
DSTAB_API void dstab_verdict_free(dstab_verdict* v);

DSTAB_API dstab_status dstab_stability_windows(const dstab_coefficients* k, dstab_windows** out);
DSTAB_API size_t dstab_windows_count(const dstab_windows* w);
/* hi is +INFINITY for an unbounded window. */
DSTAB_API dstab_status dstab_windows_get(const dstab_windows* w, size_t i, double* lo, double* hi);
DSTAB_API int dstab_windows_contains(const dstab_windows* w, double tau);
DSTAB_API dstab_status dstab_windows_to_json(const dstab_windows* w, char* buf, size_t cap, size_t* len);
DSTAB_API void dstab_windows_free(dstab_windows* w);

/* ---- spectrum (numerical oracle; tau = 0 accepted) ---- */
DSTAB_API dstab_status dstab_char_G(const dstab_params* p, double re, double im, double* out_re, double* out_im);
DSTAB_API dstab_status dstab_char_F(const dstab_params* p, double re, double im, double* out_re, double* out_im);
DSTAB_API dstab_status dstab_default_contour(const dstab_params* p, dstab_contour* out);
/* contour = NULL: default contour with automatic left-edge retries. */
DSTAB_API dstab_status dstab_count_rhp_roots(const dstab_params* p, const dstab_contour* contour, int* count);
DSTAB_API dstab_status dstab_rightmost_root(const dstab_params* p, double search_left, int* found, double* re, double* im);

DSTAB_API dstab_status dstab_imaginary_crossings(const dstab_coefficients* k, double tau_max, dstab_crossings** out);
DSTAB_API size_t dstab_crossings_count(const dstab_crossings* c);
DSTAB_API dstab_status dstab_crossings_get(const dstab_crossings* c, size_t i, double* omega, double* tau, dstab_direction* dir);
DSTAB_API dstab_status dstab_crossings_to_json(const dstab_crossings* c, char* buf, size_t cap, size_t* len);
DSTAB_API void dstab_crossings_free(dstab_crossings* c);

/* Uses p->tau as the crossing delay. */
DSTAB_API dstab_status dstab_crossing_direction(const dstab_params* p, double omega, dstab_direction* dir);
DSTAB_API dstab_status dstab_continue_root(const dstab_params* p, double omega, double tau, int* found, double* re, double* im);

/* ---- simulation ---- */
DSTAB_API dstab_status dstab_simulate(const dstab_params* p, const dstab_sim_config* cfg, dstab_trajectory** out);
DSTAB_API size_t dstab_trajectory_size(const dstab_trajectory* tr);
DSTAB_API dstab_status dstab_trajectory_get(const dstab_trajectory* tr, size_t i, double* t, double* x, double* y);
DSTAB_API double dstab_trajectory_step(const dstab_trajectory* tr);
DSTAB_API int dstab_trajectory_overflowed(const dstab_trajectory* tr);
DSTAB_API dstab_status dstab_trajectory_to_csv(const dstab_trajectory* tr, char* buf, size_t cap, size_t* len);
DSTAB_API dstab_status dstab_trajectory_write_csv(const dstab_trajectory* tr, const char* path);
DSTAB_API dstab_status dstab_trajectory_to_json(const dstab_trajectory* tr, char* buf, size_t cap, size_t* len);
DSTAB_API dstab_status dstab_estimate_decay(const dstab_trajectory* tr, double* rate, dstab_decay_hint* hint);
DSTAB_API void dstab_trajectory_free(dstab_trajectory* tr);

#ifdef __cplusplus
}
#endif

#endif /* DELAYSTAB_H */
