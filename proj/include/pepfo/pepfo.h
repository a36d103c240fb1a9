/* SPDX-License-Identifier: MIT */
#ifndef PEPFO_H
#define PEPFO_H

/*
 * C interface to the pepfo library: fixed-step first-order methods for
 * smooth convex minimization, their analytic worst-case bounds, dual
 * certificates for those bounds, and SDPA export of the underlying
 * semidefinite programs.
 *
 * Conventions:
 *   - Every function that can fail returns pepfo_status; on failure the
 *     message is available from pepfo_last_error() until the next call
 *     on the same thread.
 *   - Strings returned through char** are heap copies; release them with
 *     pepfo_string_free().
 *   - Objects returned through typed handles are released with the
 *     matching *_free(); passing NULL to a *_free() is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PEPFO_API __declspec(dllexport)
#else
#define PEPFO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pepfo_status {
  PEPFO_OK = 0,
  PEPFO_ERROR_INVALID_ARGUMENT = 1,
  PEPFO_ERROR_RULE_VIOLATION = 2,
  PEPFO_ERROR_NOT_AVAILABLE = 3,
  PEPFO_ERROR_IO = 4,
  PEPFO_ERROR_INTERNAL = 5
} pepfo_status;

PEPFO_API const char* pepfo_version(void);
PEPFO_API const char* pepfo_last_error(void);
PEPFO_API void pepfo_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Momentum parameter sequences t_0..t_N with their growth rules.      */

typedef struct pepfo_seq pepfo_seq;

/* kind: "fgm-t", "ogm-theta", "ogm-og", "ogm-a" (a used only by ogm-a) */
PEPFO_API pepfo_status pepfo_seq_make(const char* kind, int N, double a, pepfo_seq** out);
PEPFO_API pepfo_status pepfo_seq_make_custom(const double* values, int N, int doubled_final,
                                             pepfo_seq** out);
PEPFO_API pepfo_status pepfo_seq_make_random(uint64_t seed, int N, int doubled_final,
                                             pepfo_seq** out);
/* Reinterpret a plain-rule sequence under the doubled-final rule. */
PEPFO_API pepfo_status pepfo_seq_as_doubled(const pepfo_seq* s, pepfo_seq** out);
PEPFO_API int pepfo_seq_count(const pepfo_seq* s); /* the horizon N */
PEPFO_API const char* pepfo_seq_kind(const pepfo_seq* s);
PEPFO_API int pepfo_seq_is_doubled(const pepfo_seq* s);
/* len must be N+1 for both accessors below. */
PEPFO_API pepfo_status pepfo_seq_values(const pepfo_seq* s, double* out, int len);
PEPFO_API pepfo_status pepfo_seq_partial_sums(const pepfo_seq* s, double* out, int len);
PEPFO_API double pepfo_seq_slack_sum(const pepfo_seq* s);
PEPFO_API pepfo_status pepfo_seq_validate(const pepfo_seq* s, int* ok, char** detail);
PEPFO_API pepfo_status pepfo_seq_json(const pepfo_seq* s, char** out_json);
PEPFO_API void pepfo_seq_free(pepfo_seq* s);

/* ------------------------------------------------------------------ */
/* Step-coefficient matrices h_{i+1,k}, 0 <= k <= i < N.               */

typedef struct pepfo_steps pepfo_steps;

/* rule: "fgm", "ogm", "ogm-prime", "gogm", "gogm-prime", "gogm-recursive" */
PEPFO_API pepfo_status pepfo_steps_make(const char* rule, const pepfo_seq* s, pepfo_steps** out);
PEPFO_API pepfo_status pepfo_steps_make_gm(int N, double step, pepfo_steps** out);
/* Canonical step matrix of a named method ("gm", "fgm", "ogm", "gogm",
 * "gogm-prime", "ogm-og", "ogm-a"); seq overrides the default sequence. */
PEPFO_API pepfo_status pepfo_steps_for_method(const char* method, int N, double a, double gm_step,
                                              const pepfo_seq* seq_or_null, pepfo_steps** out);
PEPFO_API int pepfo_steps_count(const pepfo_steps* h); /* the horizon N */
PEPFO_API pepfo_status pepfo_steps_entry(const pepfo_steps* h, int i_plus_1, int k, double* out);
PEPFO_API pepfo_status pepfo_steps_csv(const pepfo_steps* h, char** out_csv);
PEPFO_API void pepfo_steps_free(pepfo_steps* h);

/* ------------------------------------------------------------------ */
/* Smooth convex test functions with exact gradients and minimizers.   */

typedef struct pepfo_oracle pepfo_oracle;

/* family: "quadratic" (L/2 |x|^2), "huber" (radial, kink at R/(N+1)),
 * "psd-quadratic", "least-squares", "log-sum-exp"; seed drives the random
 * families, N only shapes "huber". "log-sum-exp" uses unit smoothing and
 * ignores L; read the resulting constant back with pepfo_oracle_lipschitz. */
PEPFO_API pepfo_status pepfo_oracle_make(const char* family, uint64_t seed, int d, double L,
                                         double R, int N, pepfo_oracle** out);
PEPFO_API int pepfo_oracle_dim(const pepfo_oracle* f);
PEPFO_API double pepfo_oracle_lipschitz(const pepfo_oracle* f);
PEPFO_API pepfo_status pepfo_oracle_value(const pepfo_oracle* f, const double* x, int d,
                                          double* out);
PEPFO_API pepfo_status pepfo_oracle_grad(const pepfo_oracle* f, const double* x, int d,
                                         double* out);
PEPFO_API pepfo_status pepfo_oracle_minimizer(const pepfo_oracle* f, double* out, int d);
PEPFO_API double pepfo_oracle_min_value(const pepfo_oracle* f);
/* minimizer + R * (seeded unit direction); guarantees |x0 - x*| = R. */
PEPFO_API pepfo_status pepfo_oracle_start_point(const pepfo_oracle* f, uint64_t seed, double R,
                                                double* out, int d);
PEPFO_API void pepfo_oracle_free(pepfo_oracle* f);

/* ------------------------------------------------------------------ */
/* Method runs.                                                        */

typedef struct pepfo_trace pepfo_trace;

/* method: "gm", "fgm1", "fgm2", "ogm1", "ogm2", "gogm1", "gogm2",
 * "gogm1p", "gogm2p", "ogm-m", "ogm-og", "ogm-a" (aliases "fgm", "ogm").
 * m < 0 and a = 0 mean "use the default"; seq_or_null overrides the
 * method's parameter sequence where one applies. */
PEPFO_API pepfo_status pepfo_run(const char* method, int N, int m, double a, double gm_step,
                                 const pepfo_seq* seq_or_null, const pepfo_oracle* f,
                                 const double* x0, int d, pepfo_trace** out);
PEPFO_API pepfo_status pepfo_run_fo(const pepfo_steps* h, const pepfo_oracle* f, const double* x0,
                                    int d, pepfo_trace** out);
PEPFO_API int pepfo_trace_count(const pepfo_trace* t); /* the horizon N */
PEPFO_API int pepfo_trace_dim(const pepfo_trace* t);
/* field: "f_x", "f_y", "grad_norm_x", "grad_norm_y" (indexed 0..N) or
 * "f_y_post", "grad_norm_y_post" (index ignored). */
PEPFO_API pepfo_status pepfo_trace_value(const pepfo_trace* t, const char* field, int i,
                                         double* out);
/* which: "x", "y", "y_post" (index ignored for y_post). */
PEPFO_API pepfo_status pepfo_trace_point(const pepfo_trace* t, const char* which, int i,
                                         double* out, int d);
PEPFO_API pepfo_status pepfo_trace_csv(const pepfo_trace* t, char** out_csv);
PEPFO_API pepfo_status pepfo_trace_json(const pepfo_trace* t, int include_points,
                                        char** out_json);
PEPFO_API void pepfo_trace_free(pepfo_trace* t);

/* ------------------------------------------------------------------ */
/* Dual certificates for the worst-case bounds.                        */

typedef struct pepfo_cert pepfo_cert;

typedef struct pepfo_verify_report {
  int ok;
  int membership_ok;
  int psd_ok;
  int identity_checked;
  int identity_ok;
  double max_membership_violation;
  double min_eigenvalue;
  double psd_tolerance;
  double max_identity_gap;
} pepfo_verify_report;

/* construction: "cost" (doubled-final rule), "cost-post", "grad-fgm"
 * (exact-recursion sequences only), "grad-slack" (positive slack only). */
PEPFO_API pepfo_status pepfo_cert_make(const char* construction, const pepfo_seq* s,
                                       pepfo_cert** out);
PEPFO_API const char* pepfo_cert_construction(const pepfo_cert* c);
/* Cost certificates bound f - f*; gradient certificates bound |grad f|.
 * Each getter reports PEPFO_ERROR_NOT_AVAILABLE on the other kind. */
PEPFO_API pepfo_status pepfo_cert_cost_bound(const pepfo_cert* c, double L, double R, double* out);
PEPFO_API pepfo_status pepfo_cert_grad_bound(const pepfo_cert* c, double L, double R, double* out);
PEPFO_API pepfo_status pepfo_cert_verify(const pepfo_cert* c, pepfo_verify_report* out,
                                         char** detail_or_null);
PEPFO_API void pepfo_cert_free(pepfo_cert* c);

/* ------------------------------------------------------------------ */
/* Analytic bounds and tables.                                         */

typedef struct pepfo_bound_info {
  double value;      /* exact sequence-form bound */
  int has_simplified;
  double simplified; /* closed-form relaxation, when one exists */
} pepfo_bound_info;

/* method: "gm", "fgm", "ogm", "ogm-m", "ogm-og", "ogm-a", "gogm",
 * "gogm-prime", "any-fo"; metric: "cost-final-x", "cost-primary-y",
 * "grad-smallest", "grad-final", "lower-bound". */
PEPFO_API pepfo_status pepfo_bound(const char* method, const char* metric, int N, double L,
                                   double R, int m, double a, const pepfo_seq* seq_or_null,
                                   pepfo_bound_info* out, char** formula_or_null,
                                   char** iterate_or_null);

/* which: 1 asymptotic rates, 2 cost, 3 smallest gradient, 4 final gradient;
 * format: "csv" or "json". Ns may be NULL to use 1,2,4,10,20,30,40,47,50. */
PEPFO_API pepfo_status pepfo_table(int which, const int* Ns, int n_count, double L, double R,
                                   const char* format, char** out_text);

/* ------------------------------------------------------------------ */
/* Worst-case attainment replays.                                      */

typedef struct pepfo_worstcase_report {
  int ok;
  double expected_final_grad;
  double max_rel_gap;
} pepfo_worstcase_report;

/* target: "ogm-quadratic" or "gm-huber". */
PEPFO_API pepfo_status pepfo_worstcase(const char* target, int N, double L, double R, int d,
                                       uint64_t seed, pepfo_worstcase_report* out,
                                       pepfo_trace** trace_or_null);

/* ------------------------------------------------------------------ */
/* SDP export.                                                         */

/* kind: "d" (cost), "dprime" (cost after a final gradient step),
 * "ddprime" (squared gradient). Writes SDPA sparse format to path and a
 * JSON sidecar describing variables and slots to path + ".json". */
PEPFO_API pepfo_status pepfo_export_sdpa(const char* kind, const pepfo_steps* h, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* PEPFO_H */
