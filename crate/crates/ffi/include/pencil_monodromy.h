#ifndef PENCIL_MONODROMY_H
#define PENCIL_MONODROMY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PmStatus {
  PM_STATUS_OK = 0,
  PM_STATUS_NULL_POINTER = 1,
  PM_STATUS_INVALID_INPUT = 2,
  PM_STATUS_NUMERIC_FAILURE = 3,
  PM_STATUS_EXACT_ARITHMETIC = 4,
  PM_STATUS_BUDGET_EXCEEDED = 5,
  PM_STATUS_CHECK_FAILED = 6,
  PM_STATUS_BUFFER_TOO_SMALL = 7,
  PM_STATUS_INTERNAL = 8,
  PM_STATUS_PANIC = 9,
} PmStatus;

/**
 * Curve parameters and tracker settings.
 */
typedef struct PmCurve PmCurve;

/**
 * Finished pipeline run.
 */
typedef struct PmReport PmReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a curve of type `(p, q)`. `alphas` may be null for the default
 * parameters, otherwise it must point to `n_alphas == q` values.
 *
 * # Safety
 * `alphas` must be null or valid for `n_alphas` reads; `out` must be writable.
 */
enum PmStatus pm_curve_new(size_t p,
                           size_t q,
                           const double *alphas,
                           size_t n_alphas,
                           struct PmCurve **out);

/**
 * # Safety
 * `curve` must come from `pm_curve_new`.
 */
enum PmStatus pm_curve_set_tolerance(struct PmCurve *curve, double tol);

/**
 * # Safety
 * `curve` must come from `pm_curve_new`.
 */
enum PmStatus pm_curve_set_segments(struct PmCurve *curve, size_t segments);

/**
 * # Safety
 * `curve` must be null or come from `pm_curve_new`, and not be used afterwards.
 */
void pm_curve_free(struct PmCurve *curve);

/**
 * # Safety
 * `curve` must come from `pm_curve_new`; `out` must be writable.
 */
enum PmStatus pm_run_pipeline(const struct PmCurve *curve, struct PmReport **out);

/**
 * Writes 1 if no verdict failed, else 0.
 *
 * # Safety
 * `report` must come from `pm_run_pipeline`; `passed` must be writable.
 */
enum PmStatus pm_report_passed(const struct PmReport *report, int32_t *passed);

/**
 * JSON report as a new string, to be released with `pm_string_free`.
 * With `comparable != 0` the timings are left out.
 *
 * # Safety
 * `report` must come from `pm_run_pipeline`; `out` must be writable.
 */
enum PmStatus pm_report_json(const struct PmReport *report, int32_t comparable, char **out);

/**
 * # Safety
 * `report` must be null or come from `pm_run_pipeline`, and not be used afterwards.
 */
void pm_report_free(struct PmReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void pm_string_free(char *s);

/**
 * Generic-linear closed-form Alexander polynomial `sum_k coeffs[k] t^(lo+k)`.
 * On `PM_STATUS_BUFFER_TOO_SMALL`, `len` holds the required capacity.
 *
 * # Safety
 * `lo` and `len` must be writable; `coeffs` valid for `capacity` writes.
 */
enum PmStatus pm_closed_form_generic(size_t p,
                                     size_t q,
                                     int64_t *lo,
                                     int64_t *coeffs,
                                     size_t capacity,
                                     size_t *len);

/**
 * Tame-maximal closed-form evaluator, same conventions as `pm_closed_form_generic`.
 *
 * # Safety
 * As for `pm_closed_form_generic`.
 */
enum PmStatus pm_closed_form_tame(size_t p,
                                  size_t q,
                                  int64_t *lo,
                                  int64_t *coeffs,
                                  size_t capacity,
                                  size_t *len);

/**
 * Message of the last failed call on this thread; valid until the next call.
 */
const char *pm_last_error(void);

const char *pm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PENCIL_MONODROMY_H */
