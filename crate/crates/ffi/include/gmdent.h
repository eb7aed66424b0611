#ifndef GMDENT_H
#define GMDENT_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GmdentStatus {
  GMDENT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GMDENT_STATUS_NULL_POINTER = 1,
  /**
   * Bad parameter, unknown measure name or malformed string.
   */
  GMDENT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Data outside the domain: negative or non-finite values, too few
   * observations, empty tail.
   */
  GMDENT_STATUS_DOMAIN_ERROR = 3,
  /**
   * Quadrature did not converge.
   */
  GMDENT_STATUS_NO_CONVERGENCE = 4,
  /**
   * The measure cannot be evaluated on this source.
   */
  GMDENT_STATUS_UNSUPPORTED = 5,
  /**
   * Internal panic caught at the boundary.
   */
  GMDENT_STATUS_PANIC = 6,
} GmdentStatus;

/**
 * ECDF plotting-position convention.
 */
typedef enum GmdentConvention {
  GMDENT_CONVENTION_HAZEN = 0,
  GMDENT_CONVENTION_NAIVE = 1,
  GMDENT_CONVENTION_MEAN_RANK = 2,
} GmdentConvention;

/**
 * Opaque parametric model.
 */
typedef struct GmdentModel GmdentModel;

/**
 * Opaque validated sample.
 */
typedef struct GmdentSample GmdentSample;

/**
 * Measure parameters. NaN marks an unset real, a negative value an unset
 * integer, null an unset string. Start from `gmdent_params_default()`.
 */
typedef struct GmdentParams {
  double alpha;
  double beta;
  double v;
  double t;
  double r;
  double s;
  int32_t k;
  int32_t p;
  /**
   * `F:j`, `Fbar:j` or `const:c`.
   */
  const char *weight;
  /**
   * `c*x^v`.
   */
  const char *phi;
} GmdentParams;

/**
 * Summary of an identity run.
 */
typedef struct GmdentVerifySummary {
  uint32_t passed;
  uint32_t failed;
  uint32_t skipped;
} GmdentVerifySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parameters with every field unset.
 */
struct GmdentParams gmdent_params_default(void);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *gmdent_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gmdent_version(void);

/**
 * Copies `len` observations into a new sample.
 *
 * # Safety
 * `data` must point to `len` readable doubles; `out` must be writable.
 */
enum GmdentStatus gmdent_sample_new(const double *data, size_t len, struct GmdentSample **out);

/**
 * Releases a sample. Null is ignored.
 *
 * # Safety
 * `sample` must come from `gmdent_sample_new` and not be freed twice.
 */
void gmdent_sample_free(struct GmdentSample *sample);

/**
 * Number of observations, 0 for null.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
size_t gmdent_sample_len(const struct GmdentSample *sample);

/**
 * Uniform on `[a, b]`, `0 <= a < b`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GmdentStatus gmdent_model_uniform(double a, double b, struct GmdentModel **out);

/**
 * Exponential with the given mean.
 *
 * # Safety
 * `out` must be writable.
 */
enum GmdentStatus gmdent_model_exponential(double mean, struct GmdentModel **out);

/**
 * Weibull with shape and scale.
 *
 * # Safety
 * `out` must be writable.
 */
enum GmdentStatus gmdent_model_weibull(double shape, double scale, struct GmdentModel **out);

/**
 * Pareto with shape > 2 and scale.
 *
 * # Safety
 * `out` must be writable.
 */
enum GmdentStatus gmdent_model_pareto(double shape, double scale, struct GmdentModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from a `gmdent_model_*` constructor and not be freed twice.
 */
void gmdent_model_free(struct GmdentModel *model);

/**
 * Estimates `measure` (e.g. `"gmd"`, `"crt"`) on a sample.
 *
 * # Safety
 * `sample` must be a live handle, `measure` a NUL-terminated string,
 * `params` null or valid, `out` writable.
 */
enum GmdentStatus gmdent_sample_estimate(const struct GmdentSample *sample,
                                         const char *measure,
                                         const struct GmdentParams *params,
                                         enum GmdentConvention conv,
                                         double *out);

/**
 * Population value of `measure` under a model. `tol <= 0` selects the
 * default quadrature tolerance.
 *
 * # Safety
 * As for [`gmdent_sample_estimate`].
 */
enum GmdentStatus gmdent_model_population(const struct GmdentModel *model,
                                          const char *measure,
                                          const struct GmdentParams *params,
                                          double tol,
                                          double *out);

/**
 * Runs the identity suite on a model or a sample (exactly one non-null).
 * `tol <= 0` keeps the default population tolerance. When `json` is
 * non-null it receives the reports as JSON lines, to be released with
 * `gmdent_string_free`.
 *
 * # Safety
 * Handles must be live or null; `summary` writable; `json` null or writable.
 */
enum GmdentStatus gmdent_verify_all(const struct GmdentModel *model,
                                    const struct GmdentSample *sample,
                                    double tol,
                                    struct GmdentVerifySummary *summary,
                                    char **json);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void gmdent_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMDENT_H */
