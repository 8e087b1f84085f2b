#ifndef STREAMLEARN_H
#define STREAMLEARN_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SL_STATUS_NULL_POINTER = 1,
  /**
   * Bad UTF-8, malformed JSON or a buffer of the wrong length.
   */
  SL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Unknown component name or parameter.
   */
  SL_STATUS_CONFIG = 3,
  /**
   * Instance or prediction does not fit the declared layout.
   */
  SL_STATUS_SCHEMA = 4,
  /**
   * A numeric parameter or input outside its domain.
   */
  SL_STATUS_DOMAIN = 5,
  /**
   * Unparseable data in a file-backed stream.
   */
  SL_STATUS_PARSE = 6,
  SL_STATUS_IO = 7,
  /**
   * The library panicked; the handle should be freed.
   */
  SL_STATUS_PANIC = 8,
} SlStatus;

/**
 * Detector output of [`sl_detector_update`].
 */
typedef enum SlDetection {
  SL_DETECTION_NORMAL = 0,
  SL_DETECTION_WARNING = 1,
  SL_DETECTION_DRIFT = 2,
} SlDetection;

typedef struct SlDetector SlDetector;

typedef struct SlModel SlModel;

typedef struct SlStream SlStream;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library.
 */
const char *sl_last_error_message(void);

/**
 * Creates a stream. `params_json` may be null. Relative file paths resolve
 * against the working directory.
 *
 * # Safety
 * `kind` and a non-null `params_json` must be NUL-terminated strings and
 * `out` must be writable.
 */
enum SlStatus sl_stream_new(const char *kind,
                            const char *params_json,
                            uint64_t seed,
                            struct SlStream **out);

/**
 * # Safety
 * `stream` must come from [`sl_stream_new`] and `n_features`, `n_targets`
 * must be writable.
 */
enum SlStatus sl_stream_shape(struct SlStream *stream, size_t *n_features, size_t *n_targets);

/**
 * Number of classes of each target, written to `out[0..n_targets]`.
 *
 * # Safety
 * `out` must hold `n_targets` values.
 */
enum SlStatus sl_stream_cardinality(struct SlStream *stream, size_t *out, size_t n_targets);

/**
 * Draws the next instance. Sets `*produced` to false once the stream is
 * exhausted, leaving the buffers untouched.
 *
 * # Safety
 * `features` must hold `n_features` values and `targets` `n_targets`
 * values, matching [`sl_stream_shape`].
 */
enum SlStatus sl_stream_next(struct SlStream *stream,
                             double *features,
                             size_t n_features,
                             size_t *targets,
                             size_t n_targets,
                             bool *produced);

/**
 * # Safety
 * `stream` must come from [`sl_stream_new`].
 */
enum SlStatus sl_stream_restart(struct SlStream *stream);

/**
 * # Safety
 * `stream` must come from [`sl_stream_new`] or be null; it is invalid afterwards.
 */
void sl_stream_free(struct SlStream *stream);

/**
 * Creates a classifier. `params_json` may be null.
 *
 * # Safety
 * As for [`sl_stream_new`].
 */
enum SlStatus sl_model_new(const char *kind,
                           const char *params_json,
                           uint64_t seed,
                           struct SlModel **out);

/**
 * Trains on `n_rows` instances stored row-major: `features` holds
 * `n_rows * n_features` values and `targets` `n_rows * n_targets` labels.
 * `classes` (per-target class counts, `n_targets` of them) may be null; it
 * only matters on the first call.
 *
 * # Safety
 * Buffers must hold the stated number of elements.
 */
enum SlStatus sl_model_partial_fit(struct SlModel *model,
                                   const double *features,
                                   const size_t *targets,
                                   size_t n_rows,
                                   size_t n_features,
                                   size_t n_targets,
                                   const size_t *classes);

/**
 * Predicted label of each target for one instance.
 *
 * # Safety
 * `x` must hold `n_features` values and `out` `n_targets` values.
 */
enum SlStatus sl_model_predict(struct SlModel *model,
                               const double *x,
                               size_t n_features,
                               size_t *out,
                               size_t n_targets);

/**
 * Class probabilities of target `target` for one instance.
 *
 * # Safety
 * `x` must hold `n_features` values and `out` `n_classes` values.
 */
enum SlStatus sl_model_predict_proba(struct SlModel *model,
                                     const double *x,
                                     size_t n_features,
                                     size_t target,
                                     double *out,
                                     size_t n_classes);

/**
 * # Safety
 * `model` must come from [`sl_model_new`].
 */
enum SlStatus sl_model_reset(struct SlModel *model);

/**
 * # Safety
 * `model` must come from [`sl_model_new`] or be null; it is invalid afterwards.
 */
void sl_model_free(struct SlModel *model);

/**
 * Creates a drift detector. `params_json` may be null.
 *
 * # Safety
 * As for [`sl_stream_new`].
 */
enum SlStatus sl_detector_new(const char *kind, const char *params_json, struct SlDetector **out);

/**
 * # Safety
 * `detector` must come from [`sl_detector_new`] and `status` be writable.
 */
enum SlStatus sl_detector_update(struct SlDetector *detector,
                                 double value,
                                 enum SlDetection *status);

/**
 * Current estimate of the monitored mean.
 *
 * # Safety
 * `detector` must come from [`sl_detector_new`] and `out` be writable.
 */
enum SlStatus sl_detector_estimation(struct SlDetector *detector, double *out);

/**
 * # Safety
 * `detector` must come from [`sl_detector_new`].
 */
enum SlStatus sl_detector_reset(struct SlDetector *detector);

/**
 * # Safety
 * `detector` must come from [`sl_detector_new`] or be null; it is invalid afterwards.
 */
void sl_detector_free(struct SlDetector *detector);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STREAMLEARN_H */
