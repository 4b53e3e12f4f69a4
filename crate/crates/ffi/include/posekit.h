/* C interface to the posekit pose-data toolkit. */

#ifndef POSEKIT_H
#define POSEKIT_H

/* Generated by cbindgen from posekit-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum {
  PK_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PK_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PK_STATUS_INVALID_UTF8 = 2,
  /**
   * File could not be read or written.
   */
  PK_STATUS_IO = 3,
  /**
   * Malformed `.pose` payload or violated container invariant.
   */
  PK_STATUS_FORMAT = 4,
  /**
   * A numeric transform rejected its input.
   */
  PK_STATUS_OPS = 5,
  /**
   * Stitching failed.
   */
  PK_STATUS_STITCH = 6,
  /**
   * Formal SignWriting input or token stream was malformed.
   */
  PK_STATUS_FSW = 7,
  /**
   * Probability rows were out of range.
   */
  PK_STATUS_SEGMENTATION = 8,
  /**
   * An argument value was out of range.
   */
  PK_STATUS_INVALID_ARGUMENT = 9,
} PkStatus;

/**
 * An in-memory pose: header plus coordinate and confidence tensors.
 */
typedef struct PkPose PkPose;

/**
 * One decoded segment, frame indices inclusive.
 */
typedef struct {
  uint64_t start;
  uint64_t end;
} PkSegment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null when the last
 * call succeeded. The pointer stays valid until the next failing call on
 * the same thread; do not free it.
 */
const char *pk_last_error_message(void);

/**
 * Reads a `.pose` file into a new handle.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
PkStatus pk_pose_read_file(const char *path, PkPose **out);

/**
 * Parses an in-memory `.pose` payload.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out` must be valid.
 */
PkStatus pk_pose_read_bytes(const uint8_t *bytes, size_t len, PkPose **out);

/**
 * Serializes a pose to a `.pose` file.
 *
 * # Safety
 * `pose` must be a live handle and `path` a valid NUL-terminated string.
 */
PkStatus pk_pose_write_file(const PkPose *pose, const char *path);

/**
 * Releases a pose handle. Null is a no-op.
 *
 * # Safety
 * `pose` must be a handle returned by this library, not yet freed.
 */
void pk_pose_free(PkPose *pose);

/**
 * Name of the component at `index`, as a fresh string. Free it with
 * [`pk_string_free`]. Null when the handle is null or the index is out of
 * range.
 *
 * # Safety
 * `pose` must be a live handle or null.
 */
char *pk_pose_component_name(const PkPose *pose, size_t index);

/**
 * Keeps only the named components, in the given order.
 *
 * # Safety
 * `names` must point to `count` valid NUL-terminated strings; `pose` must
 * be a live handle; `out` must be valid.
 */
PkStatus pk_pose_select_components(const PkPose *pose,
                                   const char *const *names,
                                   size_t count,
                                   PkPose **out);

/**
 * Scales and recenters so the mean distance between the two named points is
 * 1 and their mean midpoint sits at the origin, per person.
 *
 * # Safety
 * `pose` must be a live handle; `left`, `right` valid strings; `out` valid.
 */
PkStatus pk_pose_normalize_shoulders(const PkPose *pose,
                                     const char *left,
                                     const char *right,
                                     PkPose **out);

/**
 * Resamples to a new frame rate by linear interpolation.
 *
 * # Safety
 * `pose` must be a live handle and `out` valid.
 */
PkStatus pk_pose_interpolate_fps(const PkPose *pose, uint16_t new_fps, PkPose **out);

/**
 * Savitzky-Golay smoothing along time.
 *
 * # Safety
 * `pose` must be a live handle and `out` valid.
 */
PkStatus pk_pose_savgol_smooth(const PkPose *pose, size_t window, size_t polyorder, PkPose **out);

/**
 * Optical flow of every point: `frames * people * points` doubles in frame-
 * major order, allocated by this library. Free with [`pk_doubles_free`].
 *
 * # Safety
 * `pose` must be a live handle; `out_values` and `out_len` must be valid.
 */
PkStatus pk_pose_optical_flow(const PkPose *pose, double **out_values, size_t *out_len);

/**
 * Stitches clips in order with the default configuration and the given
 * padding.
 *
 * # Safety
 * `clips` must point to `count` live handles; `out` must be valid.
 */
PkStatus pk_pose_stitch(const PkPose *const *clips,
                        size_t count,
                        double padding_seconds,
                        PkPose **out);

/**
 * Tokenizes a Formal SignWriting string into space-separated tokens. Free
 * the result with [`pk_string_free`].
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be valid.
 */
PkStatus pk_fsw_tokenize(const char *text, char **out);

/**
 * Renders a space-separated token stream back into FSW text. Free the
 * result with [`pk_string_free`].
 *
 * # Safety
 * `tokens` must be a valid NUL-terminated string; `out` must be valid.
 */
PkStatus pk_fsw_detokenize(const char *tokens, char **out);

/**
 * Size of the closed FSW token vocabulary (1182).
 */
size_t pk_fsw_vocabulary_size(void);

/**
 * Greedy threshold decoding of per-frame (b, i, o) probabilities (0-100
 * scale) into segments. On success `out_segments` receives an array of
 * `out_count` segments allocated by this library; free it with
 * [`pk_segments_free`].
 *
 * # Safety
 * `b`, `i`, `o` must each point to `len` doubles; the out pointers must be
 * valid.
 */
PkStatus pk_decode_probs(const double *b,
                         const double *i,
                         const double *o,
                         size_t len,
                         double threshold_b,
                         double threshold_o,
                         PkSegment **out_segments,
                         size_t *out_count);

/**
 * Frees a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void pk_string_free(char *s);

/**
 * Frees a double array returned by this library. Null is a no-op.
 *
 * # Safety
 * `values` and `len` must come from the same successful call.
 */
void pk_doubles_free(double *values, size_t len);

/**
 * Frees a segment array returned by [`pk_decode_probs`]. Null is a no-op.
 *
 * # Safety
 * `segments` and `count` must come from the same successful call.
 */
void pk_segments_free(PkSegment *segments, size_t count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSEKIT_H */
