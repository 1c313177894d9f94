#ifndef HARMONIC_H
#define HARMONIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum HarmonicStatus {
  HARMONIC_STATUS_OK = 0,
  HARMONIC_STATUS_NULL_POINTER = 1,
  HARMONIC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A string argument was not UTF-8.
   */
  HARMONIC_STATUS_UTF8 = 3,
  /**
   * The requested point or conjugate does not exist.
   */
  HARMONIC_STATUS_NOT_FOUND = 4,
  /**
   * A verifier ran and reported a falsified claim.
   */
  HARMONIC_STATUS_FALSIFIED = 5,
  /**
   * The verifier could not run.
   */
  HARMONIC_STATUS_VERIFY_ERROR = 6,
  HARMONIC_STATUS_PANIC = 7,
} HarmonicStatus;

/**
 * Opaque PG(2,q) handle.
 */
typedef struct HarmonicPlane HarmonicPlane;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *harmonic_last_error(void);

/**
 * Builds PG(2,q) from a field descriptor such as `5`, `9` or `3^2:1,0,1`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum HarmonicStatus harmonic_plane_new(const char *descriptor, struct HarmonicPlane **out);

/**
 * Releases a plane. Null is ignored.
 *
 * # Safety
 * `plane` must come from `harmonic_plane_new` and not be used afterwards.
 */
void harmonic_plane_free(struct HarmonicPlane *plane);

/**
 * Field order q and point count q²+q+1.
 *
 * # Safety
 * `plane` must be a live handle; `order` and `points` writable or null.
 */
enum HarmonicStatus harmonic_plane_info(const struct HarmonicPlane *plane,
                                        uint32_t *order,
                                        size_t *points);

/**
 * Index of a point literal such as `[1,2,0]`.
 *
 * # Safety
 * `plane` live, `text` NUL-terminated, `out` writable.
 */
enum HarmonicStatus harmonic_point_index(const struct HarmonicPlane *plane,
                                         const char *text,
                                         uint32_t *out);

/**
 * Canonical label of point `idx`, to be freed with `harmonic_string_free`.
 *
 * # Safety
 * `plane` live, `out` writable.
 */
enum HarmonicStatus harmonic_point_label(const struct HarmonicPlane *plane,
                                         uint32_t idx,
                                         char **out);

/**
 * Harmonic conjugate of `x` with respect to `y` and `z`.
 *
 * # Safety
 * `plane` live, `out` writable.
 */
enum HarmonicStatus harmonic_conjugate(const struct HarmonicPlane *plane,
                                       uint32_t y,
                                       uint32_t z,
                                       uint32_t x,
                                       uint32_t *out);

/**
 * Harmonic closure of `len` point indices. Writes the closure size to
 * `size` and, if `members` is non-null, a 0/1 flag per plane point into
 * `members` (which must hold `q²+q+1` bytes).
 *
 * # Safety
 * `plane` live, `points` readable for `len` entries, `size` writable,
 * `members` null or writable for the plane's point count.
 */
enum HarmonicStatus harmonic_closure(const struct HarmonicPlane *plane,
                                     const uint32_t *points,
                                     size_t len,
                                     size_t *size,
                                     uint8_t *members);

/**
 * Runs a verifier (`theorem-pp`, `minimality`, `symmetry`,
 * `sequence-plane`, `oracle`, `all`) and returns its JSON report in `out`.
 * The report is written even when the claim is falsified.
 *
 * # Safety
 * `claim` NUL-terminated, `out` writable.
 */
enum HarmonicStatus harmonic_verify_json(const char *claim,
                                         uint32_t p,
                                         size_t samples,
                                         uint64_t seed,
                                         char **out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void harmonic_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONIC_H */
