#ifndef UNIVDEF_H
#define UNIVDEF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UdStatus {
  UD_STATUS_OK = 0,
  UD_STATUS_PARSE = 1,
  UD_STATUS_UNSUPPORTED_SIZE = 2,
  UD_STATUS_RING_MISMATCH = 3,
  UD_STATUS_NOT_UNIT = 4,
  UD_STATUS_NOT_SQUARE = 5,
  UD_STATUS_BAD_BRANCH = 6,
  UD_STATUS_NON_NILPOTENT_CONSTANT = 7,
  UD_STATUS_PRECISION_UNDERFLOW = 8,
  UD_STATUS_NOT_AUTOMORPHISM = 9,
  UD_STATUS_IDENTITY_AT_PRECISION = 10,
  UD_STATUS_SEARCH_EXHAUSTED = 11,
  UD_STATUS_NOT_INVERTIBLE = 12,
  UD_STATUS_INVALID_INPUT = 13,
  UD_STATUS_NULL_POINTER = 14,
  UD_STATUS_INVALID_UTF8 = 15,
  UD_STATUS_PANIC = 16,
} UdStatus;

/**
 * A finite Artinian ring.
 */
typedef struct UdRing UdRing;

/**
 * A truncated power series over a [`UdRing`].
 */
typedef struct UdSeries UdSeries;

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *ud_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ud_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ud_string_free(char *s);

/**
 * Parse a ring descriptor such as `F5[e]/(e^3)` or `cyclo(4)`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum UdStatus ud_ring_new(const char *descriptor, struct UdRing **out);

/**
 * # Safety
 * `ring` must come from [`ud_ring_new`] and not have been freed.
 */
void ud_ring_free(struct UdRing *ring);

/**
 * Number of elements, or `UnsupportedSize` when it does not fit in 64 bits.
 *
 * # Safety
 * `ring` must be a live handle; `out` must be writable.
 */
enum UdStatus ud_ring_cardinality(const struct UdRing *ring, uint64_t *out);

/**
 * Parse a series literal such as `t + 2*t^3 @prec=8`.
 *
 * # Safety
 * `ring` must be a live handle, `literal` NUL-terminated, `out` writable.
 */
enum UdStatus ud_series_parse(const struct UdRing *ring,
                              const char *literal,
                              struct UdSeries **out);

/**
 * # Safety
 * `series` must come from this library and not have been freed.
 */
void ud_series_free(struct UdSeries *series);

/**
 * Canonical text form, released with [`ud_string_free`].
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum UdStatus ud_series_to_string(const struct UdSeries *series, char **out);

/**
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum UdStatus ud_series_prec(const struct UdSeries *series, size_t *out);

/**
 * Coefficient of `t^index` as a ring literal.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum UdStatus ud_series_coefficient(const struct UdSeries *series, size_t index, char **out);

/**
 * `g ∘ f`.
 *
 * # Safety
 * `g` and `f` must be live handles over the same ring; `out` writable.
 */
enum UdStatus ud_series_compose(const struct UdSeries *g,
                                const struct UdSeries *f,
                                struct UdSeries **out);

/**
 * Least `n <= cap` with `series^n = t`, or 0 when none is found.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum UdStatus ud_series_order(const struct UdSeries *series, uint64_t cap, uint64_t *out);

/**
 * Hasse conductor and the residue of its leading coefficient.
 *
 * # Safety
 * `series` must be a live handle; both outputs must be writable.
 */
enum UdStatus ud_series_conductor(const struct UdSeries *series,
                                  size_t *out_value,
                                  uint8_t *out_leading);

/**
 * `t / sqrt(t^2 + 1)` modulo `t^prec`.
 *
 * # Safety
 * `ring` must be a live handle; `out` must be writable.
 */
enum UdStatus ud_base_sigma(const struct UdRing *ring, size_t prec, struct UdSeries **out);

/**
 * `t / sqrt(t^2 + y)` for a root `y` of `Φ₅` congruent to 1.
 *
 * # Safety
 * `ring` must be a live handle, `y` NUL-terminated, `out` writable.
 */
enum UdStatus ud_versal_family(const struct UdRing *ring,
                               const char *y,
                               size_t prec,
                               struct UdSeries **out);

/**
 * Run a CLI subcommand. `argv` excludes the program name. The JSON report
 * (or error text) goes to `out_json` and the process exit code to
 * `out_exit_code`; the status is `Ok` whenever the command ran.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; outputs must be writable.
 */
enum UdStatus ud_run(int argc, const char *const *argv, char **out_json, int *out_exit_code);

#endif  /* UNIVDEF_H */
