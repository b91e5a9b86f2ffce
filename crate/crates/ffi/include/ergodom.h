#ifndef ERGODOM_H
#define ERGODOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call. `Ok` is zero.
 */
typedef enum {
  ERGO_STATUS_OK = 0,
  ERGO_STATUS_NULL_POINTER = 1,
  ERGO_STATUS_INVALID_ARGUMENT = 2,
  ERGO_STATUS_GROUP_MISMATCH = 3,
  ERGO_STATUS_OVERFLOW = 4,
  ERGO_STATUS_RESOURCE_LIMIT = 5,
  ERGO_STATUS_DECODE = 6,
  ERGO_STATUS_PARSE = 7,
  ERGO_STATUS_IO = 8,
  ERGO_STATUS_UTF8 = 9,
  ERGO_STATUS_PANIC = 10,
} ErgoStatus;

/**
 * Opaque group element.
 */
typedef struct ErgoElement ErgoElement;

/**
 * Opaque finitely supported measure.
 */
typedef struct ErgoMeasure ErgoMeasure;

/**
 * Opaque finite subset.
 */
typedef struct ErgoSet ErgoSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *ergo_last_error(void);

/**
 * Library version, static storage.
 */
const char *ergo_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ergo_string_free(char *s);

/**
 * Decodes a canonical hex encoding.
 *
 * # Safety
 * `hex` is a NUL-terminated string; `out` is writable.
 */
ErgoStatus ergo_element_from_hex(const char *hex, ErgoElement **out);

/**
 * Element of `Z^dim`.
 *
 * # Safety
 * `coords` points to `dim` integers; `out` is writable.
 */
ErgoStatus ergo_element_zd(const int64_t *coords, size_t dim, ErgoElement **out);

/**
 * Heisenberg element `(a, b, c)`.
 *
 * # Safety
 * `out` is writable.
 */
ErgoStatus ergo_element_heisenberg(int64_t a, int64_t b, int64_t c, ErgoElement **out);

/**
 * Lamplighter element `(pos, K)`; repeated lamps toggle.
 *
 * # Safety
 * `lamps` points to `len` integers (may be null when `len` is 0); `out` is
 * writable.
 */
ErgoStatus ergo_element_lamplighter(int64_t pos,
                                    const int64_t *lamps,
                                    size_t len,
                                    ErgoElement **out);

/**
 * `a · b`.
 *
 * # Safety
 * Handles are live; `out` is writable.
 */
ErgoStatus ergo_element_mul(const ErgoElement *a, const ErgoElement *b, ErgoElement **out);

/**
 * `a⁻¹`.
 *
 * # Safety
 * `a` is live; `out` is writable.
 */
ErgoStatus ergo_element_inv(const ErgoElement *a, ErgoElement **out);

/**
 * Canonical hex encoding, freed with [`ergo_string_free`].
 *
 * # Safety
 * `a` is live; `out` is writable.
 */
ErgoStatus ergo_element_to_hex(const ErgoElement *a, char **out);

/**
 * # Safety
 * `a` is null or a live handle from this library.
 */
void ergo_element_free(ErgoElement *a);

/**
 * `F_n` of a Følner family given as JSON, e.g. `{"family":"lamplighter"}`.
 *
 * # Safety
 * `family_json` is a NUL-terminated string; `out` is writable.
 */
ErgoStatus ergo_set_folner(const char *family_json, uint64_t n, size_t cap, ErgoSet **out);

/**
 * `A · B`, failing past `cap` elements.
 *
 * # Safety
 * Handles are live; `out` is writable.
 */
ErgoStatus ergo_set_product(const ErgoSet *a, const ErgoSet *b, size_t cap, ErgoSet **out);

/**
 * # Safety
 * `s` is live; `out` is writable.
 */
ErgoStatus ergo_set_len(const ErgoSet *s, size_t *out);

/**
 * # Safety
 * Handles are live; `out` is writable.
 */
ErgoStatus ergo_set_contains(const ErgoSet *s, const ErgoElement *g, bool *out);

/**
 * # Safety
 * `s` is null or a live handle from this library.
 */
void ergo_set_free(ErgoSet *s);

/**
 * Uniform probability on a nonempty set.
 *
 * # Safety
 * `s` is live; `out` is writable.
 */
ErgoStatus ergo_measure_uniform(const ErgoSet *s, ErgoMeasure **out);

/**
 * Exact convolution `μ ∗ ν`.
 *
 * # Safety
 * Handles are live; `out` is writable.
 */
ErgoStatus ergo_measure_convolve(const ErgoMeasure *mu, const ErgoMeasure *nu, ErgoMeasure **out);

/**
 * `μ({g})` as `"p/q"`.
 *
 * # Safety
 * Handles are live; `out` is writable.
 */
ErgoStatus ergo_measure_mass(const ErgoMeasure *mu, const ErgoElement *g, char **out);

/**
 * Total mass as `"p/q"`.
 *
 * # Safety
 * `mu` is live; `out` is writable.
 */
ErgoStatus ergo_measure_total_mass(const ErgoMeasure *mu, char **out);

/**
 * # Safety
 * `mu` is live; `out` is writable.
 */
ErgoStatus ergo_measure_support_len(const ErgoMeasure *mu, size_t *out);

/**
 * # Safety
 * `mu` is null or a live handle from this library.
 */
void ergo_measure_free(ErgoMeasure *mu);

/**
 * Runs the dominance reports for a run configuration (the same JSON the
 * `dominate` command reads) and returns the report document.
 * `exit_code` receives 0 (pass), 2 (fail) or 3 (budget).
 *
 * # Safety
 * `config_json` is a NUL-terminated string; outputs are writable.
 */
ErgoStatus ergo_dominance_report_json(const char *config_json, char **out_json, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERGODOM_H */
