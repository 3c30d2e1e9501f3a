#ifndef OBF_H
#define OBF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ObfMode {
  OBF_MODE_SPLIT = 0,
  OBF_MODE_COMPOSITE = 1,
} ObfMode;

/**
 * Result of every fallible call. Details are in [`obf_last_error`].
 */
typedef enum ObfStatus {
  OBF_STATUS_OK = 0,
  OBF_STATUS_NULL_ARGUMENT = 1,
  OBF_STATUS_INVALID_UTF8 = 2,
  /**
   * The input could not be parsed as a document of the expected kind.
   */
  OBF_STATUS_MALFORMED = 3,
  /**
   * A move guard or reduction hypothesis failed.
   */
  OBF_STATUS_GUARD = 4,
  /**
   * The foliation breaks a structural invariant.
   */
  OBF_STATUS_INVALID = 5,
} ObfStatus;

/**
 * Opaque foliation handle.
 */
typedef struct ObfFoliation ObfFoliation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Never free it.
 */
const char *obf_version(void);

/**
 * Message of the last failed call on this thread, or an empty string.
 *
 * # Safety
 * The pointer stays valid until the next failing call on the same thread and
 * must not be freed.
 */
const char *obf_last_error(void);

/**
 * Parse a foliation document (or a bare foliation payload).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer. On
 * success `*out` owns a handle to release with [`obf_foliation_free`].
 */
enum ObfStatus obf_foliation_from_json(const char *json, struct ObfFoliation **out);

/**
 * # Safety
 * `f` must come from [`obf_foliation_from_json`] and not be freed twice.
 * Null is ignored.
 */
void obf_foliation_free(struct ObfFoliation *f);

/**
 * Canonical foliation document for `f`.
 *
 * # Safety
 * `f` must be a live handle and `out` writable. Free `*out` with
 * [`obf_string_free`].
 */
enum ObfStatus obf_foliation_to_json(const struct ObfFoliation *f, char **out);

/**
 * `Ok` when `f` satisfies every structural invariant, `Invalid` otherwise
 * with the violations in [`obf_last_error`].
 *
 * # Safety
 * `f` must be a live handle.
 */
enum ObfStatus obf_validate(const struct ObfFoliation *f);

/**
 * Census of `f` as JSON.
 *
 * # Safety
 * `f` must be a live handle and `out` writable. Free `*out` with
 * [`obf_string_free`].
 */
enum ObfStatus obf_census_json(const struct ObfFoliation *f, char **out);

/**
 * Reduce `f` and write the trace document to `*out`. An obstruction still
 * yields the trace and returns `Guard`.
 *
 * # Safety
 * `f` must be a live handle and `out` writable. Free `*out` with
 * [`obf_string_free`].
 */
enum ObfStatus obf_reduce_json(const struct ObfFoliation *f, enum ObfMode mode, char **out);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void obf_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* OBF_H */
