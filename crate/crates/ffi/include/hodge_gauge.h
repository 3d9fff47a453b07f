#ifndef HODGE_GAUGE_H
#define HODGE_GAUGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. The first three agree with the command line exit codes.
 */
typedef enum HgStatus {
  HG_OK = 0,
  /*
   A mathematical condition failed (for instance opposedness).
   */
  HG_VIOLATION = 1,
  /*
   The input could not be parsed or has inconsistent shapes.
   */
  HG_MALFORMED = 2,
  /*
   A required pointer argument was null.
   */
  HG_NULL_POINTER = 3,
  /*
   A string argument was not valid UTF-8.
   */
  HG_INVALID_UTF8 = 4,
  /*
   The library panicked; this is a bug.
   */
  HG_PANIC = 5,
} HgStatus;

/*
 Opaque equivariant connection.
 */
typedef struct HgConnection HgConnection;

/*
 Opaque δ datum: Hodge numbers and a unipotent δ.
 */
typedef struct HgDelta HgDelta;

/*
 Opaque mixed Hodge structure (a filtration triple, possibly not opposed).
 */
typedef struct HgMhs HgMhs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread, or null. The pointer stays
 valid until the next `hg_*` call on the same thread.
 */
const char *hg_last_error_message(void);

/*
 Static version string.
 */
const char *hg_version(void);

/*
 Releases a string returned through a `char **out` argument. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed already.
 */
void hg_string_free(char *s);

/*
 Parses an `mhs` document. Opposedness is not checked here.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HgStatus hg_mhs_from_json(const char *json, struct HgMhs **out);

/*
 # Safety
 `v` must be null or a live handle from this library.
 */
void hg_mhs_free(struct HgMhs *v);

/*
 # Safety
 `v` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_mhs_dim(const struct HgMhs *v, size_t *out);

/*
 Checks opposedness. On success writes the Hodge numbers as JSON
 (`[{"p":..,"q":..,"h":..}, ...]`); on failure returns `HG_VIOLATION`.

 # Safety
 `v` must be a live handle; `hodge_json` must be writable.
 */
enum HgStatus hg_mhs_validate(const struct HgMhs *v, char **hodge_json);

/*
 Serializes a structure back to its canonical document.

 # Safety
 `v` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_mhs_to_json(const struct HgMhs *v, char **out);

/*
 δ of a mixed Hodge structure in its canonical basis.

 # Safety
 `v` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_delta_from_mhs(const struct HgMhs *v, struct HgDelta **out);

/*
 Parses a `delta` document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HgStatus hg_delta_from_json(const char *json, struct HgDelta **out);

/*
 # Safety
 `d` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_delta_to_json(const struct HgDelta *d, char **out);

/*
 Writes 1 to `out` when the two data are identical, 0 otherwise.

 # Safety
 Both handles must be live; `out` must be writable.
 */
enum HgStatus hg_delta_equal(const struct HgDelta *a, const struct HgDelta *b, int32_t *out);

/*
 # Safety
 `d` must be null or a live handle from this library.
 */
void hg_delta_free(struct HgDelta *d);

/*
 The Fock-Schwinger connection whose triangle holonomy is δ.

 # Safety
 `d` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_connection_from_delta(const struct HgDelta *d, struct HgConnection **out);

/*
 Triangle holonomy of a connection, as a δ datum.

 # Safety
 `c` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_connection_triangle_delta(const struct HgConnection *c, struct HgDelta **out);

/*
 # Safety
 `c` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_connection_to_json(const struct HgConnection *c, char **out);

/*
 # Safety
 `c` must be null or a live handle from this library.
 */
void hg_connection_free(struct HgConnection *c);

/*
 Runs one command-line pipeline (`validate`, `split`, `connect`, `holonomy`,
 `roundtrip`, `rees`, `ext`, `lie`) on a document and writes the JSON report.
 The return value mirrors the report status; a report is written whenever
 the status is `HG_OK`, `HG_VIOLATION` or `HG_MALFORMED`.

 # Safety
 `command` and `json` must be NUL-terminated strings; `report_json` must be writable.
 */
enum HgStatus hg_run(const char *command, const char *json, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HODGE_GAUGE_H */
