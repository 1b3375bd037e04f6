#ifndef CDGA_LAB_H
#define CDGA_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CdgaLabStatus {
  CDGA_LAB_STATUS_OK = 0,
  CDGA_LAB_STATUS_NULL_POINTER = 1,
  CDGA_LAB_STATUS_INVALID_UTF8 = 2,
  CDGA_LAB_STATUS_INPUT_ERROR = 3,
  CDGA_LAB_STATUS_COMPUTATION_ERROR = 4,
  CDGA_LAB_STATUS_BUFFER_TOO_SMALL = 5,
  CDGA_LAB_STATUS_PANIC = 6,
} CdgaLabStatus;

/**
 * Opaque handle: a model together with its cochain space.
 */
typedef struct CdgaLabSpace CdgaLabSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next call on this thread.
 */
const char *cdga_lab_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cdga_lab_string_free(char *s);

/**
 * Builds a space from a catalog model name.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum CdgaLabStatus cdga_lab_space_from_model(const char *name, struct CdgaLabSpace **out);

/**
 * Builds a space from the JSON text of a CDGA or Lie algebra file.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum CdgaLabStatus cdga_lab_space_from_json(const char *json, struct CdgaLabSpace **out);

/**
 * Frees a space. Null is ignored.
 *
 * # Safety
 * `space` must come from this library and not have been freed.
 */
void cdga_lab_space_free(struct CdgaLabSpace *space);

/**
 * Highest degree with a nonzero cochain.
 *
 * # Safety
 * `space` must be live; `out` must be writable.
 */
enum CdgaLabStatus cdga_lab_space_top_degree(const struct CdgaLabSpace *space, uint32_t *out);

/**
 * Writes the Betti numbers `b_0..b_top` into `buf`. `len` receives the
 * count; if `cap` is too small nothing is written to `buf` and
 * `BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `space` must be live; `len` must be writable; `buf` must hold `cap`
 * entries.
 */
enum CdgaLabStatus cdga_lab_space_betti(const struct CdgaLabSpace *space,
                                        size_t *buf,
                                        size_t cap,
                                        size_t *len);

/**
 * Massey product of comma-separated classes such as `"[x1],[x1],[x2]"`,
 * as canonical JSON. `witness` may be null; when given, `samples`
 * indeterminacy representatives are paired against it.
 *
 * # Safety
 * `space` must be live; strings must be nul-terminated; `out` writable.
 */
enum CdgaLabStatus cdga_lab_massey(const struct CdgaLabSpace *space,
                                   const char *classes,
                                   const char *witness,
                                   uint64_t samples,
                                   uint64_t seed,
                                   char **out);

/**
 * Formality report as canonical JSON. `up_to` of zero searches every
 * degree.
 *
 * # Safety
 * `space` must be live; `out` must be writable.
 */
enum CdgaLabStatus cdga_lab_formality(const struct CdgaLabSpace *space, uint32_t up_to, char **out);

/**
 * Fixed-point count of a lattice model given by catalog name or JSON text,
 * over the window of the given radius.
 *
 * # Safety
 * `source` must be nul-terminated; `out` must be writable.
 */
enum CdgaLabStatus cdga_lab_fixed_points(const char *source, int64_t radius, char **out);

/**
 * Runs the isotopy verification and returns its report as canonical JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum CdgaLabStatus cdga_lab_isotopy_verify(size_t samples,
                                           size_t shell_samples,
                                           uint64_t seed,
                                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDGA_LAB_H */
