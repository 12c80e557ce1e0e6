#ifndef MADER_H
#define MADER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 2, 3 and 4 match the command-line exit codes.
 */
typedef enum MaderStatus {
  MADER_STATUS_OK = 0,
  MADER_STATUS_NULL_POINTER = 1,
  MADER_STATUS_PARSE = 2,
  MADER_STATUS_INTERNAL = 3,
  MADER_STATUS_ORACLE_CAP = 4,
  MADER_STATUS_INVALID_UTF8 = 5,
  MADER_STATUS_OUT_OF_RANGE = 6,
  MADER_STATUS_PANIC = 7,
} MaderStatus;

/**
 * Opaque parsed instance.
 */
typedef struct MaderInstance MaderInstance;

/**
 * Opaque solve result.
 */
typedef struct MaderReport MaderReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *mader_last_error(void);

/**
 * Parses an instance from NUL-terminated text in the instance format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum MaderStatus mader_instance_parse(const char *text, struct MaderInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from [`mader_instance_parse`] and not be used afterwards.
 */
void mader_instance_free(struct MaderInstance *inst);

/**
 * Vertex count, or 0 for null.
 *
 * # Safety
 * `inst` must be null or a live instance.
 */
size_t mader_instance_vertex_count(const struct MaderInstance *inst);

/**
 * Edge count, or 0 for null.
 *
 * # Safety
 * `inst` must be null or a live instance.
 */
size_t mader_instance_edge_count(const struct MaderInstance *inst);

/**
 * Solves an instance using `threads` workers for independent components.
 *
 * # Safety
 * `inst` must be a live instance and `out` a valid pointer.
 */
enum MaderStatus mader_solve(const struct MaderInstance *inst,
                             uint32_t threads,
                             struct MaderReport **out);

/**
 * Brute-force packing number for instances with at most `cap` vertices.
 *
 * # Safety
 * `inst` must be a live instance and `out` a valid pointer.
 */
enum MaderStatus mader_oracle(const struct MaderInstance *inst, size_t cap, size_t *out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from [`mader_solve`] and not be used afterwards.
 */
void mader_report_free(struct MaderReport *report);

/**
 * Number of paths in the packing, or 0 for null.
 *
 * # Safety
 * `report` must be null or a live report.
 */
size_t mader_report_packing_size(const struct MaderReport *report);

/**
 * The field size used, or 0 when fewer than two blocks made it unnecessary.
 *
 * # Safety
 * `report` must be null or a live report.
 */
uint32_t mader_report_field_size(const struct MaderReport *report);

/**
 * Number of successful augmentations over all components.
 *
 * # Safety
 * `report` must be null or a live report.
 */
size_t mader_report_iterations(const struct MaderReport *report);

/**
 * Copies path `index` as 1-indexed vertex ids into `buf`. `*len` receives
 * the path length; if `cap` is too small nothing is copied and
 * `OutOfRange` is returned, so a call with `cap = 0` queries the length.
 *
 * # Safety
 * `report` must be a live report, `len` valid, and `buf` valid for `cap` writes.
 */
enum MaderStatus mader_report_path(const struct MaderReport *report,
                                   size_t index,
                                   uint32_t *buf,
                                   size_t cap,
                                   size_t *len);

/**
 * Packing in the text output format. Free with [`mader_string_free`].
 *
 * # Safety
 * `report` must be null or a live report.
 */
char *mader_report_packing_text(const struct MaderReport *report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void mader_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MADER_H */
