/* C interface to the Graev extension library. Regenerate with: cbindgen --config cbindgen.toml --output include/graev.h */

#ifndef GRAEV_H
#define GRAEV_H

#include <stdint.h>
#include <stddef.h>
#include <stdbool.h>

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum GraevStatus {
  GRAEV_STATUS_OK = 0,
  GRAEV_STATUS_NULL_ARGUMENT = 1,
  GRAEV_STATUS_UTF8 = 2,
  GRAEV_STATUS_PARSE = 3,
  GRAEV_STATUS_INVALID_SPACE = 4,
  GRAEV_STATUS_INDEX_OUT_OF_RANGE = 5,
  GRAEV_STATUS_CAPACITY_EXCEEDED = 6,
  GRAEV_STATUS_GUARD_EXCEEDED = 7,
  GRAEV_STATUS_PRECONDITION = 8,
  GRAEV_STATUS_INTERNAL = 9,
} GraevStatus;

/**
 * Opaque handle to a validated ground space.
 */
typedef struct GraevSpace GraevSpace;

#ifdef __cplusplus
extern "C" {
#endif /* __cplusplus */

/**
 * Parse and validate a space from JSON. On success `*out` owns the handle;
 * release it with `graev_space_free`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
GraevStatus graev_space_parse_json(const char *json, GraevSpace **out);

/**
 * Build a space from a row-major `n x n` distance table.
 *
 * # Safety
 * `dist` must point to `n * n` doubles; `out` must be a valid pointer.
 */
GraevStatus graev_space_from_matrix(const double *dist, size_t n, GraevSpace **out);

/**
 * Release a space handle. NULL is a no-op.
 *
 * # Safety
 * `space` must have been returned by a constructor of this library and not
 * already freed.
 */
void graev_space_free(GraevSpace *space);

/**
 * Number of points in the space, `e` included.
 *
 * # Safety
 * `space` must be a live handle.
 */
size_t graev_space_len(const GraevSpace *space);

/**
 * Ground distance between two points.
 *
 * # Safety
 * `space` must be a live handle and `out` a valid pointer.
 */
GraevStatus graev_space_distance(const GraevSpace *space, size_t i, size_t j, double *out);

/**
 * Graev norm of the element summed from `points`. `match_limit = 0` selects
 * the default capacity.
 *
 * # Safety
 * `space` must be a live handle; `points` must hold `len` entries; `out_value`
 * must be a valid pointer.
 */
GraevStatus graev_norm(const GraevSpace *space,
                       const uint32_t *points,
                       size_t len,
                       size_t match_limit,
                       double *out_value);

/**
 * As `graev_norm`, also returning the optimal matching as a JSON array of
 * index pairs (release with `graev_string_free`).
 *
 * # Safety
 * As `graev_norm`; `out_witness_json` must be a valid pointer.
 */
GraevStatus graev_norm_witness_json(const GraevSpace *space,
                                    const uint32_t *points,
                                    size_t len,
                                    size_t match_limit,
                                    double *out_value,
                                    char **out_witness_json);

/**
 * Graev distance between the elements summed from two point lists.
 *
 * # Safety
 * As `graev_norm`, for both point lists.
 */
GraevStatus graev_dist(const GraevSpace *space,
                       const uint32_t *g_points,
                       size_t g_len,
                       const uint32_t *h_points,
                       size_t h_len,
                       size_t match_limit,
                       double *out_value);

/**
 * Minimum representation weight over at most `max_pairs` pairs: the
 * enumeration oracle for cross-checking `graev_norm`.
 *
 * # Safety
 * As `graev_norm`.
 */
GraevStatus graev_oracle_norm(const GraevSpace *space,
                              const uint32_t *points,
                              size_t len,
                              size_t max_pairs,
                              double *out_value);

/**
 * Release a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must have been returned by this library and not already freed.
 */
void graev_string_free(char *s);

/**
 * Static description of a status code.
 */
const char *graev_status_message(GraevStatus status);

#ifdef __cplusplus
}  /* extern "C" */
#endif /* __cplusplus */

#endif  /* GRAEV_H */
