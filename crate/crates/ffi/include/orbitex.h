#ifndef ORBITEX_H
#define ORBITEX_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. The numeric values match the CLI exit codes.
 */
typedef enum OrbitexStatus {
  ORBITEX_STATUS_OK = 0,
  /**
   * Null pointer or malformed UTF-8.
   */
  ORBITEX_STATUS_INVALID_ARGUMENT = 1,
  ORBITEX_STATUS_INVALID_CONFIG = 2,
  ORBITEX_STATUS_PRECISION_UNREACHABLE = 3,
  ORBITEX_STATUS_RESOURCE_LIMIT = 4,
  ORBITEX_STATUS_DOMAIN = 5,
  ORBITEX_STATUS_IO = 6,
  ORBITEX_STATUS_INTERNAL = 70,
  ORBITEX_STATUS_PANIC = 99,
} OrbitexStatus;

typedef struct OrbitexBracket OrbitexBracket;

typedef struct OrbitexCensus OrbitexCensus;

/**
 * Unicritical generator set.
 */
typedef struct OrbitexGeneratorSet OrbitexGeneratorSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free.
 */
const char *orbitex_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The caller owns
 * the returned string.
 */
char *orbitex_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void orbitex_string_free(char *s);

/**
 * Builds the maps z^d + c for `len` degrees sharing the constant `constant`
 * (a decimal or `p/q` string).
 *
 * # Safety
 * `degrees` must point at `len` values and `constant` must be a valid C string.
 */
enum OrbitexStatus orbitex_generator_set_new(const uint64_t *degrees,
                                             size_t len,
                                             const char *constant,
                                             struct OrbitexGeneratorSet **out);

/**
 * Builds a generator set from its JSON description, which may carry
 * arbitrarily large degrees and a tail bound.
 *
 * # Safety
 * `json` must be a valid C string.
 */
enum OrbitexStatus orbitex_generator_set_from_json(const char *json,
                                                   struct OrbitexGeneratorSet **out);

/**
 * # Safety
 * `set` must be NULL or a handle from this library, freed once.
 */
void orbitex_generator_set_free(struct OrbitexGeneratorSet *set);

/**
 * # Safety
 * `set` must be a live handle.
 */
size_t orbitex_generator_set_len(const struct OrbitexGeneratorSet *set);

/**
 * Brackets the orbit growth exponent. A tail bound from the JSON
 * description is honoured. `digits` is the working precision, `tolerance`
 * the target width of each endpoint.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum OrbitexStatus orbitex_exponent_bounds(const struct OrbitexGeneratorSet *set,
                                           double delta,
                                           uint32_t digits,
                                           double tolerance,
                                           struct OrbitexBracket **out);

/**
 * # Safety
 * `b` must be a live handle.
 */
double orbitex_bracket_lower(const struct OrbitexBracket *b);

/**
 * # Safety
 * `b` must be a live handle.
 */
double orbitex_bracket_upper(const struct OrbitexBracket *b);

/**
 * # Safety
 * `b` must be a live handle and `out` writable.
 */
enum OrbitexStatus orbitex_bracket_to_json(const struct OrbitexBracket *b, char **out);

/**
 * # Safety
 * `b` must be NULL or a handle from this library, freed once.
 */
void orbitex_bracket_free(struct OrbitexBracket *b);

/**
 * Enumerates the orbit of `point` up to multiplicative height `bound`
 * (decimal or `1e30` style). `max_entries` of zero means the default cap.
 *
 * # Safety
 * `set` must be a live handle, strings valid and `out` writable.
 */
enum OrbitexStatus orbitex_census_new(const struct OrbitexGeneratorSet *set,
                                      const char *point,
                                      const char *bound,
                                      size_t max_entries,
                                      bool allow_partial,
                                      struct OrbitexCensus **out);

/**
 * Number of distinct orbit points, saturating at `UINT64_MAX`.
 *
 * # Safety
 * `c` must be a live handle.
 */
uint64_t orbitex_census_point_count(const struct OrbitexCensus *c);

/**
 * Largest number of words reaching a single point.
 *
 * # Safety
 * `c` must be a live handle.
 */
uint64_t orbitex_census_max_multiplicity(const struct OrbitexCensus *c);

/**
 * # Safety
 * `c` must be a live handle.
 */
bool orbitex_census_is_partial(const struct OrbitexCensus *c);

/**
 * Serialises the census as JSON lines.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum OrbitexStatus orbitex_census_to_jsonl(const struct OrbitexGeneratorSet *set,
                                           const struct OrbitexCensus *c,
                                           char **out);

/**
 * # Safety
 * `c` must be NULL or a handle from this library, freed once.
 */
void orbitex_census_free(struct OrbitexCensus *c);

/**
 * Number of compositions of `n` with parts in `parts`, as a decimal string.
 *
 * # Safety
 * `parts` must point at `len` values and `out` be writable.
 */
enum OrbitexStatus orbitex_composition_count(const uint64_t *parts,
                                             size_t len,
                                             uint64_t n,
                                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBITEX_H */
