#ifndef TWOSQ_H
#define TWOSQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes; the numeric values match the command-line exit codes where they overlap.
typedef enum TwosqStatus {
  TWOSQ_STATUS_OK = 0,
  TWOSQ_STATUS_NOT_FOUND = 1,
  TWOSQ_STATUS_INVALID_ARGUMENT = 2,
  TWOSQ_STATUS_OUT_OF_RANGE = 3,
  TWOSQ_STATUS_CORRUPT = 4,
  TWOSQ_STATUS_NULL_POINTER = 5,
  TWOSQ_STATUS_INTERNAL = 6,
} TwosqStatus;

// Opaque coloring.
typedef struct TwosqColoring TwosqColoring;

// Opaque ground table.
typedef struct TwosqTable TwosqTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Owned by the library.
const char *twosq_last_error(void);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void twosq_string_free(char *s);

bool twosq_is_member(uint64_t n);

// Sieve a table of all sums of two squares below `limit`.
//
// # Safety
// `out` must be valid for writes.
enum TwosqStatus twosq_table_new(uint64_t limit, struct TwosqTable **out);

// Load a table from a binary cache file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` valid for writes.
enum TwosqStatus twosq_table_load(const char *path, struct TwosqTable **out);

// # Safety
// `table` must be a live handle and `path` a NUL-terminated string.
enum TwosqStatus twosq_table_save(const struct TwosqTable *table, const char *path);

// # Safety
// `table` must be NULL or a handle not yet freed.
void twosq_table_free(struct TwosqTable *table);

// Table limit, or 0 for NULL.
//
// # Safety
// `table` must be NULL or a live handle.
uint64_t twosq_table_limit(const struct TwosqTable *table);

// Number of members below the limit, or 0 for NULL.
//
// # Safety
// `table` must be NULL or a live handle.
uint64_t twosq_table_len(const struct TwosqTable *table);

// `s_n`.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum TwosqStatus twosq_element(const struct TwosqTable *table, uint64_t n, uint64_t *out);

// Rank of the member `s`.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum TwosqStatus twosq_rank(const struct TwosqTable *table, uint64_t s, uint64_t *out);

// Number of members below `x`.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum TwosqStatus twosq_count_below(const struct TwosqTable *table, uint64_t x, uint64_t *out);

// `m *_f n`.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum TwosqStatus twosq_star(const struct TwosqTable *table, uint64_t m, uint64_t n, uint64_t *out);

// `x` to the `n`-th `*_f`-power.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum TwosqStatus twosq_power(const struct TwosqTable *table, uint64_t x, uint64_t n, uint64_t *out);

// Seeded random r-coloring of `0..bound`.
//
// # Safety
// `out` must be valid for writes.
enum TwosqStatus twosq_coloring_random(uint64_t seed,
                                       uint32_t r,
                                       uint64_t bound,
                                       struct TwosqColoring **out);

// `n ↦ (n mod q) mod r + 1` on `0..bound`.
//
// # Safety
// `out` must be valid for writes.
enum TwosqStatus twosq_coloring_periodic(uint32_t q,
                                         uint32_t r,
                                         uint64_t bound,
                                         struct TwosqColoring **out);

// Parse a coloring document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for writes.
enum TwosqStatus twosq_coloring_from_json(const char *json, struct TwosqColoring **out);

// # Safety
// `coloring` must be a live handle and `out` valid for writes.
enum TwosqStatus twosq_coloring_color_of(const struct TwosqColoring *coloring,
                                         uint64_t n,
                                         uint32_t *out);

// # Safety
// `coloring` must be NULL or a handle not yet freed.
void twosq_coloring_free(struct TwosqColoring *coloring);

// Search `coloring` for a witness of the pattern described by `spec_json`.
//
// On `TWOSQ_STATUS_OK`, `*witness_json` receives a witness document to be
// released with [`twosq_string_free`]. `TWOSQ_STATUS_NOT_FOUND` means the
// search was exhausted or ran out of budget; `*witness_json` is then NULL.
// A `node_budget` of `UINT64_MAX` is unlimited.
//
// # Safety
// Handles must be live, `spec_json` NUL-terminated, `witness_json` valid for writes.
enum TwosqStatus twosq_search(const struct TwosqTable *table,
                              const struct TwosqColoring *coloring,
                              const char *spec_json,
                              uint64_t generator_max,
                              uint64_t value_bound,
                              uint64_t node_budget,
                              bool fast,
                              char **witness_json);

// Re-derive a witness document and check it; `*valid` receives the verdict.
//
// # Safety
// Handles must be live, `witness_json` NUL-terminated, `valid` valid for writes.
enum TwosqStatus twosq_verify(const struct TwosqTable *table,
                              const struct TwosqColoring *coloring,
                              const char *witness_json,
                              bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOSQ_H */
