#ifndef WEARHASH_H
#define WEARHASH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WhAlgo {
  WH_ALGO_WEAR_CUCKOO = 0,
  WH_ALGO_STD_CUCKOO = 1,
  WH_ALGO_LINEAR_PROBING = 2,
} WhAlgo;

typedef enum WhRule {
  /**
   * Random empty choice first, otherwise displace the least-worn occupant.
   */
  WH_RULE_SEC3 = 0,
  /**
   * Always the least-worn choice.
   */
  WH_RULE_SEC2 = 1,
} WhRule;

/**
 * Result codes.
 */
typedef enum WhStatus {
  WH_STATUS_OK = 0,
  WH_STATUS_NOT_FOUND = 1,
  WH_STATUS_DUPLICATE_KEY = 2,
  /**
   * The displacement chain ran out of kicks; some item is now homeless.
   */
  WH_STATUS_INSERTION_FAILED = 3,
  WH_STATUS_TABLE_FULL = 4,
  WH_STATUS_NULL_POINTER = 5,
  WH_STATUS_INVALID_ARGUMENT = 6,
  WH_STATUS_BUFFER_TOO_SMALL = 7,
  WH_STATUS_PANIC = 8,
} WhStatus;

/**
 * Opaque table handle.
 */
typedef struct WhTable WhTable;

/**
 * Table construction parameters. Start from [`wh_options_default`].
 */
typedef struct WhOptions {
  enum WhAlgo algo;
  uint64_t capacity;
  /**
   * Hash choices per key; ignored by linear probing.
   */
  uint32_t d;
  uint64_t seed;
  uint64_t max_kicks;
  bool wear_on_delete;
  enum WhRule rule;
  bool fast_forward;
} WhOptions;

/**
 * What an insertion did.
 */
typedef struct WhOutcome {
  uint64_t writes_performed;
  uint64_t chain_length;
  bool failed;
  /**
   * Key left without a cell when the status is `WH_STATUS_INSERTION_FAILED`.
   */
  uint64_t homeless_key;
} WhOutcome;

typedef struct WhStats {
  uint32_t max_wear;
  double avg_wear;
  uint64_t total_wear;
  uint64_t len;
  uint64_t capacity;
} WhStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct WhOptions wh_options_default(void);

/**
 * Creates a table. On success `*out` owns a handle that must be passed to
 * [`wh_table_free`].
 *
 * # Safety
 * `options` must be null or point to a valid `WhOptions`; `out` must be null
 * or writable.
 */
enum WhStatus wh_table_new(const struct WhOptions *options, struct WhTable **out);

/**
 * # Safety
 * `table` must be null or a handle from [`wh_table_new`] not yet freed.
 */
void wh_table_free(struct WhTable *table);

/**
 * Inserts `key`. `out` may be null.
 *
 * # Safety
 * `table` must be a live handle; `out` must be null or writable.
 */
enum WhStatus wh_table_insert(struct WhTable *table,
                              uint64_t key,
                              uint64_t value,
                              struct WhOutcome *out);

/**
 * Looks up `key`, writing its value to `*value` when found.
 *
 * # Safety
 * `table` must be a live handle; `value` must be null or writable.
 */
enum WhStatus wh_table_lookup(const struct WhTable *table, uint64_t key, uint64_t *value);

/**
 * Removes `key`, writing its value to `*value` when found.
 *
 * # Safety
 * `table` must be a live handle; `value` must be null or writable.
 */
enum WhStatus wh_table_remove(struct WhTable *table, uint64_t key, uint64_t *value);

/**
 * Number of stored items, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
uint64_t wh_table_len(const struct WhTable *table);

/**
 * Number of cells, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
uint64_t wh_table_capacity(const struct WhTable *table);

/**
 * Copies per-cell wear counters into `buf`. `*written` receives the number
 * of cells; if `len` is smaller than that, nothing is copied and the status
 * is `WH_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `table` must be a live handle; `buf` must be valid for `len` writes (it
 * may be null when `len` is 0); `written` must be null or writable.
 */
enum WhStatus wh_table_wear(const struct WhTable *table,
                            uint32_t *buf,
                            uintptr_t len,
                            uintptr_t *written);

/**
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum WhStatus wh_table_stats(const struct WhTable *table, struct WhStats *out);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *wh_status_str(enum WhStatus status);

/**
 * Library version, NUL-terminated.
 */
const char *wh_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEARHASH_H */
