#ifndef BINCOVER_H
#define BINCOVER_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum BcStatus {
  BC_STATUS_OK = 0,
  BC_STATUS_NULL_POINTER = 1,
  BC_STATUS_INVALID_UTF8 = 2,
  BC_STATUS_PARSE = 3,
  BC_STATUS_DOMAIN = 4,
  BC_STATUS_MALFORMED_ADVICE = 5,
  BC_STATUS_LIMIT_EXCEEDED = 6,
  /**
   * A rational does not fit in 64-bit numerator and denominator.
   */
  BC_STATUS_OVERFLOW = 7,
  BC_STATUS_PANIC = 8,
} BcStatus;

typedef enum BcStrategy {
  BC_STRATEGY_DNF = 0,
  BC_STRATEGY_DH = 1,
  BC_STRATEGY_ADH = 2,
} BcStrategy;

/**
 * Opaque item sequence.
 */
typedef struct BcSequence BcSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call that
 * fails on the same thread.
 */
const char *bc_last_error(void);

/**
 * Parses an instance in the text format (one `p/q` or decimal per line, `#` comments).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum BcStatus bc_sequence_parse(const char *text, struct BcSequence **out);

/**
 * # Safety
 * `seq` must come from `bc_sequence_parse` and not be freed twice. Null is ignored.
 */
void bc_sequence_free(struct BcSequence *seq);

/**
 * Number of items handed to the strategies; items of size at least 1 and zeros are split off.
 *
 * # Safety
 * `seq` must be a live handle or null (returns 0).
 */
size_t bc_sequence_len(const struct BcSequence *seq);

/**
 * Runs a strategy and stores the number of covered bins, counting items of size at least 1
 * as bins of their own. `m`, `x_num`, `x_den` are read for `BC_STRATEGY_ADH` only.
 *
 * # Safety
 * `seq` must be a live handle and `out_covered` a valid pointer.
 */
enum BcStatus bc_run(const struct BcSequence *seq,
                     enum BcStrategy strategy,
                     uint32_t k,
                     size_t m,
                     int64_t x_num,
                     int64_t x_den,
                     size_t *out_covered);

/**
 * Computes the oracle advice `(m, x_m)` and the bins it covers (items of size at least 1
 * excluded).
 *
 * # Safety
 * `seq` must be a live handle and every output pointer valid.
 */
enum BcStatus bc_oracle(const struct BcSequence *seq,
                        uint32_t k,
                        size_t *out_m,
                        int64_t *out_x_num,
                        int64_t *out_x_den,
                        size_t *out_covered);

/**
 * Exact optimum, or `BC_STATUS_LIMIT_EXCEEDED` above `limit` items.
 *
 * # Safety
 * `seq` must be a live handle and `out_opt` a valid pointer.
 */
enum BcStatus bc_opt_exact(const struct BcSequence *seq, size_t limit, size_t *out_opt);

/**
 * Encodes `(m, x_num / x_den)` as a tape of `0`/`1` characters, released with
 * `bc_string_free`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BcStatus bc_advice_encode(size_t m, int64_t x_num, int64_t x_den, char **out);

/**
 * Decodes an advice tape given as `0`/`1` characters.
 *
 * # Safety
 * `bits` must be a valid NUL-terminated string and every output pointer valid.
 */
enum BcStatus bc_advice_decode(const char *bits,
                               size_t *out_m,
                               int64_t *out_x_num,
                               int64_t *out_x_den);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void bc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BINCOVER_H */
