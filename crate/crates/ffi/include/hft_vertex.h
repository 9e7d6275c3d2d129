#ifndef HFT_VERTEX_H
#define HFT_VERTEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum HftStatus {
  HFT_STATUS_OK = 0,
  HFT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The pipeline failed: a non-finite character, a fixed part, or no
   * generic specialization within the retry budget.
   */
  HFT_STATUS_NUMERIC = 3,
  HFT_STATUS_NULL_POINTER = 4,
  HFT_STATUS_PANIC = 5,
} HftStatus;

/**
 * A computed series with its closed-form comparison.
 */
typedef struct HftSeries HftSeries;

/**
 * Convention switches, mirroring the CLI flags.
 */
typedef struct HftOptions {
  bool include_edge;
  /**
   * 0 = symmetric, 1 = transported.
   */
  uint32_t beta_twist;
  /**
   * 0 = Serre-dual, 1 = printed.
   */
  uint32_t edge_signs;
} HftOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: no edge remainder, symmetric twist, Serre-dual signs.
 */
struct HftOptions hft_options_default(void);

/**
 * Computes the vertex series up to `q^max_order`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 * `options` may be null for the defaults.
 */
enum HftStatus hft_series_compute(uint32_t rank,
                                  uint32_t twist,
                                  uint32_t max_order,
                                  uint64_t spec_seed,
                                  const struct HftOptions *options,
                                  struct HftSeries **out);

/**
 * Number of coefficients (`max_order + 1`), or 0 for a null handle.
 *
 * # Safety
 * `series` must be null or a handle from [`hft_series_compute`].
 */
size_t hft_series_len(const struct HftSeries *series);

/**
 * Coefficient of `q^k` as `"p/q"` (or `"p"`); null if out of range.
 *
 * # Safety
 * `series` must be null or a handle from [`hft_series_compute`].
 */
char *hft_series_coefficient(const struct HftSeries *series, size_t k);

/**
 * Closed-form coefficient of `q^k`; null if out of range.
 *
 * # Safety
 * `series` must be null or a handle from [`hft_series_compute`].
 */
char *hft_series_closed_form(const struct HftSeries *series, size_t k);

/**
 * Whether every coefficient equals the closed form.
 *
 * # Safety
 * `series` must be null or a handle from [`hft_series_compute`].
 */
bool hft_series_matches_closed_form(const struct HftSeries *series);

/**
 * The full report in the CLI's JSON schema.
 *
 * # Safety
 * `series` must be null or a handle from [`hft_series_compute`].
 */
char *hft_series_report_json(const struct HftSeries *series);

/**
 * Releases a handle. Null is accepted.
 *
 * # Safety
 * `series` must be null or a handle from [`hft_series_compute`] not yet
 * freed.
 */
void hft_series_free(struct HftSeries *series);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void hft_string_free(char *s);

/**
 * Message for the last failure on this thread. Borrowed: valid until the
 * next call into this library on the same thread.
 */
const char *hft_last_error(void);

/**
 * Library version, a static string.
 */
const char *hft_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HFT_VERTEX_H */
