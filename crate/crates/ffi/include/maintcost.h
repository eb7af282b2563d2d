#ifndef MAINTCOST_H
#define MAINTCOST_H

#include <stdint.h>
#include <stddef.h>

#define MC_STRATEGY_ZERO 0

#define MC_STRATEGY_INSPECTION 1

#define MC_STRATEGY_MONITORING 2

#define MC_STRATEGY_GENERAL 3

#define MC_METHOD_CLOSED_NN 0

#define MC_METHOD_CLOSED_N1_RESCALED 1

#define MC_METHOD_NUMERIC 2

/**
 * Result code of every fallible call.
 */
enum McStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_UTF8 = 2,
  MC_STATUS_CONFIG = 3,
  MC_STATUS_INVALID_PARAMETER = 4,
  MC_STATUS_DEGENERATE_CHAIN = 5,
  MC_STATUS_NO_THRESHOLD = 6,
  MC_STATUS_CONDITION_VIOLATED = 7,
  MC_STATUS_SOLVER_FAILURE = 8,
  MC_STATUS_UNSUPPORTED = 9,
  MC_STATUS_PANIC = 10,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum McStatus McStatus;
#else
typedef int32_t McStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque chain handle.
 */
typedef struct McChain McChain;

/**
 * Opaque homogenized chain handle.
 */
typedef struct McHomogenized McHomogenized;

/**
 * Totals and unit cost of one strategy.
 */
typedef struct McCostBreakdown {
  double fixed;
  double variable;
  double warranty;
  double total;
  double sold_volume;
  double defective_sold_volume;
  double survival;
  double unit_cost;
} McCostBreakdown;

/**
 * Per-virtual-stage parameters of a homogenized chain.
 */
typedef struct McHomogenizedParams {
  double stages;
  double defect_rate;
  double monitoring_effectiveness;
  double inspection_effectiveness;
  double fixed_production;
  double fixed_monitoring;
  double fixed_inspection;
  double variable_production;
  double variable_monitoring;
  double variable_inspection;
  double initial_volume;
  double return_rate;
  double premium;
  uint64_t source_stages;
} McHomogenizedParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none failed.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *mc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mc_version(void);

/**
 * Parses a JSON chain configuration.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or writable.
 */
McStatus mc_chain_from_json(const char *json, struct McChain **out);

/**
 * The bundled 50-stage reference chain.
 *
 * # Safety
 * `out` must be null or writable.
 */
McStatus mc_chain_ref50(struct McChain **out);

/**
 * # Safety
 * `chain` must be null or a handle from this library not yet freed.
 */
void mc_chain_free(struct McChain *chain);

/**
 * Number of stages, or 0 for a null handle.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
size_t mc_chain_len(const struct McChain *chain);

/**
 * Unit cost of `strategy` (an `MC_STRATEGY_*` code).
 *
 * # Safety
 * `chain` must be a live handle, `out` writable.
 */
McStatus mc_unit_cost(const struct McChain *chain, int32_t strategy, double *out);

/**
 * # Safety
 * `chain` must be a live handle, `out` writable.
 */
McStatus mc_cost_breakdown(const struct McChain *chain,
                           int32_t strategy,
                           struct McCostBreakdown *out);

/**
 * Homogenizes the chain under `strategy` onto `stages` virtual stages.
 *
 * # Safety
 * `chain` must be a live handle, `out` writable.
 */
McStatus mc_homogenize(const struct McChain *chain,
                       int32_t strategy,
                       double stages,
                       struct McHomogenized **out);

/**
 * Moves a homogenized chain to `stages` virtual stages; the result is a new handle.
 *
 * # Safety
 * `h` must be a live handle, `out` writable.
 */
McStatus mc_rescale(const struct McHomogenized *h, double stages, struct McHomogenized **out);

/**
 * # Safety
 * `h` must be null or a handle from this library not yet freed.
 */
void mc_homogenized_free(struct McHomogenized *h);

/**
 * # Safety
 * `h` must be a live handle, `out` writable.
 */
McStatus mc_homogenized_params(const struct McHomogenized *h, struct McHomogenizedParams *out);

/**
 * Unit cost of `strategy` from homogenized parameters.
 *
 * # Safety
 * `h` must be a live handle, `out` writable.
 */
McStatus mc_homogenized_unit_cost(const struct McHomogenized *h, int32_t strategy, double *out);

/**
 * Critical monitoring effectiveness against zero maintenance at the chain's
 * defect rate, on `stages` virtual stages, by `method` (an `MC_METHOD_*` code).
 *
 * The value is not clamped: below 0 monitoring always wins, above 1 it never does.
 *
 * # Safety
 * `chain` must be a live handle, `out` writable.
 */
McStatus mc_em_crit_vs_zero(const struct McChain *chain,
                            double stages,
                            int32_t method,
                            double *out);

/**
 * Critical monitoring effectiveness against inspection, as [`mc_em_crit_vs_zero`].
 *
 * # Safety
 * `chain` must be a live handle, `out` writable.
 */
McStatus mc_em_crit_vs_inspection(const struct McChain *chain,
                                  double stages,
                                  int32_t method,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAINTCOST_H */
