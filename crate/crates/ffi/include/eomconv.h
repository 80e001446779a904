#ifndef EOMCONV_H
#define EOMCONV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EomStatus {
  EOM_STATUS_OK = 0,
  EOM_STATUS_INVALID_PARAMETER = 1,
  EOM_STATUS_UNSUPPORTED_REGIME = 2,
  EOM_STATUS_INTEGRATION_FAILURE = 3,
  EOM_STATUS_DEGENERATE_STATE = 4,
  EOM_STATUS_INVALID_OVERLAP = 5,
  EOM_STATUS_UNDEFINED_RATE = 6,
  EOM_STATUS_PRECONDITION = 7,
  EOM_STATUS_DEGENERATE_RATIO = 8,
  EOM_STATUS_RESOURCE_LIMIT = 9,
  EOM_STATUS_TRUNCATION = 10,
  EOM_STATUS_INVALID_CHANNEL = 11,
  EOM_STATUS_NULL_POINTER = 12,
  EOM_STATUS_PANIC = 13,
} EomStatus;

typedef enum EomDirection {
  EOM_DIRECTION_OPTICAL_TO_MICROWAVE = 0,
  EOM_DIRECTION_MICROWAVE_TO_OPTICAL = 1,
} EomDirection;

/**
 * `Enhancing` when the factor is below 1: entanglement raises the rate.
 */
typedef enum EomRegime {
  EOM_REGIME_ENHANCING = 0,
  EOM_REGIME_SUPPRESSING = 1,
  EOM_REGIME_NEUTRAL = 2,
} EomRegime;

/**
 * Opaque coupling configuration.
 */
typedef struct EomCoupling EomCoupling;

/**
 * Opaque entangled coherent state.
 */
typedef struct EomState EomState;

typedef struct EomComplex {
  double re;
  double im;
} EomComplex;

/**
 * `b(t) = f1 b + f2 c_w + f3 c_o†`, `c_o(t) = g1 c_o + g2 c_w† + g3 b†`,
 * `c_w(t) = h1 c_w + h2 c_o† + h3 b`.
 */
typedef struct EomCoefficients {
  double time;
  struct EomComplex f[3];
  struct EomComplex g[3];
  struct EomComplex h[3];
} EomCoefficients;

/**
 * Truncated-Fock-space conversion at a dark instant.
 */
typedef struct EomOracleResult {
  double rate;
  double time;
  /**
   * `<b>` at the start and at the dark instant.
   */
  struct EomComplex mechanical_initial;
  struct EomComplex mechanical_final;
  double preparation_leakage;
  double max_boundary_population;
  double norm_drift;
} EomOracleResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *eom_version(void);

/**
 * Message for the last failure on this thread, or null if none. Valid until
 * the next failing call on the same thread.
 */
const char *eom_last_error_message(void);

/**
 * Configuration from the two multiphoton couplings; requires `0 <= g_o < g_w`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EomStatus eom_coupling_new(double optical_coupling,
                                double microwave_coupling,
                                struct EomCoupling **out);

/**
 * Configuration from the ratio `k = g_o/g_w` and `g_w`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EomStatus eom_coupling_from_ratio(double ratio,
                                       double microwave_coupling,
                                       struct EomCoupling **out);

/**
 * # Safety
 * `handle` must be null or come from `eom_coupling_new`/`eom_coupling_from_ratio`
 * and not have been freed.
 */
void eom_coupling_free(struct EomCoupling *handle);

/**
 * Writes `k`, `Omega` and the period `2 pi / Omega`; any out-pointer may be null.
 *
 * # Safety
 * `handle` must be a live coupling handle; non-null out-pointers must be valid for writes.
 */
enum EomStatus eom_coupling_describe(const struct EomCoupling *handle,
                                     double *ratio,
                                     double *omega,
                                     double *period);

/**
 * Closed-form propagator coefficients at time `t`.
 *
 * # Safety
 * `handle` must be a live coupling handle and `out` valid for writes.
 */
enum EomStatus eom_propagator_closed(const struct EomCoupling *handle,
                                     double t,
                                     struct EomCoefficients *out);

/**
 * Coefficients by numerical integration with tolerance in `(0, 1e-4]`.
 *
 * # Safety
 * `handle` must be a live coupling handle and `out` valid for writes.
 */
enum EomStatus eom_propagator_ode(const struct EomCoupling *handle,
                                  double t,
                                  double tolerance,
                                  struct EomCoefficients *out);

/**
 * The first `count` dark instants `t_n = n pi / Omega`, `n = 1, 3, 5, ...`.
 *
 * # Safety
 * `handle` must be a live coupling handle and `times` valid for `count` writes.
 */
enum EomStatus eom_dark_times(const struct EomCoupling *handle, size_t count, double *times);

/**
 * Rate at a dark instant from coefficients and arbitrary initial field means.
 *
 * # Safety
 * `handle` and `coefficients` must be valid for reads, `rate` for writes.
 */
enum EomStatus eom_general_rate(const struct EomCoupling *handle,
                                const struct EomCoefficients *coefficients,
                                struct EomComplex optical_mean,
                                struct EomComplex microwave_mean,
                                enum EomDirection dir,
                                double *rate);

/**
 * # Safety
 * `rate` must be valid for writes.
 */
enum EomStatus eom_cqc_rate(double ratio, double *rate);

/**
 * Rate for the symmetric entangled coherent state `alpha = beta = amplitude e^{i phase}`.
 *
 * # Safety
 * `rate` must be valid for writes.
 */
enum EomStatus eom_eaqc_rate(double ratio,
                             double theta,
                             double phase,
                             double amplitude,
                             enum EomDirection dir,
                             double *rate);

/**
 * # Safety
 * `rate` must be valid for writes.
 */
enum EomStatus eom_eaqc_max_entangled(double ratio, double phase, double *rate);

/**
 * Entanglement-affecting factor and its regime; `regime_out` may be null.
 *
 * # Safety
 * `factor` must be valid for writes; `regime_out` null or valid for writes.
 */
enum EomStatus eom_eaf(double ratio, double phase, double *factor, enum EomRegime *regime_out);

/**
 * Coupling ratio at which the quarter-phase factor equals 1.
 */
double eom_critical_coupling(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum EomStatus eom_state_new(double theta,
                             struct EomComplex alpha,
                             struct EomComplex beta,
                             struct EomState **out);

/**
 * # Safety
 * `handle` must be null or come from `eom_state_new` and not have been freed.
 */
void eom_state_free(struct EomState *handle);

/**
 * Normalization `N` and concurrence; either out-pointer may be null.
 *
 * # Safety
 * `handle` must be a live state handle; non-null out-pointers valid for writes.
 */
enum EomStatus eom_state_entanglement(const struct EomState *handle,
                                      double *normalization,
                                      double *concurrence);

/**
 * Initial field means `<c_o(0)>` and `<c_w(0)>`.
 *
 * # Safety
 * `handle` must be a live state handle; both out-pointers valid for writes.
 */
enum EomStatus eom_state_field_means(const struct EomState *handle,
                                     struct EomComplex *optical,
                                     struct EomComplex *microwave);

/**
 * Brute-force conversion of `state` (with a coherent mechanical mode) to the
 * odd dark instant `dark_index`, per-mode cutoff `cutoff`.
 *
 * # Safety
 * `coupling` and `state` must be live handles; `out` valid for writes.
 */
enum EomStatus eom_oracle_conversion(const struct EomCoupling *coupling,
                                     const struct EomState *state,
                                     struct EomComplex mechanical,
                                     enum EomDirection dir,
                                     uint32_t dark_index,
                                     size_t cutoff,
                                     struct EomOracleResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EOMCONV_H */
