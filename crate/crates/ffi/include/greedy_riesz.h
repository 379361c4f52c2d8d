#ifndef GREEDY_RIESZ_H
#define GREEDY_RIESZ_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum GrStatus {
  GR_STATUS_OK = 0,
  GR_STATUS_DOMAIN = 1,
  GR_STATUS_POLE = 2,
  GR_STATUS_STRUCTURE = 3,
  GR_STATUS_CONSTRUCTION = 4,
  GR_STATUS_TOLERANCE = 5,
  GR_STATUS_DEGENERATE = 6,
  GR_STATUS_NULL_POINTER = 7,
  GR_STATUS_BUFFER_TOO_SMALL = 8,
  GR_STATUS_PANIC = 9,
} GrStatus;

/**
 * Function scanned by [`gr_scan`].
 */
typedef enum GrTarget {
  /**
   * 𝓗(·, s).
   */
  GR_TARGET_H = 0,
  /**
   * 𝓚.
   */
  GR_TARGET_K = 1,
  /**
   * 𝓡.
   */
  GR_TARGET_R = 2,
} GrTarget;

/**
 * Opaque grid-scan result.
 */
typedef struct GrScan GrScan;

/**
 * Opaque vector of normalized binary parts.
 */
typedef struct GrTheta GrTheta;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *gr_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gr_version(void);

/**
 * η(N) for N ≥ 1.
 */
enum GrStatus gr_theta_eta(uint64_t n, struct GrTheta **out);

/**
 * Vector from explicit components (which must have dyadic ratios).
 *
 * # Safety
 * `components` must point to `len` readable doubles.
 */
enum GrStatus gr_theta_from_components(const double *components, size_t len, struct GrTheta **out);

/**
 * Vector of the binary expansion of 1/x with x = num/den in [1/2, 1].
 * `prefer_finite` selects the terminating expansion when two exist.
 */
enum GrStatus gr_theta_from_abscissa(uint64_t num,
                                     uint64_t den,
                                     bool prefer_finite,
                                     struct GrTheta **out);

/**
 * Number of stored components.
 *
 * # Safety
 * `theta` must be a live handle.
 */
enum GrStatus gr_theta_len(const struct GrTheta *theta, size_t *out);

/**
 * Copies the stored components into `buf`. `out_len` receives the number
 * of components; returns `BufferTooSmall` if `cap` is less than that.
 *
 * # Safety
 * `theta` must be a live handle and `buf` must have room for `cap` doubles.
 */
enum GrStatus gr_theta_components(const struct GrTheta *theta,
                                  double *buf,
                                  size_t cap,
                                  size_t *out_len);

/**
 * Releases a vector handle. Null is ignored.
 *
 * # Safety
 * `theta` must come from this library and not be used afterwards.
 */
void gr_theta_free(struct GrTheta *theta);

/**
 * H(θ; s).
 *
 * # Safety
 * `theta` must be a live handle.
 */
enum GrStatus gr_h(const struct GrTheta *theta, double s, double tol, double *out);

/**
 * K(θ).
 *
 * # Safety
 * `theta` must be a live handle.
 */
enum GrStatus gr_k(const struct GrTheta *theta, double tol, double *out);

/**
 * R(θ).
 *
 * # Safety
 * `theta` must be a live handle.
 */
enum GrStatus gr_r(const struct GrTheta *theta, double tol, double *out);

/**
 * G(θ; s).
 *
 * # Safety
 * `theta` must be a live handle.
 */
enum GrStatus gr_g(const struct GrTheta *theta, double s, double tol, double *out);

/**
 * Λ(θ).
 *
 * # Safety
 * `theta` must be a live handle.
 */
enum GrStatus gr_lambda(const struct GrTheta *theta, double tol, double *out);

/**
 * Riesz s-energy of the N-th roots of unity.
 */
enum GrStatus gr_roots_energy(uint64_t n, double s, double *out);

/**
 * Energy of the first N points of the greedy sequence.
 */
enum GrStatus gr_greedy_energy(uint64_t n, double s, double *out);

/**
 * Potential of the first N greedy points at the next point.
 */
enum GrStatus gr_extremal_potential(uint64_t n, double s, double *out);

/**
 * T_{N,s}.
 */
enum GrStatus gr_t_sequence(uint64_t n, double s, double *out);

/**
 * F_{N,s}.
 */
enum GrStatus gr_f_sequence(uint64_t n, double s, double *out);

/**
 * Predicted value of T_{N,s} (or F_{N,s} if `f_sequence`) and the scale
 * of its remainder.
 *
 * # Safety
 * `scale` must be writable or null.
 */
enum GrStatus gr_predict(uint64_t n, double s, bool f_sequence, double *value, double *scale);

/**
 * Asymptotic expansion of the greedy energy.
 */
enum GrStatus gr_expansion_energy(uint64_t n, double s, double *out);

/**
 * Cesàro mean of the greedy energy sequence.
 */
enum GrStatus gr_cesaro_mean(uint64_t n, double s, double *out);

/**
 * Riemann ζ(s).
 */
enum GrStatus gr_zeta(double s, double *out);

/**
 * Digamma ψ(x).
 */
enum GrStatus gr_digamma(double x, double *out);

/**
 * v(s), the s-energy of normalized arclength.
 */
enum GrStatus gr_v(double s, double *out);

/**
 * Constant C_M of the odd-s expansion.
 */
enum GrStatus gr_c_constant(size_t m, double *out);

/**
 * Scans `target` over the grid of order M. `s` is used only for `H`.
 */
enum GrStatus gr_scan(uint32_t m, enum GrTarget target, double s, struct GrScan **out);

/**
 * Number of grid points in a scan.
 *
 * # Safety
 * `scan` must be a live handle.
 */
enum GrStatus gr_scan_len(const struct GrScan *scan, size_t *out);

/**
 * Extremal value and its abscissa num/den.
 *
 * # Safety
 * `scan` must be a live handle; `num` and `den` must be writable or null.
 */
enum GrStatus gr_scan_extremum(const struct GrScan *scan,
                               double *value,
                               uint64_t *num,
                               uint64_t *den);

/**
 * Certified distance from the grid extremum to the extremal constant.
 * `Domain` for targets without a bound (K and R).
 *
 * # Safety
 * `scan` must be a live handle.
 */
enum GrStatus gr_scan_error_bound(const struct GrScan *scan, double *out);

/**
 * Copies abscissae and values into `xs` and `values` (either may be null).
 * `out_len` receives the number of points; returns `BufferTooSmall` if
 * `cap` is less than that.
 *
 * # Safety
 * `scan` must be a live handle; non-null buffers must hold `cap` doubles.
 */
enum GrStatus gr_scan_values(const struct GrScan *scan,
                             double *xs,
                             double *values,
                             size_t cap,
                             size_t *out_len);

/**
 * Releases a scan handle. Null is ignored.
 *
 * # Safety
 * `scan` must come from this library and not be used afterwards.
 */
void gr_scan_free(struct GrScan *scan);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GREEDY_RIESZ_H */
