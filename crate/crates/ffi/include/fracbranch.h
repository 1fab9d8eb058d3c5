#ifndef FRACBRANCH_H
#define FRACBRANCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum FbStatus {
  FB_STATUS_OK = 0,
  /**
   * A parameter is outside its mathematical domain.
   */
  FB_STATUS_DOMAIN = 1,
  /**
   * A structural precondition failed (grid shape, replicate count).
   */
  FB_STATUS_PRECONDITION = 2,
  /**
   * Malformed input data.
   */
  FB_STATUS_INPUT = 3,
  /**
   * A path did not reach the requested time.
   */
  FB_STATUS_CENSORED = 4,
  /**
   * A numerical routine failed to converge.
   */
  FB_STATUS_NUMERICAL = 5,
  /**
   * Cancellation exceeded what double precision can resolve.
   */
  FB_STATUS_ACCURACY = 6,
  /**
   * A size or work limit was exceeded.
   */
  FB_STATUS_RESOURCE = 7,
  /**
   * A required pointer was null.
   */
  FB_STATUS_NULL_POINTER = 8,
  /**
   * An internal panic was caught at the boundary.
   */
  FB_STATUS_PANIC = 9,
} FbStatus;

/**
 * Branching mechanism handle.
 */
typedef struct FbMechanism FbMechanism;

/**
 * Galton–Watson offspring law handle.
 */
typedef struct FbOffspringLaw FbOffspringLaw;

/**
 * Random stream handle.
 */
typedef struct FbRng FbRng;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fb_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * always NUL-terminated when `len > 0`) and returns the length the full
 * message needs including its NUL. Returns 0 when there is no message.
 *
 * # Safety
 * `buf` is null or valid for `len` bytes of writes.
 */
size_t fb_last_error_message(char *buf, size_t len);

/**
 * Clears the calling thread's last error message.
 */
void fb_clear_last_error(void);

/**
 * `Γ(x)` for `x > 0`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum FbStatus fb_gamma(double x, double *out);

/**
 * `E_β(x)` for `0 < β <= 1`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum FbStatus fb_mittag_leffler(double beta, double x, double *out);

/**
 * Fractional Yule pmf `p(1), …, p(n_max)` started from one individual.
 *
 * # Safety
 * `out` is valid for `n_max` writes.
 */
enum FbStatus fb_yule_pmf(double t, double theta, double beta, double *out, size_t n_max);

/**
 * Creates stream `stream_id` of `seed`.
 *
 * # Safety
 * `out` is valid for writes; the handle must be released with [`fb_rng_free`].
 */
enum FbStatus fb_rng_new(uint64_t seed, uint64_t stream_id, struct FbRng **out);

/**
 * Releases a stream; null is ignored.
 *
 * # Safety
 * `rng` is null or a handle from [`fb_rng_new`] not yet freed.
 */
void fb_rng_free(struct FbRng *rng);

/**
 * One draw of the one-sided stable law with Laplace transform `e^{-s^β}`.
 *
 * # Safety
 * `rng` is a live handle; `out` is valid for writes.
 */
enum FbStatus fb_sample_one_sided_stable(struct FbRng *rng, double beta, double *out);

/**
 * One draw of the inverse stable subordinator `E(t)`.
 *
 * # Safety
 * `rng` is a live handle; `out` is valid for writes.
 */
enum FbStatus fb_sample_inverse_marginal(struct FbRng *rng, double beta, double t, double *out);

/**
 * Offspring law from a dense pmf `pmf[k] = P(k children)`.
 *
 * # Safety
 * `pmf` is valid for `len` reads; `out` is valid for writes. Release with
 * [`fb_offspring_law_free`].
 */
enum FbStatus fb_offspring_law_new(const double *pmf, size_t len, struct FbOffspringLaw **out);

/**
 * Releases an offspring law; null is ignored.
 *
 * # Safety
 * `law` is null or a handle from [`fb_offspring_law_new`] not yet freed.
 */
void fb_offspring_law_free(struct FbOffspringLaw *law);

/**
 * Mean number of children.
 *
 * # Safety
 * `law` is a live handle; `out` is valid for writes.
 */
enum FbStatus fb_offspring_law_mean(const struct FbOffspringLaw *law, double *out);

/**
 * Population after `n_gen` generations from `j` ancestors.
 *
 * # Safety
 * `rng` and `law` are live handles; `out` is valid for writes.
 */
enum FbStatus fb_gw_final(struct FbRng *rng,
                          const struct FbOffspringLaw *law,
                          uint64_t j,
                          uint64_t n_gen,
                          uint64_t *out);

/**
 * Branching mechanism `ψ(u) = bu + cu² + Σ w_i (e^{-z_i u} - 1 + z_i u)`.
 *
 * # Safety
 * `jump_sizes` and `jump_weights` are valid for `n_jumps` reads (either may
 * be null when `n_jumps` is 0); `out` is valid for writes. Release with
 * [`fb_mechanism_free`].
 */
enum FbStatus fb_mechanism_new(double b,
                               double c,
                               const double *jump_sizes,
                               const double *jump_weights,
                               size_t n_jumps,
                               struct FbMechanism **out);

/**
 * Releases a mechanism; null is ignored.
 *
 * # Safety
 * `mech` is null or a handle from [`fb_mechanism_new`] not yet freed.
 */
void fb_mechanism_free(struct FbMechanism *mech);

/**
 * `ψ(u)`.
 *
 * # Safety
 * `mech` is a live handle; `out` is valid for writes.
 */
enum FbStatus fb_psi(const struct FbMechanism *mech, double u, double *out);

/**
 * Mean of the time-changed process started at `x`; `beta = 1` is no time
 * change.
 *
 * # Safety
 * `mech` is a live handle; `out` is valid for writes.
 */
enum FbStatus fb_tc_mean(const struct FbMechanism *mech,
                         double x,
                         double t,
                         double beta,
                         double *out);

/**
 * Second moment of the time-changed process started at `x`.
 *
 * # Safety
 * `mech` is a live handle; `out` is valid for writes.
 */
enum FbStatus fb_tc_second_moment(const struct FbMechanism *mech,
                                  double x,
                                  double t,
                                  double beta,
                                  double *out);

/**
 * Laplace exponent `ν_t(λ)` at each of the `n` increasing times in `t_grid`.
 *
 * # Safety
 * `mech` is a live handle; `t_grid` is valid for `n` reads and `out` for
 * `n` writes.
 */
enum FbStatus fb_solve_exponent(const struct FbMechanism *mech,
                                double lambda,
                                const double *t_grid,
                                size_t n,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACBRANCH_H */
