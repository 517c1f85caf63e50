#ifndef HYPERHARM_H
#define HYPERHARM_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Status codes.
 */
typedef enum HhStatus {
  HH_STATUS_OK = 0,
  HH_STATUS_NULL_POINTER = 1,
  HH_STATUS_DIMENSION_MISMATCH = 2,
  HH_STATUS_OUTSIDE_DOMAIN = 3,
  HH_STATUS_SINGULAR = 4,
  HH_STATUS_INVALID = 5,
  HH_STATUS_PRECONDITION = 6,
  HH_STATUS_UNSUPPORTED = 7,
  HH_STATUS_PANIC = 8,
} HhStatus;

/*
 Positive harmonic function `sum w_k P(x, xi_k)`.
 */
typedef struct HhAtomicHarmonic HhAtomicHarmonic;

/*
 Element of the Clifford algebra with `m` generators.
 */
typedef struct HhMultiVector HhMultiVector;

/*
 Outcome of an inequality check: passes when `margin >= -tol`.
 */
typedef struct HhCheck {
  double lhs;
  double rhs;
  double margin;
  double tol;
  bool pass;
} HhCheck;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread; empty after a success.
 Valid until the next call on the same thread.
 */
const char *hh_last_error_message(void);

/*
 `2 |B_{n-1}| / |B_n|`; NaN for `n == 0`.
 */
double hh_liu_constant(size_t n);

/*
 `8 / (3 sqrt 3)`.
 */
double hh_liu_constant_n3(void);

/*
 Sharp gradient constant for bounded real harmonic functions on `B_n`;
 NaN for `n == 0`.
 */
double hh_sharp_gradient_constant(size_t n);

/*
 `phi_a(x)` written to `out[0..n]`.

 # Safety
 `a`, `x` and `out` must point to `n` doubles.
 */
enum HhStatus hh_mobius_map(size_t n, const double *a, const double *x, double *out);

/*
 Hyperbolic distance `2 artanh |phi_y(x)|`.

 # Safety
 `x` and `y` must point to `n` doubles; `out` to one.
 */
enum HhStatus hh_hyperbolic_metric(size_t n, const double *x, const double *y, double *out);

/*
 Pseudo-hyperbolic distance `|phi_y(x)|`.

 # Safety
 `x` and `y` must point to `n` doubles; `out` to one.
 */
enum HhStatus hh_pseudo_metric(size_t n, const double *x, const double *y, double *out);

/*
 `P(x, xi) = (1 - |x|^2) / |x - xi|^n`.

 # Safety
 `x` and `xi` must point to `n` doubles; `out` to one.
 */
enum HhStatus hh_poisson_kernel(size_t n, const double *x, const double *xi, double *out);

/*
 Builds `sum_k weights[k] P(x, sites[k])`; `sites` is row-major
 `count x n`. On success `*out` owns a new handle.

 # Safety
 `weights` must point to `count` doubles, `sites` to `count * n`, `out`
 to a writable handle pointer.
 */
enum HhStatus hh_atomic_new(size_t n,
                            size_t count,
                            const double *weights,
                            const double *sites,
                            struct HhAtomicHarmonic **out);

/*
 Releases a handle from [`hh_atomic_new`]; null is ignored.

 # Safety
 `h` must come from [`hh_atomic_new`] and not be used afterwards.
 */
void hh_atomic_free(struct HhAtomicHarmonic *h);

/*
 `f(x)`.

 # Safety
 `h` must be a live handle, `x` must point to `n` doubles where `n` is the
 handle's dimension, `out` to one.
 */
enum HhStatus hh_atomic_value(const struct HhAtomicHarmonic *h, const double *x, double *out);

/*
 `grad f(x)` written to `out[0..n]`.

 # Safety
 As [`hh_atomic_value`], with `out` pointing to `n` doubles.
 */
enum HhStatus hh_atomic_gradient(const struct HhAtomicHarmonic *h, const double *x, double *out);

/*
 Sharp gradient estimate `|(|x|^2 - 1) grad f + (n - 2) x f| <= n f`.

 # Safety
 As [`hh_atomic_value`], with `out` pointing to one [`HhCheck`].
 */
enum HhStatus hh_atomic_check_main_sharp(const struct HhAtomicHarmonic *h,
                                         const double *x,
                                         struct HhCheck *out);

/*
 Multivector with `m` generators from `2^m` blade coefficients (blade
 index = bit set of generators).

 # Safety
 `coeffs` must point to `len` doubles and `out` to a writable handle
 pointer.
 */
enum HhStatus hh_mv_new(size_t m, const double *coeffs, size_t len, struct HhMultiVector **out);

/*
 Paravector `x_0 + sum x_i e_i` with `len - 1` generators.

 # Safety
 `x` must point to `len` doubles and `out` to a writable handle pointer.
 */
enum HhStatus hh_mv_paravector(const double *x, size_t len, struct HhMultiVector **out);

/*
 Releases a multivector handle; null is ignored.

 # Safety
 `h` must come from this library and not be used afterwards.
 */
void hh_mv_free(struct HhMultiVector *h);

/*
 Number of coefficients, `2^m`; zero for null.

 # Safety
 `h` must be null or a live handle.
 */
size_t hh_mv_len(const struct HhMultiVector *h);

/*
 Copies the coefficients into `buf`, which must hold [`hh_mv_len`] doubles.

 # Safety
 `h` must be a live handle and `buf` must point to `len` doubles.
 */
enum HhStatus hh_mv_coeffs(const struct HhMultiVector *h, double *buf, size_t len);

/*
 Clifford product `a b`.

 # Safety
 `a`, `b` must be live handles and `out` a writable handle pointer.
 */
enum HhStatus hh_mv_mul(const struct HhMultiVector *a,
                        const struct HhMultiVector *b,
                        struct HhMultiVector **out);

/*
 Clifford conjugate.

 # Safety
 `a` must be a live handle and `out` a writable handle pointer.
 */
enum HhStatus hh_mv_conj(const struct HhMultiVector *a, struct HhMultiVector **out);

/*
 Two-sided inverse; `Singular` when the condition estimate exceeds `1e12`.

 # Safety
 `a` must be a live handle and `out` a writable handle pointer.
 */
enum HhStatus hh_mv_inverse(const struct HhMultiVector *a, struct HhMultiVector **out);

/*
 Euclidean norm of the coefficient vector.

 # Safety
 `a` must be a live handle and `out` point to one double.
 */
enum HhStatus hh_mv_norm(const struct HhMultiVector *a, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERHARM_H */
