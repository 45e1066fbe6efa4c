#ifndef TENTNORM_H
#define TENTNORM_H

/* Generated by cbindgen from the tentnorm-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Oscillation used by [`tn_jnp_norm`]; pass one of these as the `osc` code.
typedef enum TnOscKind {
  // Mean absolute deviation from the interval average.
  TN_OSC_KIND_L1 = 0,
  // Root-mean-square deviation, computed directly.
  TN_OSC_KIND_L2_DIRECT = 1,
  // Root-mean-square deviation, via the Haar coefficient identity.
  TN_OSC_KIND_L2_HAAR = 2,
} TnOscKind;

// Result code of every fallible call in this ABI.
typedef enum TnStatus {
  // The call succeeded and all out parameters are valid.
  TN_STATUS_OK = 0,
  // A required pointer argument was null.
  TN_STATUS_NULL_POINTER = 1,
  // An argument was malformed: bad index, bad exponent, non-finite value,
  // wrong length, or an unknown enum code.
  TN_STATUS_INVALID_ARGUMENT = 2,
  // The arguments were well formed but outside the operation's domain.
  TN_STATUS_DOMAIN = 3,
  // The input exceeds a hard size or depth limit of the exact algorithms.
  TN_STATUS_LIMIT = 4,
  // An internal invariant failed; this indicates a library bug.
  TN_STATUS_INTERNAL = 5,
} TnStatus;

// Young function used by [`tn_luxemburg_norm`]; pass one as the `phi` code.
typedef enum TnYoung {
  // `Φ(t) = t·(1 + log⁺t)^{1/2}`.
  TN_YOUNG_L_LOG_HALF_L = 0,
  // `Φ(t) = exp(t²) − 1`.
  TN_YOUNG_EXP_SQUARE = 1,
} TnYoung;

// Opaque finitely supported sequence on dyadic intervals.
typedef struct TnSequence TnSequence;

// Opaque step function, constant on the dyadic cells of its depth.
typedef struct TnStep TnStep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the underlying library, as a static NUL-terminated string.
const char *tn_version(void);

// Message of the most recent failure on the calling thread, or null if no
// call has failed yet.  The pointer stays valid until the next failing call
// on the same thread.
const char *tn_last_error_message(void);

// Allocates an empty sequence.  Free with [`tn_seq_free`].
struct TnSequence *tn_seq_new(void);

// Frees a sequence handle; a null pointer is ignored.
//
// # Safety
// `seq` must be a pointer returned by this library and not yet freed.
void tn_seq_free(struct TnSequence *seq);

// Sets the value on the interval `[position/2^level, (position+1)/2^level)`.
// Setting 0 removes the entry; non-finite values are rejected.
//
// # Safety
// `seq` must be a live handle from this library.
enum TnStatus tn_seq_set(struct TnSequence *seq, uint32_t level, uint64_t position, double value);

// Reads the value on an interval (0 when absent from the support).
//
// # Safety
// `seq` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_seq_get(const struct TnSequence *seq,
                         uint32_t level,
                         uint64_t position,
                         double *out);

// Number of intervals with a nonzero value.
//
// # Safety
// `seq` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_seq_support_size(const struct TnSequence *seq, size_t *out);

// Reads the `i`-th support entry in breadth-first interval order.  Fails
// with `InvalidArgument` when `i` is past the end.
//
// # Safety
// `seq` must be a live handle; the three out pointers must be writable.
enum TnStatus tn_seq_entry(const struct TnSequence *seq,
                           size_t i,
                           uint32_t *out_level,
                           uint64_t *out_position,
                           double *out_value);

// Mixed norm `‖g‖_{X^{p,q}}`.  Exponents are doubles in `[1, ∞]`; pass
// `INFINITY` for `∞`.
//
// # Safety
// `seq` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_xpq_norm(const struct TnSequence *seq, double p, double q, double *out);

// Cone formulation of `‖g‖_{X^{∞,q}}`: the maximum over base points of the
// `ℓ^q` norm along the chain of intervals containing the point.
//
// # Safety
// `seq` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_cone_norm(const struct TnSequence *seq, double q, double *out);

// Duality pairing `Σ_I f_I g_I`.
//
// # Safety
// `f` and `g` must be live handles from this library; `out` must be
// writable.
enum TnStatus tn_pairing(const struct TnSequence *f, const struct TnSequence *g, double *out);

// Builds the sequence `f` with `‖f‖_{X^{p,q}} ≤ 1` whose pairing with `g`
// attains `‖g‖` in the conjugate norm.  The new handle must be freed with
// [`tn_seq_free`].
//
// # Safety
// `g` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_dual_extremizer(const struct TnSequence *g,
                                 double p,
                                 double q,
                                 struct TnSequence **out);

// Operator norm of the Haar multiplier with coefficient sequence `a` from
// `SL^∞` to `L²`, which equals `‖a‖_{X^{2,∞}}`.
//
// # Safety
// `a` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_haar_multiplier_norm(const struct TnSequence *a, double *out);

// Allocates a step function of the given dyadic depth from `len = 2^depth`
// cell values.  Free with [`tn_step_free`].
//
// # Safety
// `values` must point to `len` readable doubles (it may be null only when
// `len` is 0); `out` must be writable.
enum TnStatus tn_step_new(uint32_t depth, const double *values, size_t len, struct TnStep **out);

// Frees a step-function handle; a null pointer is ignored.
//
// # Safety
// `step` must be a pointer returned by this library and not yet freed.
void tn_step_free(struct TnStep *step);

// Dyadic `JN_p` norm of a step function: the `X^{p,∞}` norm of its
// normalized oscillation sequence.  Requires finite `p > 1`; `osc` is a
// [`TnOscKind`] code.
//
// # Safety
// `step` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_jnp_norm(const struct TnStep *step, double p, int32_t osc, double *out);

// `SL^∞` norm: the essential supremum of the Haar square function.
//
// # Safety
// `step` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_slinfty_norm(const struct TnStep *step, double *out);

// Luxemburg norm `inf {λ > 0 : ∫ Φ(|f|/λ) ≤ 1}` for the Young function
// selected by the [`TnYoung`] code `phi`.
//
// # Safety
// `step` must be a live handle from this library; `out` must be writable.
enum TnStatus tn_luxemburg_norm(const struct TnStep *step, int32_t phi, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TENTNORM_H */
