#ifndef QUSWAP_H
#define QUSWAP_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QsStatus {
  QS_STATUS_OK = 0,
  QS_STATUS_NULL_POINTER = 1,
  QS_STATUS_INVALID_ARGUMENT = 2,
  QS_STATUS_DIMENSION_MISMATCH = 3,
  QS_STATUS_NOT_UNITARY = 4,
  QS_STATUS_NOT_NORMALIZED = 5,
  QS_STATUS_NON_FINITE = 6,
  QS_STATUS_SINGULAR = 7,
  QS_STATUS_BUFFER_TOO_SMALL = 8,
  QS_STATUS_PANIC = 9,
} QsStatus;

// Verification suite selector for [`qs_verify`].
typedef enum QsSuite {
  QS_SUITE_QUDIT = 0,
  QS_SUITE_FOCK = 1,
  QS_SUITE_ALL = 2,
} QsSuite;

// Opaque square complex matrix.
typedef struct QsMatrix QsMatrix;

// Opaque normalized state vector.
typedef struct QsState QsState;

typedef struct QsComplex {
  double re;
  double im;
} QsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *qs_last_error_message(void);

// Builds a named gate (`sigma1`, `sigma3`, `k`, `cshift`, `cshift-rev`,
// `swap`, `swap-composed`) for qudit dimension `d`.
//
// # Safety
// `name` must be a valid NUL-terminated string; `out` must be writable.
enum QsStatus qs_gate(const char *name, size_t d, struct QsMatrix **out);

// Copies `dim * dim` row-major entries into a new matrix.
//
// # Safety
// `entries` must point to `dim * dim` values; `out` must be writable.
enum QsStatus qs_matrix_new(size_t dim, const struct QsComplex *entries, struct QsMatrix **out);

// Returns the dimension, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t qs_matrix_dim(const struct QsMatrix *m);

// Copies row-major entries into `buf`, which must hold at least `dim * dim` values.
//
// # Safety
// `m` must be a live handle; `buf` must be writable for `len` values.
enum QsStatus qs_matrix_entries(const struct QsMatrix *m, struct QsComplex *buf, size_t len);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum QsStatus qs_matrix_get(const struct QsMatrix *m,
                            size_t row,
                            size_t col,
                            struct QsComplex *out);

// # Safety
// `m` must be null or a handle not yet freed.
void qs_matrix_free(struct QsMatrix *m);

// `out = a * b`
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum QsStatus qs_matrix_mul(const struct QsMatrix *a,
                            const struct QsMatrix *b,
                            struct QsMatrix **out);

// `out = a ⊗ b`
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum QsStatus qs_matrix_kron(const struct QsMatrix *a,
                             const struct QsMatrix *b,
                             struct QsMatrix **out);

// # Safety
// `a` must be a live handle; `out` must be writable.
enum QsStatus qs_matrix_adjoint(const struct QsMatrix *a, struct QsMatrix **out);

// Matrix exponential.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum QsStatus qs_matrix_exp(const struct QsMatrix *a, struct QsMatrix **out);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum QsStatus qs_matrix_is_unitary(const struct QsMatrix *m, double tol, bool *out);

// Largest entrywise modulus of `a − b`; infinite on dimension mismatch.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum QsStatus qs_matrix_max_norm_diff(const struct QsMatrix *a,
                                      const struct QsMatrix *b,
                                      double *out);

// Controlled-`u` on two qudits of dimension `d`. With `reversed`, the second
// qudit is the control.
//
// # Safety
// `u` must be a live handle; `out` must be writable.
enum QsStatus qs_controlled_unitary(const struct QsMatrix *u,
                                    size_t d,
                                    bool reversed,
                                    struct QsMatrix **out);

// Copies `len` amplitudes into a new state; they must already be normalized.
//
// # Safety
// `amplitudes` must point to `len` values; `out` must be writable.
enum QsStatus qs_state_new(const struct QsComplex *amplitudes, size_t len, struct QsState **out);

// Returns the dimension, or 0 for a null handle.
//
// # Safety
// `s` must be null or a live handle.
size_t qs_state_dim(const struct QsState *s);

// # Safety
// `s` must be a live handle; `buf` must be writable for `len` values.
enum QsStatus qs_state_amplitudes(const struct QsState *s, struct QsComplex *buf, size_t len);

// # Safety
// `s` must be null or a handle not yet freed.
void qs_state_free(struct QsState *s);

// `out = m |s⟩`; fails if `m` does not preserve the norm.
//
// # Safety
// `m`, `s` must be live handles; `out` must be writable.
enum QsStatus qs_state_apply(const struct QsMatrix *m,
                             const struct QsState *s,
                             struct QsState **out);

// `out = |a⟩ ⊗ |b⟩`
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum QsStatus qs_state_tensor(const struct QsState *a,
                              const struct QsState *b,
                              struct QsState **out);

// |⟨a|b⟩|²
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum QsStatus qs_fidelity(const struct QsState *a, const struct QsState *b, double *out);

// Truncated coherent state |z⟩ on `n_max + 1` levels. The weight lost to
// truncation is written to `leaked_weight` when it is non-null.
//
// # Safety
// `out` must be writable; `leaked_weight` must be null or writable.
enum QsStatus qs_coherent_state(struct QsComplex z,
                                size_t n_max,
                                struct QsState **out,
                                double *leaked_weight);

// Two-mode beamsplitter exp(t a₁†a₂ − t̄ a₂†a₁).
//
// # Safety
// `out` must be writable.
enum QsStatus qs_beamsplitter(struct QsComplex t, size_t n_max, struct QsMatrix **out);

// Fixed two-mode exchange unitary for phase `theta`.
//
// # Safety
// `out` must be writable.
enum QsStatus qs_exchange_protocol(double theta, size_t n_max, struct QsMatrix **out);

// Imperfect clone of a single-mode state `x` (dimension `n_max + 1`) by
// direct simulation. `adequacy_weight` receives the weight of `x` above
// `n_max / 2` when non-null.
//
// # Safety
// `x` must be a live handle; `out` must be writable; `adequacy_weight` must
// be null or writable.
enum QsStatus qs_clone_numeric(const struct QsState *x,
                               struct QsComplex t,
                               size_t n_max,
                               struct QsState **out,
                               double *adequacy_weight);

// Imperfect clone from the closed-form amplitudes.
//
// # Safety
// `x` must be a live handle; `out` must be writable.
enum QsStatus qs_clone_closed_form(const struct QsState *x,
                                   struct QsComplex t,
                                   size_t n_max,
                                   struct QsState **out);

// Runs a verification suite (a [`QsSuite`] value) with the default
// tolerances. `out_json` receives the JSON report, released with
// [`qs_string_free`].
//
// # Safety
// `out_json` and `all_passed` must be writable.
enum QsStatus qs_verify(uint32_t suite,
                        size_t d_max,
                        size_t n_max,
                        char **out_json,
                        bool *all_passed);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void qs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUSWAP_H */
