#ifndef REDSPACE_H
#define REDSPACE_H

/* Generated by cbindgen from redspace-capi; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome. Anything other than `Ok` leaves a message readable via
 * `rs_last_error_message` on the calling thread.
 */
typedef enum {
  RS_STATUS_OK = 0,
  RS_STATUS_INVALID_ARGUMENT = 1,
  RS_STATUS_UNSUPPORTED = 2,
  RS_STATUS_MEET_UNDEFINED = 3,
  RS_STATUS_SEARCH_EXHAUSTED = 4,
  RS_STATUS_PARSE = 5,
  RS_STATUS_NULL_POINTER = 6,
  RS_STATUS_PANIC = 7,
} RsStatus;

/**
 * Outcome of a sampling-based structural analysis.
 */
typedef enum {
  RS_VERDICT_CERTIFIED_YES = 0,
  RS_VERDICT_NO = 1,
  RS_VERDICT_UNKNOWN = 2,
} RsVerdict;

/**
 * k-local projector-form Hamiltonian given by its kernel components.
 */
typedef struct RsHamiltonian RsHamiltonian;

/**
 * Reduced-space vector: one subspace per k-particle subset, lex subset order.
 */
typedef struct RsRsv RsRsv;

/**
 * Tensor-product system: particle count and local dimensions.
 */
typedef struct RsShape RsShape;

/**
 * Subspace of a finite-dimensional complex space (orthonormal basis inside).
 */
typedef struct RsSubspace RsSubspace;

/**
 * Complex double, layout-compatible with C99 `double _Complex`.
 */
typedef struct {
  double re;
  double im;
} RsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rs_version(void);

/**
 * Message for the most recent failure on this thread. Empty string if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *rs_last_error_message(void);

/**
 * Builds a system of `n_particles` sites with the given local dimensions.
 */
RsStatus rs_shape_new(const size_t *dims, size_t n_particles, RsShape **out);

/**
 * Builds a system of `n_qubits` two-level sites.
 */
RsStatus rs_shape_qubits(size_t n_qubits, RsShape **out);

/**
 * Releases a shape handle. NULL is ignored.
 */
void rs_shape_free(RsShape *shape);

/**
 * Number of particles.
 */
RsStatus rs_shape_particle_count(const RsShape *shape, size_t *out);

/**
 * Product of all local dimensions.
 */
RsStatus rs_shape_total_dim(const RsShape *shape, size_t *out);

/**
 * Builds the span of `n_vectors` vectors of length `ambient_dim`, stored
 * column-major in `data` (vector j occupies entries [j*ambient_dim,
 * (j+1)*ambient_dim)). `tol <= 0` selects the default rank tolerance.
 */
RsStatus rs_subspace_new(size_t ambient_dim,
                         size_t n_vectors,
                         const RsComplex *data,
                         double tol,
                         RsSubspace **out);

/**
 * Releases a subspace handle. NULL is ignored.
 */
void rs_subspace_free(RsSubspace *s);

/**
 * Dimension of the subspace.
 */
RsStatus rs_subspace_rank(const RsSubspace *s, size_t *out);

/**
 * Dimension of the ambient space.
 */
RsStatus rs_subspace_ambient_dim(const RsSubspace *s, size_t *out);

/**
 * Copies the orthonormal basis into `buf`, column-major (one basis vector
 * per column). `buf_len` must be at least ambient_dim * rank.
 */
RsStatus rs_subspace_basis(const RsSubspace *s, RsComplex *buf, size_t buf_len);

/**
 * Norm of the component of `vec` (length `len` = ambient dim) outside `s`.
 */
RsStatus rs_subspace_residual(const RsSubspace *s, const RsComplex *vec, size_t len, double *out);

/**
 * True iff the two subspaces coincide within the equality tolerance.
 */
RsStatus rs_subspace_equals(const RsSubspace *a, const RsSubspace *b, bool *out);

/**
 * True iff `a` contains `b`.
 */
RsStatus rs_subspace_contains(const RsSubspace *a, const RsSubspace *b, bool *out);

/**
 * Intersection of two subspaces of the same ambient space.
 */
RsStatus rs_subspace_intersect(const RsSubspace *a, const RsSubspace *b, RsSubspace **out);

/**
 * Linear sum (join of subspaces) of two subspaces of the same ambient space.
 */
RsStatus rs_subspace_sum(const RsSubspace *a, const RsSubspace *b, RsSubspace **out);

/**
 * Componentwise k-particle reduction of a subspace: the ranges of its
 * k-body reduced density matrices, one per k-subset.
 */
RsStatus rs_reduce(const RsShape *shape, const RsSubspace *s, size_t k, RsRsv **out);

/**
 * Releases a reduced-space-vector handle. NULL is ignored.
 */
void rs_rsv_free(RsRsv *v);

/**
 * Locality k of the vector.
 */
RsStatus rs_rsv_k(const RsRsv *v, size_t *out);

/**
 * Number of components, C(n, k).
 */
RsStatus rs_rsv_component_count(const RsRsv *v, size_t *out);

/**
 * Copy of component `index` (subsets in lexicographic order).
 */
RsStatus rs_rsv_component(const RsRsv *v, size_t index, RsSubspace **out);

/**
 * Componentwise join (subspace sum) of two vectors over the same system.
 */
RsStatus rs_rsv_join(const RsRsv *a, const RsRsv *b, RsRsv **out);

/**
 * Componentwise containment order: a <= b.
 */
RsStatus rs_rsv_leq(const RsRsv *a, const RsRsv *b, bool *out);

/**
 * Componentwise equality of two vectors over the same system.
 */
RsStatus rs_rsv_equals(const RsRsv *a, const RsRsv *b, bool *out);

/**
 * True iff some nonzero subspace reduces exactly to this vector.
 */
RsStatus rs_rsv_is_member(const RsRsv *v, bool *out);

/**
 * Largest subspace whose reduction is componentwise contained in the vector
 * (intersection of the tensor-extended components).
 */
RsStatus rs_rsv_maximal_preimage(const RsRsv *v, RsSubspace **out);

/**
 * Decides whether the vector is a minimal nonzero element. `No` comes with
 * a strictly smaller member witness in `*out_witness` when that pointer is
 * non-NULL (NULL handle otherwise; free it with `rs_rsv_free`).
 * `random_samples` and `seed` bound and seed the candidate search.
 */
RsStatus rs_rsv_is_atom(const RsRsv *v,
                        size_t random_samples,
                        uint64_t seed,
                        RsVerdict *out_verdict,
                        size_t *out_samples_used,
                        RsRsv **out_witness);

/**
 * Decides whether the vector is join-irreducible. A refutation fills
 * `*out_w1`/`*out_w2` with the two strictly smaller join parts when those
 * pointers are non-NULL (NULL handles otherwise; free with `rs_rsv_free`).
 */
RsStatus rs_rsv_is_join_irreducible(const RsRsv *v,
                                    size_t random_samples,
                                    uint64_t seed,
                                    RsVerdict *out_verdict,
                                    size_t *out_samples_used,
                                    RsRsv **out_w1,
                                    RsRsv **out_w2);

/**
 * k-local Hamiltonian dual to the vector: one projector term per subset,
 * each kernel the corresponding component.
 */
RsStatus rs_ham_from_rsv(const RsRsv *v, RsHamiltonian **out);

/**
 * Releases a Hamiltonian handle. NULL is ignored.
 */
void rs_ham_free(RsHamiltonian *h);

/**
 * Exact ground space: the common kernel of all terms (maximal pre-image of
 * the kernel vector).
 */
RsStatus rs_ham_ground_space(const RsHamiltonian *h, RsSubspace **out);

/**
 * Componentwise kernel intersection of two Hamiltonians over the same
 * system. Fails with `MeetUndefined` when some intersection is zero.
 */
RsStatus rs_ham_meet(const RsHamiltonian *a, const RsHamiltonian *b, RsHamiltonian **out);

/**
 * Frustration-freeness of a sum of PSD terms. Term j acts on the
 * `subset_lens[j]` particles listed next in `subset_particles` (flattened,
 * each subset strictly increasing) and its matrix occupies the next
 * d_j * d_j entries of `term_data`, column-major, where d_j is the product
 * of the local dimensions on that subset. `*out_ff` receives the verdict;
 * when frustration-free and `out_ham` is non-NULL, `*out_ham` receives the
 * equivalent projector-form Hamiltonian (NULL otherwise).
 */
RsStatus rs_ff_check(const RsShape *shape,
                     size_t n_terms,
                     const size_t *subset_lens,
                     const size_t *subset_particles,
                     const RsComplex *term_data,
                     bool *out_ff,
                     RsHamiltonian **out_ham);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* REDSPACE_H */
