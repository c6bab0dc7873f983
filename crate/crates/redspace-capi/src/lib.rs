//! C ABI over the reduced-space calculus: opaque handles, status codes,
//! column-major complex buffers. Every function returning `RsStatus` reports
//! failure details through `rs_last_error_message`.

use std::cell::RefCell;
use std::ffi::CString;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ndarray::ShapeBuilder;
use num_complex::Complex64 as C64;
use redspace::error::Error;
use redspace::ffham::{is_frustration_free, LocalHamiltonian};
use redspace::hilbert::{SubsetIndex, SystemShape};
use redspace::linalg::{CMat, CVec, RANK_TOL};
use redspace::reduced::ReducedSpaceVector;
use redspace::semilattice::{is_atom, is_join_irreducible, SearchBudget, VerdictStatus, Witness};
use redspace::subspace::Subspace;

/// Tensor-product system: particle count and local dimensions.
pub struct RsShape(SystemShape);

/// Subspace of a finite-dimensional complex space (orthonormal basis inside).
pub struct RsSubspace(Subspace);

/// Reduced-space vector: one subspace per k-particle subset, lex subset order.
pub struct RsRsv(ReducedSpaceVector);

/// k-local projector-form Hamiltonian given by its kernel components.
pub struct RsHamiltonian(LocalHamiltonian);

/// Complex double, layout-compatible with C99 `double _Complex`.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct RsComplex {
    pub re: f64,
    pub im: f64,
}

/// Call outcome. Anything other than `Ok` leaves a message readable via
/// `rs_last_error_message` on the calling thread.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RsStatus {
    Ok = 0,
    InvalidArgument = 1,
    Unsupported = 2,
    MeetUndefined = 3,
    SearchExhausted = 4,
    Parse = 5,
    NullPointer = 6,
    Panic = 7,
}

/// Outcome of a sampling-based structural analysis.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RsVerdict {
    CertifiedYes = 0,
    No = 1,
    Unknown = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RsStatus {
    match e {
        Error::InvalidArgument(_) => RsStatus::InvalidArgument,
        Error::Unsupported(_) => RsStatus::Unsupported,
        Error::MeetUndefined(_) => RsStatus::MeetUndefined,
        Error::SearchExhausted(_) => RsStatus::SearchExhausted,
        Error::Parse(_) => RsStatus::Parse,
    }
}

fn null_error() -> RsStatus {
    set_error("null pointer argument");
    RsStatus::NullPointer
}

fn invalid(msg: &str) -> RsStatus {
    set_error(msg);
    RsStatus::InvalidArgument
}

fn guard<T>(f: impl FnOnce() -> Result<T, Error>) -> Result<T, RsStatus> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => {
            set_error(&e.to_string());
            Err(status_of(&e))
        }
        Err(_) => {
            set_error("panic across the FFI boundary");
            Err(RsStatus::Panic)
        }
    }
}

macro_rules! try_ref {
    ($p:expr) => {
        match $p.as_ref() {
            Some(r) => r,
            None => return null_error(),
        }
    };
}

macro_rules! try_out {
    ($p:expr) => {
        match $p.as_mut() {
            Some(r) => r,
            None => return null_error(),
        }
    };
}

fn complex_in(buf: &[RsComplex]) -> Vec<C64> {
    buf.iter().map(|z| C64::new(z.re, z.im)).collect()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. Empty string if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a system of `n_particles` sites with the given local dimensions.
#[no_mangle]
pub unsafe extern "C" fn rs_shape_new(
    dims: *const usize,
    n_particles: usize,
    out: *mut *mut RsShape,
) -> RsStatus {
    let out = try_out!(out);
    if dims.is_null() {
        return null_error();
    }
    let dims = slice::from_raw_parts(dims, n_particles).to_vec();
    match guard(|| SystemShape::new(dims)) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsShape(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Builds a system of `n_qubits` two-level sites.
#[no_mangle]
pub unsafe extern "C" fn rs_shape_qubits(n_qubits: usize, out: *mut *mut RsShape) -> RsStatus {
    let out = try_out!(out);
    match guard(|| SystemShape::qubits(n_qubits)) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsShape(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Releases a shape handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_shape_free(shape: *mut RsShape) {
    if !shape.is_null() {
        drop(Box::from_raw(shape));
    }
}

/// Number of particles.
#[no_mangle]
pub unsafe extern "C" fn rs_shape_particle_count(
    shape: *const RsShape,
    out: *mut usize,
) -> RsStatus {
    let shape = try_ref!(shape);
    let out = try_out!(out);
    *out = shape.0.n();
    RsStatus::Ok
}

/// Product of all local dimensions.
#[no_mangle]
pub unsafe extern "C" fn rs_shape_total_dim(shape: *const RsShape, out: *mut usize) -> RsStatus {
    let shape = try_ref!(shape);
    let out = try_out!(out);
    *out = shape.0.total_dim();
    RsStatus::Ok
}

/// Builds the span of `n_vectors` vectors of length `ambient_dim`, stored
/// column-major in `data` (vector j occupies entries [j*ambient_dim,
/// (j+1)*ambient_dim)). `tol <= 0` selects the default rank tolerance.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_new(
    ambient_dim: usize,
    n_vectors: usize,
    data: *const RsComplex,
    tol: f64,
    out: *mut *mut RsSubspace,
) -> RsStatus {
    let out = try_out!(out);
    if data.is_null() {
        return null_error();
    }
    let buf = slice::from_raw_parts(data, ambient_dim * n_vectors);
    let tol = if tol > 0.0 { tol } else { RANK_TOL };
    let result = guard(|| {
        let vectors: Vec<CVec> = (0..n_vectors)
            .map(|j| {
                CVec::from(complex_in(&buf[j * ambient_dim..(j + 1) * ambient_dim]))
            })
            .collect();
        Subspace::from_spanning_vectors(&vectors, tol)
    });
    match result {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsSubspace(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Releases a subspace handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_free(s: *mut RsSubspace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension of the subspace.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_rank(s: *const RsSubspace, out: *mut usize) -> RsStatus {
    let s = try_ref!(s);
    let out = try_out!(out);
    *out = s.0.rank();
    RsStatus::Ok
}

/// Dimension of the ambient space.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_ambient_dim(
    s: *const RsSubspace,
    out: *mut usize,
) -> RsStatus {
    let s = try_ref!(s);
    let out = try_out!(out);
    *out = s.0.ambient_dim();
    RsStatus::Ok
}

/// Copies the orthonormal basis into `buf`, column-major (one basis vector
/// per column). `buf_len` must be at least ambient_dim * rank.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_basis(
    s: *const RsSubspace,
    buf: *mut RsComplex,
    buf_len: usize,
) -> RsStatus {
    let s = try_ref!(s);
    if buf.is_null() {
        return null_error();
    }
    let basis = s.0.basis();
    let (dim, rank) = (basis.nrows(), basis.ncols());
    if buf_len < dim * rank {
        return invalid("basis buffer too small");
    }
    let buf = slice::from_raw_parts_mut(buf, dim * rank);
    for j in 0..rank {
        for i in 0..dim {
            let z = basis[[i, j]];
            buf[j * dim + i] = RsComplex { re: z.re, im: z.im };
        }
    }
    RsStatus::Ok
}

/// Norm of the component of `vec` (length `len` = ambient dim) outside `s`.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_residual(
    s: *const RsSubspace,
    vec: *const RsComplex,
    len: usize,
    out: *mut f64,
) -> RsStatus {
    let s = try_ref!(s);
    let out = try_out!(out);
    if vec.is_null() {
        return null_error();
    }
    if len != s.0.ambient_dim() {
        return invalid("vector length differs from the ambient dimension");
    }
    let v = CVec::from(complex_in(slice::from_raw_parts(vec, len)));
    *out = s.0.residual(&v);
    RsStatus::Ok
}

/// True iff the two subspaces coincide within the equality tolerance.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_equals(
    a: *const RsSubspace,
    b: *const RsSubspace,
    out: *mut bool,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.equals(&b.0)) {
        Ok(v) => {
            *out = v;
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// True iff `a` contains `b`.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_contains(
    a: *const RsSubspace,
    b: *const RsSubspace,
    out: *mut bool,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.contains(&b.0)) {
        Ok(v) => {
            *out = v;
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Intersection of two subspaces of the same ambient space.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_intersect(
    a: *const RsSubspace,
    b: *const RsSubspace,
    out: *mut *mut RsSubspace,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.intersect(&b.0)) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsSubspace(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Linear sum (join of subspaces) of two subspaces of the same ambient space.
#[no_mangle]
pub unsafe extern "C" fn rs_subspace_sum(
    a: *const RsSubspace,
    b: *const RsSubspace,
    out: *mut *mut RsSubspace,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.sum(&b.0)) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsSubspace(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Componentwise k-particle reduction of a subspace: the ranges of its
/// k-body reduced density matrices, one per k-subset.
#[no_mangle]
pub unsafe extern "C" fn rs_reduce(
    shape: *const RsShape,
    s: *const RsSubspace,
    k: usize,
    out: *mut *mut RsRsv,
) -> RsStatus {
    let shape = try_ref!(shape);
    let s = try_ref!(s);
    let out = try_out!(out);
    match guard(|| ReducedSpaceVector::reduce(&shape.0, &s.0, k)) {
        Ok(v) => {
            *out = Box::into_raw(Box::new(RsRsv(v)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Releases a reduced-space-vector handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_free(v: *mut RsRsv) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Locality k of the vector.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_k(v: *const RsRsv, out: *mut usize) -> RsStatus {
    let v = try_ref!(v);
    let out = try_out!(out);
    *out = v.0.k();
    RsStatus::Ok
}

/// Number of components, C(n, k).
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_component_count(v: *const RsRsv, out: *mut usize) -> RsStatus {
    let v = try_ref!(v);
    let out = try_out!(out);
    *out = v.0.components().len();
    RsStatus::Ok
}

/// Copy of component `index` (subsets in lexicographic order).
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_component(
    v: *const RsRsv,
    index: usize,
    out: *mut *mut RsSubspace,
) -> RsStatus {
    let v = try_ref!(v);
    let out = try_out!(out);
    let components = v.0.components();
    if index >= components.len() {
        return invalid("component index out of range");
    }
    *out = Box::into_raw(Box::new(RsSubspace(components[index].clone())));
    RsStatus::Ok
}

/// Componentwise join (subspace sum) of two vectors over the same system.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_join(
    a: *const RsRsv,
    b: *const RsRsv,
    out: *mut *mut RsRsv,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.join(&b.0)) {
        Ok(v) => {
            *out = Box::into_raw(Box::new(RsRsv(v)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Componentwise containment order: a <= b.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_leq(
    a: *const RsRsv,
    b: *const RsRsv,
    out: *mut bool,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.leq(&b.0)) {
        Ok(v) => {
            *out = v;
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Componentwise equality of two vectors over the same system.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_equals(
    a: *const RsRsv,
    b: *const RsRsv,
    out: *mut bool,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.equals(&b.0)) {
        Ok(v) => {
            *out = v;
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// True iff some nonzero subspace reduces exactly to this vector.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_is_member(v: *const RsRsv, out: *mut bool) -> RsStatus {
    let v = try_ref!(v);
    let out = try_out!(out);
    match guard(|| v.0.is_member()) {
        Ok(b) => {
            *out = b;
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Largest subspace whose reduction is componentwise contained in the vector
/// (intersection of the tensor-extended components).
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_maximal_preimage(
    v: *const RsRsv,
    out: *mut *mut RsSubspace,
) -> RsStatus {
    let v = try_ref!(v);
    let out = try_out!(out);
    match guard(|| v.0.maximal_preimage()) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsSubspace(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

fn witness_vector(witness: Option<Witness>) -> *mut RsRsv {
    match witness {
        Some(Witness::Vector(w)) => Box::into_raw(Box::new(RsRsv(w))),
        _ => ptr::null_mut(),
    }
}

fn verdict_code(status: VerdictStatus) -> RsVerdict {
    match status {
        VerdictStatus::CertifiedYes => RsVerdict::CertifiedYes,
        VerdictStatus::No => RsVerdict::No,
        VerdictStatus::Unknown => RsVerdict::Unknown,
    }
}

/// Decides whether the vector is a minimal nonzero element. `No` comes with
/// a strictly smaller member witness in `*out_witness` when that pointer is
/// non-NULL (NULL handle otherwise; free it with `rs_rsv_free`).
/// `random_samples` and `seed` bound and seed the candidate search.
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_is_atom(
    v: *const RsRsv,
    random_samples: usize,
    seed: u64,
    out_verdict: *mut RsVerdict,
    out_samples_used: *mut usize,
    out_witness: *mut *mut RsRsv,
) -> RsStatus {
    let v = try_ref!(v);
    let out_verdict = try_out!(out_verdict);
    match guard(|| is_atom(&v.0, &SearchBudget::new(random_samples, seed))) {
        Ok(verdict) => {
            *out_verdict = verdict_code(verdict.status);
            if let Some(out) = out_samples_used.as_mut() {
                *out = verdict.samples_used;
            }
            if let Some(out) = out_witness.as_mut() {
                *out = witness_vector(verdict.witness);
            }
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Decides whether the vector is join-irreducible. A refutation fills
/// `*out_w1`/`*out_w2` with the two strictly smaller join parts when those
/// pointers are non-NULL (NULL handles otherwise; free with `rs_rsv_free`).
#[no_mangle]
pub unsafe extern "C" fn rs_rsv_is_join_irreducible(
    v: *const RsRsv,
    random_samples: usize,
    seed: u64,
    out_verdict: *mut RsVerdict,
    out_samples_used: *mut usize,
    out_w1: *mut *mut RsRsv,
    out_w2: *mut *mut RsRsv,
) -> RsStatus {
    let v = try_ref!(v);
    let out_verdict = try_out!(out_verdict);
    match guard(|| is_join_irreducible(&v.0, &SearchBudget::new(random_samples, seed))) {
        Ok(verdict) => {
            *out_verdict = verdict_code(verdict.status);
            if let Some(out) = out_samples_used.as_mut() {
                *out = verdict.samples_used;
            }
            let (w1, w2) = match verdict.witness {
                Some(Witness::VectorPair(a, b)) => (
                    Box::into_raw(Box::new(RsRsv(*a))),
                    Box::into_raw(Box::new(RsRsv(*b))),
                ),
                _ => (ptr::null_mut(), ptr::null_mut()),
            };
            if let Some(out) = out_w1.as_mut() {
                *out = w1;
            } else if !w1.is_null() {
                drop(Box::from_raw(w1));
            }
            if let Some(out) = out_w2.as_mut() {
                *out = w2;
            } else if !w2.is_null() {
                drop(Box::from_raw(w2));
            }
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// k-local Hamiltonian dual to the vector: one projector term per subset,
/// each kernel the corresponding component.
#[no_mangle]
pub unsafe extern "C" fn rs_ham_from_rsv(
    v: *const RsRsv,
    out: *mut *mut RsHamiltonian,
) -> RsStatus {
    let v = try_ref!(v);
    let out = try_out!(out);
    match guard(|| LocalHamiltonian::from_rsv(&v.0)) {
        Ok(h) => {
            *out = Box::into_raw(Box::new(RsHamiltonian(h)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Releases a Hamiltonian handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rs_ham_free(h: *mut RsHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Exact ground space: the common kernel of all terms (maximal pre-image of
/// the kernel vector).
#[no_mangle]
pub unsafe extern "C" fn rs_ham_ground_space(
    h: *const RsHamiltonian,
    out: *mut *mut RsSubspace,
) -> RsStatus {
    let h = try_ref!(h);
    let out = try_out!(out);
    match guard(|| h.0.ground_space()) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(RsSubspace(s)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Componentwise kernel intersection of two Hamiltonians over the same
/// system. Fails with `MeetUndefined` when some intersection is zero.
#[no_mangle]
pub unsafe extern "C" fn rs_ham_meet(
    a: *const RsHamiltonian,
    b: *const RsHamiltonian,
    out: *mut *mut RsHamiltonian,
) -> RsStatus {
    let a = try_ref!(a);
    let b = try_ref!(b);
    let out = try_out!(out);
    match guard(|| a.0.meet(&b.0)) {
        Ok(h) => {
            *out = Box::into_raw(Box::new(RsHamiltonian(h)));
            RsStatus::Ok
        }
        Err(st) => st,
    }
}

/// Frustration-freeness of a sum of PSD terms. Term j acts on the
/// `subset_lens[j]` particles listed next in `subset_particles` (flattened,
/// each subset strictly increasing) and its matrix occupies the next
/// d_j * d_j entries of `term_data`, column-major, where d_j is the product
/// of the local dimensions on that subset. `*out_ff` receives the verdict;
/// when frustration-free and `out_ham` is non-NULL, `*out_ham` receives the
/// equivalent projector-form Hamiltonian (NULL otherwise).
#[no_mangle]
pub unsafe extern "C" fn rs_ff_check(
    shape: *const RsShape,
    n_terms: usize,
    subset_lens: *const usize,
    subset_particles: *const usize,
    term_data: *const RsComplex,
    out_ff: *mut bool,
    out_ham: *mut *mut RsHamiltonian,
) -> RsStatus {
    let shape = try_ref!(shape);
    let out_ff = try_out!(out_ff);
    if subset_lens.is_null() || subset_particles.is_null() || term_data.is_null() {
        return null_error();
    }
    let lens = slice::from_raw_parts(subset_lens, n_terms);
    let total_particles: usize = lens.iter().sum();
    let particles = slice::from_raw_parts(subset_particles, total_particles);
    let result = guard(|| {
        let n = shape.0.n();
        let mut terms = Vec::with_capacity(n_terms);
        let mut p_off = 0usize;
        let mut d_off = 0usize;
        for &len in lens {
            let subset = SubsetIndex::new(n, particles[p_off..p_off + len].to_vec())?;
            p_off += len;
            let d = shape.0.dim_of(subset.particles());
            // Reads d*d entries; the caller's buffer length is implicit in
            // the subset list, so walk it term by term.
            let chunk = slice::from_raw_parts(term_data.add(d_off), d * d);
            d_off += d * d;
            let m = CMat::from_shape_vec((d, d).f(), complex_in(chunk))
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            terms.push((subset, m));
        }
        is_frustration_free(&shape.0, &terms)
    });
    match result {
        Ok((ff, ham)) => {
            *out_ff = ff;
            if let Some(out) = out_ham.as_mut() {
                *out = match ham {
                    Some(h) if ff => Box::into_raw(Box::new(RsHamiltonian(h))),
                    _ => ptr::null_mut(),
                };
            }
            RsStatus::Ok
        }
        Err(st) => st,
    }
}
