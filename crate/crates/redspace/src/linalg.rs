//! Dense complex linear algebra helpers shared by all modules.
//!
//! Everything here is a thin, tolerance-aware wrapper around LAPACK via
//! `ndarray-linalg`: SVD-based rank decisions and orthonormal ranges,
//! Hermitian eigendecompositions, and the handful of norms the subspace
//! arithmetic is written in terms of.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{Eigh, Norm, SVD, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Complex column vector.
pub type CVec = Array1<C64>;
/// Complex dense matrix.
pub type CMat = Array2<C64>;

/// Default relative tolerance for rank decisions (singular values below
/// `RANK_TOL * s_max` are treated as zero).
pub const RANK_TOL: f64 = 1e-10;

/// Conjugate transpose.
pub fn dagger(m: &ArrayView2<C64>) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Hermiticity defect ‖M − M†‖_F.
pub fn hermiticity_defect(m: &ArrayView2<C64>) -> f64 {
    let diff = m.to_owned() - dagger(m);
    diff.norm_l2()
}

/// Orthonormal basis of the column space of `m`, with rank decided by
/// thresholding singular values at `tol` relative to the largest.
///
/// Returns an `ambient × r` matrix with orthonormal columns; `r = 0` yields
/// an `ambient × 0` matrix.
pub fn orthonormal_range(m: &ArrayView2<C64>, tol: f64) -> Result<CMat> {
    let ambient = m.nrows();
    if m.ncols() == 0 {
        return Ok(CMat::zeros((ambient, 0)));
    }
    let (u, s, _) = m
        .svd(true, false)
        .map_err(|e| Error::InvalidArgument(format!("SVD failed: {e}")))?;
    let u = u.expect("left singular vectors requested");
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return Ok(CMat::zeros((ambient, 0)));
    }
    let rank = s.iter().filter(|&&sv| sv > tol * smax).count();
    Ok(u.slice_axis(Axis(1), (0..rank).into()).to_owned())
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending,
/// eigenvectors as columns.
///
/// The backend hands back conjugated eigenvectors for complex input
/// (row-major buffers reach LAPACK as the transpose); undo that here so
/// columns always satisfy m v = λ v.
pub fn eigh(m: &ArrayView2<C64>) -> Result<(Array1<f64>, CMat)> {
    let (vals, vecs) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::InvalidArgument(format!("eigendecomposition failed: {e}")))?;
    Ok((vals, vecs.mapv(|z| z.conj())))
}

/// Spectral norm (largest singular value); 0 for empty matrices.
pub fn spectral_norm(m: &ArrayView2<C64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match m.svd(false, false) {
        Ok((_, s, _)) => s.iter().cloned().fold(0.0_f64, f64::max),
        Err(_) => f64::NAN,
    }
}

/// Frobenius norm.
pub fn fro_norm(m: &ArrayView2<C64>) -> f64 {
    m.norm_l2()
}

/// Kronecker product of two state vectors, `a` on the more significant
/// factor.
pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}
