//! Seeded random generators for states, subspaces, and Hermitian terms.
//!
//! Everything routes through a caller-supplied RNG so that any search or
//! property check is reproducible from a single seed.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hilbert::SystemShape;
use crate::linalg::{dagger, CMat, CVec, RANK_TOL};
use crate::reduced::ReducedSpaceVector;
use crate::subspace::Subspace;

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Gaussian matrix, the raw material for Haar-like draws.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    Array2::from_shape_fn((rows, cols), |_| gaussian(rng))
}

/// Haar-random unit vector.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> CVec {
    let mut v = CVec::from_shape_fn(dim, |_| gaussian(rng));
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv_inplace(|z| z / n);
    v
}

/// Haar-random subspace of the given rank, as the range of a Gaussian
/// matrix.
pub fn random_subspace(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<Subspace> {
    Subspace::from_columns(&gaussian_matrix(dim, rank, rng), RANK_TOL)
}

/// Uniform random unit vector inside an existing subspace.
pub fn random_state_in(s: &Subspace, rng: &mut impl Rng) -> CVec {
    let coeff = CVec::from_shape_fn(s.rank(), |_| gaussian(rng));
    let mut v = s.basis().dot(&coeff);
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv_inplace(|z| z / n);
    v
}

/// Random product state over the factors of a shape.
pub fn random_product_state(shape: &SystemShape, rng: &mut impl Rng) -> CVec {
    let mut v = CVec::from_elem(1, C64::new(1.0, 0.0));
    for &d in shape.dims() {
        let f = random_state(d, rng);
        let mut next = CVec::zeros(v.len() * d);
        for (i, a) in v.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                next[i * d + j] = a * b;
            }
        }
        v = next;
    }
    v
}

/// Reduction of a Haar-random subspace, a generic point in the image set.
pub fn random_rsv(
    shape: &SystemShape,
    k: usize,
    rank: usize,
    rng: &mut impl Rng,
) -> Result<ReducedSpaceVector> {
    let s = random_subspace(shape.total_dim(), rank, rng)?;
    ReducedSpaceVector::reduce(shape, &s, k)
}

/// GUE-like Hermitian matrix.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> CMat {
    let a = gaussian_matrix(dim, dim, rng);
    (&a + &dagger(&a.view())).mapv(|z| z * 0.5)
}

/// Random positive semidefinite matrix whose kernel is exactly the given
/// subspace. Eigenvalues on the complement are drawn from (0.5, 1.5).
pub fn psd_with_kernel(kernel: &Subspace, rng: &mut impl Rng) -> CMat {
    let comp = kernel.complement();
    let dim = kernel.ambient_dim();
    let mut h = CMat::zeros((dim, dim));
    for col in comp.basis().columns() {
        let lam = C64::new(0.5 + rng.gen::<f64>(), 0.0);
        for i in 0..dim {
            for j in 0..dim {
                h[(i, j)] += lam * col[i] * col[j].conj();
            }
        }
    }
    h
}
