//! Independent reference implementations used to cross-check the main
//! code paths.
//!
//! Each function here computes the same object as some production routine
//! but by a different route: full-space projectors and dense
//! eigendecompositions instead of factored reshapes and stacked SVDs.
//! They scale worse and exist only for validation, in tests and in the
//! self-check command.

use ndarray::s;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{embed_permutation, enumerate_subsets, partial_trace, SubsetIndex, SystemShape};
use crate::linalg::{dagger, eigh, CMat, RANK_TOL};
use crate::reduced::ReducedSpaceVector;
use crate::sampling::random_state_in;
use crate::subspace::Subspace;

/// Dense diagonalization refuses above this total dimension.
pub const BRUTE_DIM_CAP: usize = 4096;

/// Range of a Hermitian PSD matrix: eigenvectors above a relative
/// eigenvalue threshold.
fn eig_range(m: &CMat, tol: f64) -> Result<Subspace> {
    let (vals, vecs) = eigh(&m.view())?;
    let top = vals.iter().cloned().fold(0.0f64, f64::max);
    if top <= 0.0 {
        return Ok(Subspace::zero(m.nrows()));
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > tol * top).collect();
    let mut basis = CMat::zeros((m.nrows(), keep.len()));
    for (j, &i) in keep.iter().enumerate() {
        basis.column_mut(j).assign(&vecs.column(i));
    }
    Subspace::from_orthonormal_basis(basis)
}

/// Reduction computed the obvious way: form the maximally mixed state on
/// the subspace as a full projector, partial-trace it onto each subset,
/// and take eigen-ranges.
pub fn reduce_via_mixed_state(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
) -> Result<Vec<Subspace>> {
    if s.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot reduce the zero subspace".into(),
        ));
    }
    let rho = s.projector().mapv(|z| z / s.rank() as f64);
    let subsets = enumerate_subsets(shape.n(), k)?;
    subsets
        .iter()
        .map(|sub| {
            let gamma = partial_trace(&rho.view(), shape, sub)?;
            eig_range(&gamma, RANK_TOL)
        })
        .collect()
}

/// Reduction estimated from random pure states of the subspace: the sum
/// of the ranges of their single-state reductions. Converges to the true
/// reduction once enough samples are drawn; callers pick the budget.
pub fn reduce_via_pure_samples(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Subspace>> {
    let subsets = enumerate_subsets(shape.n(), k)?;
    let mut acc: Vec<Subspace> = subsets
        .iter()
        .map(|sub| Subspace::zero(shape.dim_of(sub.particles())))
        .collect();
    for _ in 0..samples {
        let psi = random_state_in(s, rng);
        let mut rho = CMat::zeros((psi.len(), psi.len()));
        for i in 0..psi.len() {
            for j in 0..psi.len() {
                rho[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        for (idx, sub) in subsets.iter().enumerate() {
            let gamma = partial_trace(&rho.view(), shape, sub)?;
            let range = eig_range(&gamma, RANK_TOL)?;
            acc[idx] = acc[idx].sum(&range)?;
        }
    }
    Ok(acc)
}

/// A density matrix with range inside a target subspace, tagged with how
/// it was drawn. Houses the defining set of states the reduction ranges
/// over.
#[derive(Debug, Clone)]
pub struct SampledState {
    pub rho: CMat,
    pub recipe: SampleRecipe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleRecipe {
    Pure,
    Mixed { rank: usize },
}

/// Draws a density matrix supported inside s: a pure projector, or a
/// random-rank mixture with a random spectrum.
pub fn sample_state_in(s: &Subspace, mixed: bool, rng: &mut impl Rng) -> SampledState {
    let dim = s.ambient_dim();
    let rank = if mixed { rng.gen_range(1..=s.rank()) } else { 1 };
    let mut rho = CMat::zeros((dim, dim));
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.gen::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    for &w in &weights {
        let psi = random_state_in(s, rng);
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += psi[i] * psi[j].conj() * w;
            }
        }
    }
    SampledState {
        rho,
        recipe: if mixed { SampleRecipe::Mixed { rank } } else { SampleRecipe::Pure },
    }
}

/// Reduction by its defining form: accumulate the ranges of the k-body
/// marginals over sampled states of the subspace, alternating pure and
/// mixed draws. Monotone in the sample count and converges to the true
/// reduction.
pub fn sample_rs(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<ReducedSpaceVector> {
    if s.is_zero() || n_samples == 0 {
        return Err(Error::InvalidArgument(
            "sampling needs a nonzero subspace and at least one sample".into(),
        ));
    }
    let subsets = enumerate_subsets(shape.n(), k)?;
    let mut acc: Vec<Subspace> = subsets
        .iter()
        .map(|sub| Subspace::zero(shape.dim_of(sub.particles())))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n_samples {
        let state = sample_state_in(s, i % 2 == 1, &mut rng);
        for (idx, sub) in subsets.iter().enumerate() {
            let gamma = partial_trace(&state.rho.view(), shape, sub)?;
            let range = eig_range(&gamma, RANK_TOL)?;
            acc[idx] = acc[idx].sum(&range)?;
        }
    }
    ReducedSpaceVector::new(shape.clone(), k, acc)
}

/// Intersection by direct linear algebra: solve for coefficient pairs
/// giving the same vector in both bases, via the null space of [A | -B].
pub fn naive_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::InvalidArgument(
            "intersection operands have mixed ambient dimensions".into(),
        ));
    }
    let dim = a.ambient_dim();
    if a.is_zero() || b.is_zero() {
        return Ok(Subspace::zero(dim));
    }
    let (ra, rb) = (a.rank(), b.rank());
    let mut m = CMat::zeros((dim, ra + rb));
    for j in 0..ra {
        m.column_mut(j).assign(&a.basis().column(j));
    }
    for j in 0..rb {
        let col = b.basis().column(j).mapv(|z| -z);
        m.column_mut(ra + j).assign(&col);
    }
    let gram = dagger(&m.view()).dot(&m);
    let (vals, vecs) = eigh(&gram.view())?;
    // Squaring costs half the digits: null singular values surface as
    // sqrt(machine-eps) noise, so the cutoff sits well above that.
    let common: Vec<_> = (0..vals.len())
        .filter(|&i| vals[i].max(0.0).sqrt() < 1e-6)
        .map(|i| {
            let x = vecs.column(i).slice(s![0..ra]).to_owned();
            a.basis().dot(&x)
        })
        .collect();
    if common.is_empty() {
        return Ok(Subspace::zero(dim));
    }
    Subspace::from_spanning_vectors(&common, RANK_TOL)
}

/// Intersection as the top eigenspace of the averaged projector. A vector
/// lies in every subspace exactly when the average of the projectors
/// fixes it.
pub fn intersect_via_projectors(dim: usize, spaces: &[Subspace]) -> Result<Subspace> {
    if spaces.is_empty() {
        return Ok(Subspace::full(dim));
    }
    let mut q = CMat::zeros((dim, dim));
    for s in spaces {
        if s.ambient_dim() != dim {
            return Err(Error::InvalidArgument(
                "intersection operands have mixed ambient dimensions".into(),
            ));
        }
        q = q + s.projector();
    }
    q.mapv_inplace(|z| z / spaces.len() as f64);
    let (vals, vecs) = eigh(&q.view())?;
    // Eigenvalues land in [0, 1]; only exact fixed points survive.
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 1.0 - 1e-8).collect();
    let mut basis = CMat::zeros((dim, keep.len()));
    for (j, &i) in keep.iter().enumerate() {
        basis.column_mut(j).assign(&vecs.column(i));
    }
    Subspace::from_orthonormal_basis(basis)
}

/// Embeds a Hermitian term acting on a subset into the full space as
/// term ⊗ identity.
pub fn embed_term(shape: &SystemShape, subset: &SubsetIndex, term: &CMat) -> Result<CMat> {
    let map = embed_permutation(shape, subset)?;
    let (d, c) = (map.subset_dim(), map.complement_dim());
    if term.nrows() != d || term.ncols() != d {
        return Err(Error::InvalidArgument(format!(
            "term is {}x{}, subset dimension is {d}",
            term.nrows(),
            term.ncols()
        )));
    }
    let n = shape.total_dim();
    let mut full = CMat::zeros((n, n));
    for s1 in 0..d {
        for s2 in 0..d {
            let t = term[(s1, s2)];
            if t.norm_sqr() == 0.0 {
                continue;
            }
            for ci in 0..c {
                full[(map.full_index(s1, ci), map.full_index(s2, ci))] += t;
            }
        }
    }
    Ok(full)
}

/// Sum of embedded terms as one dense matrix.
pub fn assemble_hamiltonian(
    shape: &SystemShape,
    terms: &[(SubsetIndex, CMat)],
) -> Result<CMat> {
    let n = shape.total_dim();
    let mut h = CMat::zeros((n, n));
    for (subset, term) in terms {
        h = h + embed_term(shape, subset, term)?;
    }
    Ok(h)
}

/// Ground energy and ground space by dense diagonalization of the
/// assembled Hamiltonian. The ground space collects eigenvectors within
/// `gap_tol` of the lowest eigenvalue.
pub fn brute_ground(
    shape: &SystemShape,
    terms: &[(SubsetIndex, CMat)],
    gap_tol: f64,
) -> Result<(f64, Subspace)> {
    let h = assemble_hamiltonian(shape, terms)?;
    brute_ground_dense(&h, gap_tol)
}

/// Same as brute_ground for a Hamiltonian already in dense form.
pub fn brute_ground_dense(h: &CMat, gap_tol: f64) -> Result<(f64, Subspace)> {
    if h.nrows() > BRUTE_DIM_CAP {
        return Err(Error::Unsupported(format!(
            "dense diagonalization capped at dimension {BRUTE_DIM_CAP}, got {}",
            h.nrows()
        )));
    }
    let (vals, vecs) = eigh(&h.view())?;
    let e0 = vals[0];
    let count = vals.iter().take_while(|&&v| v <= e0 + gap_tol).count();
    let basis = vecs.slice(s![.., 0..count]).to_owned();
    Ok((e0, Subspace::from_orthonormal_basis(basis)?))
}

/// Searches for a violation of pre-image maximality: a direction outside
/// `pre` whose addition keeps the reduction within `v`. Returns the first
/// offender found, or None after the trial budget.
pub fn preimage_maximality_counterexample(
    shape: &SystemShape,
    v: &ReducedSpaceVector,
    pre: &Subspace,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<Option<crate::linalg::CVec>> {
    for _ in 0..trials {
        let cand = crate::sampling::random_state(shape.total_dim(), rng);
        if pre.residual(&cand) < 1e-6 {
            continue;
        }
        let mut vecs: Vec<crate::linalg::CVec> =
            pre.basis().columns().into_iter().map(|c| c.to_owned()).collect();
        vecs.push(cand.clone());
        let enlarged = Subspace::from_spanning_vectors(&vecs, RANK_TOL)?;
        let red = ReducedSpaceVector::reduce(shape, &enlarged, v.k())?;
        if red.leq(v)? {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}
