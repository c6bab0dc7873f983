//! k-local frustration-free Hamiltonians as order duals of reduced-space
//! tuples: ground spaces, frustration-freeness, the partial meet, and
//! minimal/irreducible ground-space analysis.
//!
//! A Hamiltonian is stored as one kernel subspace per k-subset; the term
//! on subset j is the projector onto the kernel's orthogonal complement.
//! Storing kernels rather than matrices makes ground-space questions part
//! of the same subspace calculus as the reduction side.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{embed_permutation, enumerate_subsets, SubsetIndex, SystemShape};
use crate::linalg::{eigh, hermiticity_defect, CMat, CVec, RANK_TOL};
use crate::reduced::ReducedSpaceVector;
use crate::semilattice::{candidate_states, AnalysisVerdict, SearchBudget, VerdictStatus, Witness};
use crate::subspace::Subspace;

/// Eigenvalues within this of the minimum count as ground for matrix
/// terms.
pub const KERNEL_TOL: f64 = 1e-9;
const HERM_TOL: f64 = 1e-9;
const PRODUCT_ENERGY_TOL: f64 = 1e-8;

/// A k-local Hamiltonian in projector form, one term per k-subset in
/// lexicographic order. Term j is I - P(kernels[j]) on its factor.
#[derive(Debug, Clone)]
pub struct LocalHamiltonian {
    shape: SystemShape,
    k: usize,
    kernels: Vec<Subspace>,
}

impl LocalHamiltonian {
    /// Kernels must line up with the lexicographic k-subsets and each must
    /// be nonzero; a zero kernel forces an empty ground space and is
    /// rejected outright.
    pub fn new(shape: SystemShape, k: usize, kernels: Vec<Subspace>) -> Result<Self> {
        let subsets = enumerate_subsets(shape.n(), k)?;
        if kernels.len() != subsets.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} kernels for k={k}, got {}",
                subsets.len(),
                kernels.len()
            )));
        }
        for (kernel, subset) in kernels.iter().zip(&subsets) {
            let dim = shape.dim_of(subset.particles());
            if kernel.ambient_dim() != dim {
                return Err(Error::InvalidArgument(format!(
                    "kernel on subset {:?} has ambient dim {}, expected {}",
                    subset.particles(),
                    kernel.ambient_dim(),
                    dim
                )));
            }
            if kernel.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "kernel on subset {:?} is zero",
                    subset.particles()
                )));
            }
        }
        Ok(LocalHamiltonian { shape, k, kernels })
    }

    /// Dual of a reduced-space tuple: the components become the kernels,
    /// so the ground space recovers the tuple's maximal pre-image.
    pub fn from_rsv(v: &ReducedSpaceVector) -> Result<Self> {
        LocalHamiltonian::new(v.shape().clone(), v.k(), v.components().to_vec())
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kernels(&self) -> &[Subspace] {
        &self.kernels
    }

    pub fn subsets(&self) -> Vec<SubsetIndex> {
        enumerate_subsets(self.shape.n(), self.k).expect("validated at construction")
    }

    /// Common kernel of all tensor-extended terms; may be rank 0.
    pub fn ground_space(&self) -> Result<Subspace> {
        let v = ReducedSpaceVector::new(self.shape.clone(), self.k, self.kernels.clone())?;
        v.maximal_preimage()
    }

    /// Dense sum of embedded projector terms.
    pub fn assemble_dense(&self) -> Result<CMat> {
        let dim = self.shape.total_dim();
        let mut h = CMat::zeros((dim, dim));
        for (kernel, subset) in self.kernels.iter().zip(self.subsets()) {
            let map = embed_permutation(&self.shape, &subset)?;
            let d = map.subset_dim();
            let p = kernel.projector();
            for s1 in 0..d {
                for s2 in 0..d {
                    let term = if s1 == s2 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
                        - p[(s1, s2)];
                    if term.norm_sqr() == 0.0 {
                        continue;
                    }
                    for c in 0..map.complement_dim() {
                        h[(map.full_index(s1, c), map.full_index(s2, c))] += term;
                    }
                }
            }
        }
        Ok(h)
    }

    /// Componentwise kernel intersection. Undefined whenever any
    /// intersection collapses to zero; no bottom element is invented.
    pub fn meet(&self, other: &LocalHamiltonian) -> Result<LocalHamiltonian> {
        if self.shape != other.shape || self.k != other.k {
            return Err(Error::InvalidArgument(
                "meet needs matching shapes and locality".into(),
            ));
        }
        let mut kernels = Vec::with_capacity(self.kernels.len());
        for ((a, b), subset) in self.kernels.iter().zip(&other.kernels).zip(self.subsets()) {
            let cap = a.intersect(b)?;
            if cap.is_zero() {
                return Err(Error::MeetUndefined(format!(
                    "kernels on subset {:?} intersect to zero",
                    subset.particles()
                )));
            }
            kernels.push(cap);
        }
        LocalHamiltonian::new(self.shape.clone(), self.k, kernels)
    }
}

/// Ground eigenspace of a Hermitian matrix: eigenvalues within
/// KERNEL_TOL of the minimum.
pub fn term_kernel(m: &CMat) -> Result<Subspace> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("term matrix must be square".into()));
    }
    if hermiticity_defect(&m.view()) > HERM_TOL {
        return Err(Error::InvalidArgument(
            "term matrix is not Hermitian".into(),
        ));
    }
    let (vals, vecs) = eigh(&m.view())?;
    let e0 = vals[0];
    let count = vals.iter().take_while(|&&v| v <= e0 + KERNEL_TOL).count();
    let basis = vecs.slice(ndarray::s![.., 0..count]).to_owned();
    Subspace::from_columns(&basis, RANK_TOL)
}

/// Frustration-freeness of a sum of Hermitian terms: does some state sit
/// in every term's ground eigenspace at once?
///
/// Terms are converted to their ground-eigenspace kernels; locality is
/// the largest subset size, smaller terms ride along inside the first
/// covering k-subset, duplicate subsets intersect. Subsets without a
/// term default to full kernels. A zero combined kernel already settles
/// the answer, so `false` comes back with no Hamiltonian in that case.
pub fn is_frustration_free(
    shape: &SystemShape,
    terms: &[(SubsetIndex, CMat)],
) -> Result<(bool, Option<LocalHamiltonian>)> {
    if terms.is_empty() {
        return Err(Error::InvalidArgument("no terms given".into()));
    }
    let k = terms.iter().map(|(s, _)| s.particles().len()).max().unwrap();
    let subsets = enumerate_subsets(shape.n(), k)?;
    let mut kernels: Vec<Subspace> = subsets
        .iter()
        .map(|s| Subspace::full(shape.dim_of(s.particles())))
        .collect();
    for (subset, matrix) in terms {
        let sub_dim = shape.dim_of(subset.particles());
        if matrix.nrows() != sub_dim {
            return Err(Error::InvalidArgument(format!(
                "term on subset {:?} has dimension {}, expected {sub_dim}",
                subset.particles(),
                matrix.nrows()
            )));
        }
        let kernel = term_kernel(matrix)?;
        // Host subset: the first lexicographic k-subset containing this
        // term's particles.
        let host = subsets
            .iter()
            .position(|s| subset.particles().iter().all(|p| s.particles().contains(p)))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "subset {:?} fits in no k={k} subset",
                    subset.particles()
                ))
            })?;
        let lifted = if subset.particles().len() == k {
            kernel
        } else {
            lift_kernel(shape, &kernel, subset, &subsets[host])?
        };
        let combined = kernels[host].intersect(&lifted)?;
        if combined.is_zero() {
            return Ok((false, None));
        }
        kernels[host] = combined;
    }
    let h = LocalHamiltonian::new(shape.clone(), k, kernels)?;
    let ff = h.ground_space()?.rank() >= 1;
    Ok((ff, Some(h)))
}

/// Kernel of a term on `small`, viewed on the host subset: kernel on the
/// small factor, full on the rest of the host.
fn lift_kernel(
    shape: &SystemShape,
    kernel: &Subspace,
    small: &SubsetIndex,
    host: &SubsetIndex,
) -> Result<Subspace> {
    let host_particles = host.particles();
    let host_dims: Vec<usize> = host_particles.iter().map(|&p| shape.dims()[p]).collect();
    let host_shape = SystemShape::new(host_dims)?;
    let local: Vec<usize> = small
        .particles()
        .iter()
        .map(|p| host_particles.iter().position(|q| q == p).expect("contained"))
        .collect();
    let local_subset = SubsetIndex::new(host_particles.len(), local)?;
    kernel.tensor_extend(&host_shape, &local_subset)
}

/// Ground-space fixpoint test: s is a ground space of some k-local FF
/// Hamiltonian exactly when the pre-image of its reduction gives s back.
pub fn is_ground_space(shape: &SystemShape, s: &Subspace, k: usize) -> Result<bool> {
    if s.is_zero() {
        return Ok(false);
    }
    let v = ReducedSpaceVector::reduce(shape, s, k)?;
    Ok(v.maximal_preimage()?.equals(s)?)
}

fn require_ground_space(shape: &SystemShape, s: &Subspace, k: usize) -> Result<()> {
    if !is_ground_space(shape, s, k)? {
        return Err(Error::InvalidArgument(
            "input is not a k-local ground space (pre-image of its reduction differs)".into(),
        ));
    }
    Ok(())
}

/// Closure of a seed subspace to the smallest ground space containing
/// it. Idempotent, monotone, and stays inside any ground space the seed
/// lives in.
fn ground_closure(shape: &SystemShape, seed: &Subspace, k: usize) -> Result<Subspace> {
    let v = ReducedSpaceVector::reduce(shape, seed, k)?;
    v.maximal_preimage()
}

/// Proper ground subspaces of s found by closing candidate seeds, unique
/// up to equality.
fn proper_ground_subspaces(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
    budget: &SearchBudget,
) -> Result<(Vec<Subspace>, usize)> {
    let seeds = candidate_states(shape, s, budget);
    let samples = seeds.len();
    let closures: Vec<Subspace> = seeds
        .par_iter()
        .filter_map(|phi| ground_closure(shape, &Subspace::line(phi), k).ok())
        .collect();
    let mut found: Vec<Subspace> = Vec::new();
    for c in closures {
        if c.rank() == 0 || c.rank() >= s.rank() {
            continue;
        }
        let mut seen = false;
        for kept in &found {
            if kept.equals(&c)? {
                seen = true;
                break;
            }
        }
        if !seen {
            found.push(c);
        }
    }
    Ok((found, samples))
}

/// Minimality of a ground space: does it contain a proper nonzero ground
/// space? Rank 1 certifies yes; a found proper closure refutes.
pub fn is_minimal_ground_space(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
    budget: &SearchBudget,
) -> Result<AnalysisVerdict> {
    require_ground_space(shape, s, k)?;
    if s.rank() == 1 {
        return Ok(AnalysisVerdict {
            status: VerdictStatus::CertifiedYes,
            rule: Some("rank-1 ground space".into()),
            witness: None,
            samples_used: 0,
            seed: budget.seed,
        });
    }
    let (found, samples) = proper_ground_subspaces(shape, s, k, budget)?;
    Ok(match found.into_iter().next() {
        Some(w) => AnalysisVerdict {
            status: VerdictStatus::No,
            rule: None,
            witness: Some(Witness::Space(w)),
            samples_used: samples,
            seed: budget.seed,
        },
        None => AnalysisVerdict {
            status: VerdictStatus::Unknown,
            rule: None,
            witness: None,
            samples_used: samples,
            seed: budget.seed,
        },
    })
}

/// Irreducibility of a ground space: is it the sum of two proper ground
/// spaces? Rank 1 certifies yes; a summing pair of proper closures
/// refutes.
pub fn is_irreducible_ground_space(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
    budget: &SearchBudget,
) -> Result<AnalysisVerdict> {
    require_ground_space(shape, s, k)?;
    if s.rank() == 1 {
        return Ok(AnalysisVerdict {
            status: VerdictStatus::CertifiedYes,
            rule: Some("rank-1 ground space".into()),
            witness: None,
            samples_used: 0,
            seed: budget.seed,
        });
    }
    let (found, samples) = proper_ground_subspaces(shape, s, k, budget)?;
    for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            if found[i].sum(&found[j])?.equals(s)? {
                return Ok(AnalysisVerdict {
                    status: VerdictStatus::No,
                    rule: None,
                    witness: Some(Witness::SpacePair(found[i].clone(), found[j].clone())),
                    samples_used: samples,
                    seed: budget.seed,
                });
            }
        }
    }
    Ok(AnalysisVerdict {
        status: VerdictStatus::Unknown,
        rule: None,
        witness: None,
        samples_used: samples,
        seed: budget.seed,
    })
}

/// A zero-energy state in block-product form: disjoint blocks of at most
/// two qubits, one factor state per block.
#[derive(Debug, Clone)]
pub struct BlockProductState {
    pub blocks: Vec<Vec<usize>>,
    pub states: Vec<CVec>,
    pub energy: f64,
}

impl BlockProductState {
    /// The product state as a full-space vector.
    pub fn assemble(&self, shape: &SystemShape) -> CVec {
        let dim = shape.total_dim();
        let mut v = CVec::zeros(dim);
        for f in 0..dim {
            let digits = shape.digits_of(f);
            let mut amp = C64::new(1.0, 0.0);
            for (b, block) in self.blocks.iter().enumerate() {
                let mut idx = 0usize;
                for &p in block {
                    idx = idx * shape.dims()[p] + digits[p];
                }
                amp *= self.states[b][idx];
            }
            v[f] = amp;
        }
        v
    }
}

/// All partitions of {0..n-1} into blocks of size one or two, smallest
/// free element always opening the next block.
fn pair_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(free: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        match free.first() {
            None => out.push(acc.clone()),
            Some(&head) => {
                let rest: Vec<usize> = free[1..].to_vec();
                acc.push(vec![head]);
                go(&rest, acc, out);
                acc.pop();
                for (i, &mate) in rest.iter().enumerate() {
                    let mut remaining = rest.clone();
                    remaining.remove(i);
                    acc.push(vec![head, mate]);
                    go(&remaining, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&all, &mut Vec::new(), &mut out);
    out
}

fn block_energy(shape: &SystemShape, h: &CMat, blocks: &[Vec<usize>], states: &[CVec]) -> f64 {
    let bps = BlockProductState {
        blocks: blocks.to_vec(),
        states: states.to_vec(),
        energy: 0.0,
    };
    let psi = bps.assemble(shape);
    expectation(h, &psi)
}

fn normalized(mut v: CVec) -> Option<CVec> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-14 {
        return None;
    }
    v.mapv_inplace(|z| z / n);
    Some(v)
}

/// Energy-minimizing sweep over one partition from one random start.
/// Each block state is replaced by the minimal eigenvector of its
/// effective operator.
///
/// Plain coordinate descent crawls when the ground space holds an
/// entangled state close to the product manifold: the sweep direction
/// then points along a quartic valley and the energy decays like a power
/// law. A geometric line search along the per-sweep update direction
/// jumps down that valley, restoring fast convergence.
fn optimize_partition(
    shape: &SystemShape,
    h: &CMat,
    blocks: &[Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Option<BlockProductState> {
    use rand::Rng;
    let mut states: Vec<CVec> = blocks
        .iter()
        .map(|b| {
            let dim: usize = b.iter().map(|&p| shape.dims()[p]).product();
            let v = CVec::from_shape_fn(dim, |_| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            normalized(v).expect("random state is nonzero")
        })
        .collect();
    let mut last = f64::INFINITY;
    for _ in 0..120 {
        let prev = states.clone();
        for b in 0..blocks.len() {
            let heff = block_effective(shape, h, blocks, &states, b)?;
            let (_, vecs) = eigh(&heff.view()).ok()?;
            let mut next = vecs.column(0).to_owned();
            // Align the eigenvector phase with the previous iterate so
            // the update direction is meaningful.
            let overlap: C64 = prev[b].iter().zip(next.iter()).map(|(a, c)| a.conj() * c).sum();
            if overlap.norm() > 1e-14 {
                let phase = overlap.conj() / overlap.norm();
                next.mapv_inplace(|z| z * phase);
            }
            states[b] = next;
        }
        let mut energy = block_energy(shape, h, blocks, &states);
        if energy < PRODUCT_ENERGY_TOL {
            return Some(BlockProductState {
                blocks: blocks.to_vec(),
                states,
                energy,
            });
        }
        // Extrapolate along the sweep direction; keep whichever scale
        // wins, including none.
        let base = states.clone();
        let dirs: Vec<CVec> = base.iter().zip(prev.iter()).map(|(cur, old)| cur - old).collect();
        for exp in 1..=16 {
            let scale = C64::new((1u64 << exp) as f64, 0.0);
            let cand: Option<Vec<CVec>> = base
                .iter()
                .zip(dirs.iter())
                .map(|(b, d)| normalized(b + &(d * scale)))
                .collect();
            let Some(cand) = cand else { break };
            let e = block_energy(shape, h, blocks, &cand);
            if e < energy {
                energy = e;
                states = cand;
            }
        }
        if energy < PRODUCT_ENERGY_TOL {
            return Some(BlockProductState {
                blocks: blocks.to_vec(),
                states,
                energy,
            });
        }
        if last - energy < 1e-15 {
            break;
        }
        last = energy;
    }
    None
}

fn expectation(h: &CMat, psi: &CVec) -> f64 {
    let hv = h.dot(psi);
    psi.iter().zip(hv.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Effective operator on one block: the full Hamiltonian contracted
/// against every other block's current state.
fn block_effective(
    shape: &SystemShape,
    h: &CMat,
    blocks: &[Vec<usize>],
    states: &[CVec],
    which: usize,
) -> Option<CMat> {
    let subset = SubsetIndex::new(shape.n(), blocks[which].clone()).ok()?;
    let map = embed_permutation(shape, &subset).ok()?;
    let comp = subset.complement(shape.n());
    let (d, cdim) = (map.subset_dim(), map.complement_dim());
    // Environment amplitudes over complement indices, big-endian digits.
    let mut w = vec![C64::new(1.0, 0.0); cdim];
    for (ci, amp) in w.iter_mut().enumerate() {
        let mut digits = vec![0usize; shape.n()];
        let mut rem = ci;
        for &p in comp.iter().rev() {
            let dp = shape.dims()[p];
            digits[p] = rem % dp;
            rem /= dp;
        }
        for (b, block) in blocks.iter().enumerate() {
            if b == which {
                continue;
            }
            let mut idx = 0usize;
            for &p in block {
                idx = idx * shape.dims()[p] + digits[p];
            }
            *amp *= states[b][idx];
        }
    }
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-14 {
        return None;
    }
    for amp in &mut w {
        *amp /= norm;
    }
    let mut heff = CMat::zeros((d, d));
    for s1 in 0..d {
        for s2 in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for c1 in 0..cdim {
                if w[c1].norm_sqr() == 0.0 {
                    continue;
                }
                for c2 in 0..cdim {
                    if w[c2].norm_sqr() == 0.0 {
                        continue;
                    }
                    acc += w[c1].conj() * h[(map.full_index(s1, c1), map.full_index(s2, c2))] * w[c2];
                }
            }
            heff[(s1, s2)] = acc;
        }
    }
    Some(heff)
}

/// Search for a zero-energy ground state that is a product of one- and
/// two-qubit factors. Partitions run in parallel; the reported hit is
/// the first by partition order, so fixed seeds reproduce exactly.
pub fn qubit2_product_ground_search(
    h: &LocalHamiltonian,
    budget: &SearchBudget,
) -> Result<Option<BlockProductState>> {
    if h.shape().dims().iter().any(|&d| d != 2) {
        return Err(Error::Unsupported(
            "product ground search needs qubit factors".into(),
        ));
    }
    if h.k() != 2 {
        return Err(Error::Unsupported(
            "product ground search needs locality k=2".into(),
        ));
    }
    let dense = h.assemble_dense()?;
    let partitions = pair_partitions(h.shape().n());
    let starts = budget.random_samples.clamp(1, 16);
    let hit = (0..partitions.len()).into_par_iter().find_map_first(|pi| {
        for start in 0..starts {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream((pi as u64) * 1_000 + start as u64);
            if let Some(found) =
                optimize_partition(h.shape(), &dense, &partitions[pi], &mut rng)
            {
                return Some(found);
            }
        }
        None
    });
    Ok(hit)
}
