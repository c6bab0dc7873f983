//! Tensor-product index arithmetic for n-particle systems.
//!
//! Local dimensions may differ per particle (qubits and qutrits mix freely).
//! Basis indices use the big-endian convention: particle 0 is the most
//! significant digit, so the product ket (b_0, ..., b_{n-1}) has index
//! Σ_i b_i · Π_{j>i} d_j.

use ndarray::ArrayView2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, CMat};

/// Particle count and per-particle local dimensions of the full system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemShape {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl SystemShape {
    /// Builds a shape from local dimensions; every dimension must be ≥ 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("shape needs at least one particle".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!(
                "local dimension {d} < 2 is not a particle"
            )));
        }
        let n = dims.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total = strides[0] * dims[0];
        Ok(SystemShape { dims, strides, total })
    }

    /// n qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Basis index of a product ket given its per-particle digits.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "ket has {} digits, shape has {} particles",
                digits.len(),
                self.n()
            )));
        }
        let mut idx = 0;
        for (i, &b) in digits.iter().enumerate() {
            if b >= self.dims[i] {
                return Err(Error::InvalidArgument(format!(
                    "digit {b} out of range for local dimension {}",
                    self.dims[i]
                )));
            }
            idx += b * self.strides[i];
        }
        Ok(idx)
    }

    /// Per-particle digits of a basis index.
    pub fn digits_of(&self, index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.n()];
        let mut rem = index;
        for i in 0..self.n() {
            digits[i] = rem / self.strides[i];
            rem %= self.strides[i];
        }
        digits
    }

    /// Product of local dimensions over a set of particles.
    pub fn dim_of(&self, particles: &[usize]) -> usize {
        particles.iter().map(|&i| self.dims[i]).product()
    }
}

/// One k-subset of particles, with its position in the lexicographic
/// enumeration of all k-subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetIndex {
    particles: Vec<usize>,
    rank: usize,
}

impl SubsetIndex {
    /// Builds a subset of `{0, ..., n-1}`; indices must be strictly increasing.
    pub fn new(n: usize, particles: Vec<usize>) -> Result<Self> {
        if particles.is_empty() || particles.len() > n {
            return Err(Error::InvalidArgument(format!(
                "subset size {} out of range for n = {n}",
                particles.len()
            )));
        }
        if !particles.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "subset indices must be strictly increasing".into(),
            ));
        }
        if *particles.last().unwrap() >= n {
            return Err(Error::InvalidArgument(format!(
                "particle index {} out of range for n = {n}",
                particles.last().unwrap()
            )));
        }
        let rank = lex_rank(n, &particles);
        Ok(SubsetIndex { particles, rank })
    }

    pub fn particles(&self) -> &[usize] {
        &self.particles
    }

    /// Position in the lexicographic enumeration of all k-subsets.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn k(&self) -> usize {
        self.particles.len()
    }

    /// The complementary particles, in increasing order.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.particles.contains(i)).collect()
    }
}

/// Binomial coefficient; n stays far below overflow at this scale.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic rank of a strictly increasing k-subset of {0,...,n-1}.
fn lex_rank(n: usize, particles: &[usize]) -> usize {
    let k = particles.len();
    let mut rank = 0;
    let mut prev: isize = -1;
    for (i, &p) in particles.iter().enumerate() {
        for q in (prev + 1) as usize..p {
            rank += binomial(n - 1 - q, k - 1 - i);
        }
        prev = p as isize;
    }
    rank
}

/// All k-subsets of {0,...,n-1} in lexicographic order.
pub fn enumerate_subsets(n: usize, k: usize) -> Result<Vec<SubsetIndex>> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} out of range for n = {n}")));
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(SubsetIndex {
            particles: cur.clone(),
            rank: out.len(),
        });
        // Advance to the next subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Additive index map between (subset ket, complement ket) pairs and
/// full-space basis indices.
///
/// Both halves contribute independent offsets, so the full index is
/// `sub_offsets[s] + comp_offsets[c]`. This realizes the interleaving of a
/// subset-local operator with the identity on the remaining particles.
#[derive(Debug, Clone)]
pub struct EmbedMap {
    sub_offsets: Vec<usize>,
    comp_offsets: Vec<usize>,
}

impl EmbedMap {
    pub fn subset_dim(&self) -> usize {
        self.sub_offsets.len()
    }

    pub fn complement_dim(&self) -> usize {
        self.comp_offsets.len()
    }

    /// Full-space basis index for a (subset index, complement index) pair.
    pub fn full_index(&self, sub: usize, comp: usize) -> usize {
        self.sub_offsets[sub] + self.comp_offsets[comp]
    }

    /// Inverse of `full_index`; exact for every valid full-space index.
    pub fn split_index(&self, full: usize) -> (usize, usize) {
        // Both offset tables are strictly increasing (higher local digits
        // always carry larger full-space strides), so search one table and
        // binary-search the other for the remainder.
        for (c, &off) in self.comp_offsets.iter().enumerate() {
            if off > full {
                break;
            }
            if let Ok(s) = self.sub_offsets.binary_search(&(full - off)) {
                return (s, c);
            }
        }
        unreachable!("valid full index always splits")
    }
}

/// Builds the index map for a subset within a shape.
pub fn embed_permutation(shape: &SystemShape, subset: &SubsetIndex) -> Result<EmbedMap> {
    if subset.particles().last().copied().unwrap_or(0) >= shape.n() {
        return Err(Error::InvalidArgument("subset does not fit the shape".into()));
    }
    let comp = subset.complement(shape.n());
    Ok(EmbedMap {
        sub_offsets: offsets(shape, subset.particles()),
        comp_offsets: offsets(shape, &comp),
    })
}

/// Offsets contributed to the full index by all kets of the given particles.
fn offsets(shape: &SystemShape, particles: &[usize]) -> Vec<usize> {
    let dim: usize = particles.iter().map(|&p| shape.dims()[p]).product();
    let mut out = vec![0usize; dim];
    for (idx, slot) in out.iter_mut().enumerate() {
        // Decode idx as digits over the particle list (big-endian within
        // the list), then weight each digit by its full-space stride.
        let mut rem = idx;
        let mut acc = 0;
        for (pos, &p) in particles.iter().enumerate() {
            let tail: usize = particles[pos + 1..].iter().map(|&q| shape.dims()[q]).product();
            let digit = rem / tail;
            rem %= tail;
            acc += digit * shape.strides[p];
        }
        *slot = acc;
    }
    out
}

/// Hermiticity tolerance for partial-trace inputs.
const HERMITIAN_TOL: f64 = 1e-9;

/// Partial trace of a Hermitian operator onto the kept particles.
pub fn partial_trace(
    op: &ArrayView2<C64>,
    shape: &SystemShape,
    keep: &SubsetIndex,
) -> Result<CMat> {
    let n = shape.total_dim();
    if op.nrows() != n || op.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "operator is {}x{}, shape has total dimension {n}",
            op.nrows(),
            op.ncols()
        )));
    }
    let defect = hermiticity_defect(op);
    let scale = op.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::InvalidArgument(format!(
            "operator is not Hermitian (defect {defect:.3e})"
        )));
    }
    let map = embed_permutation(shape, keep)?;
    let d = map.subset_dim();
    let mut out = CMat::zeros((d, d));
    for s1 in 0..d {
        for s2 in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..map.complement_dim() {
                acc += op[(map.full_index(s1, c), map.full_index(s2, c))];
            }
            out[(s1, s2)] = acc;
        }
    }
    Ok(out)
}
