//! JSON encodings for subspaces, reduced-space tuples, Hamiltonians, and
//! analysis verdicts.
//!
//! Amplitudes are [re, im] pairs. Anywhere a vector is expected, a ket
//! string like "011" stands for that computational-basis state, digits
//! read left to right over the particles in question. Tuple components
//! may arrive in any subset order and are sorted to the lexicographic
//! convention on load; emitters always write lexicographic order.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffham::{term_kernel, LocalHamiltonian};
use crate::hilbert::{enumerate_subsets, SubsetIndex, SystemShape};
use crate::linalg::{CMat, CVec};
use crate::reduced::ReducedSpaceVector;
use crate::semilattice::{
    AnalysisVerdict, DecompositionPart, JoinPrimePair, VerdictStatus, Witness,
};
use crate::subspace::Subspace;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorJson {
    Ket(String),
    Amplitudes(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<VectorJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RsvComponentJson {
    pub subset: Vec<usize>,
    pub vectors: Vec<VectorJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RsvJson {
    pub dims: Vec<usize>,
    pub k: usize,
    pub components: Vec<RsvComponentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamTermJson {
    pub subset: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_vectors: Option<Vec<VectorJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<(f64, f64)>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianJson {
    pub dims: Vec<usize>,
    pub k: usize,
    pub terms: Vec<HamTermJson>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Basis index of a ket string over the given local dimensions.
fn ket_index(ket: &str, dims: &[usize]) -> Result<usize> {
    if ket.len() != dims.len() {
        return Err(parse_err(format!(
            "ket \"{ket}\" has {} digits, expected {}",
            ket.len(),
            dims.len()
        )));
    }
    let mut idx = 0usize;
    for (ch, &d) in ket.chars().zip(dims) {
        let digit = ch
            .to_digit(10)
            .ok_or_else(|| parse_err(format!("ket digit '{ch}' is not a number")))?
            as usize;
        if digit >= d {
            return Err(parse_err(format!(
                "ket digit {digit} out of range for local dimension {d}"
            )));
        }
        idx = idx * d + digit;
    }
    Ok(idx)
}

fn vector_from_json(v: &VectorJson, dims: &[usize]) -> Result<CVec> {
    let total: usize = dims.iter().product();
    match v {
        VectorJson::Ket(ket) => {
            let mut out = CVec::zeros(total);
            out[ket_index(ket, dims)?] = C64::new(1.0, 0.0);
            Ok(out)
        }
        VectorJson::Amplitudes(amps) => {
            if amps.len() != total {
                return Err(parse_err(format!(
                    "vector has {} amplitudes, expected {total}",
                    amps.len()
                )));
            }
            Ok(CVec::from_iter(amps.iter().map(|&(re, im)| C64::new(re, im))))
        }
    }
}

fn vector_to_json(v: &CVec) -> VectorJson {
    VectorJson::Amplitudes(v.iter().map(|z| (z.re, z.im)).collect())
}

/// Reads a full-system subspace. A bare ket implies qubit dimensions
/// when dims are absent.
pub fn subspace_from_json(j: &SubspaceJson, tol: f64) -> Result<(SystemShape, Subspace)> {
    if let Some(ket) = &j.ket {
        let dims = j.dims.clone().unwrap_or_else(|| vec![2; ket.len()]);
        let shape = SystemShape::new(dims.clone())?;
        let v = vector_from_json(&VectorJson::Ket(ket.clone()), &dims)?;
        return Ok((shape, Subspace::line(&v)));
    }
    let dims = j
        .dims
        .clone()
        .ok_or_else(|| parse_err("subspace needs \"dims\" unless given as a ket"))?;
    let shape = SystemShape::new(dims.clone())?;
    let vectors = j
        .vectors
        .as_ref()
        .ok_or_else(|| parse_err("subspace needs \"vectors\" or \"ket\""))?;
    if vectors.is_empty() {
        // Zero subspace: legal as data (e.g. a frustrated ground space);
        // operations that need a nonzero space reject it themselves.
        return Ok((shape.clone(), Subspace::zero(shape.total_dim())));
    }
    let parsed: Vec<CVec> = vectors
        .iter()
        .map(|v| vector_from_json(v, &dims))
        .collect::<Result<_>>()?;
    Ok((shape, Subspace::from_spanning_vectors(&parsed, tol)?))
}

pub fn subspace_to_json(shape: &SystemShape, s: &Subspace) -> SubspaceJson {
    SubspaceJson {
        dims: Some(shape.dims().to_vec()),
        vectors: Some(s.basis().columns().into_iter().map(|c| vector_to_json(&c.to_owned())).collect()),
        ket: None,
    }
}

/// Reads a reduced-space tuple. Components may be listed in any subset
/// order; exactly the full lexicographic family must be present.
pub fn rsv_from_json(j: &RsvJson, tol: f64) -> Result<ReducedSpaceVector> {
    let shape = SystemShape::new(j.dims.clone())?;
    let subsets = enumerate_subsets(shape.n(), j.k)?;
    if j.components.len() != subsets.len() {
        return Err(parse_err(format!(
            "expected {} components for k={}, got {}",
            subsets.len(),
            j.k,
            j.components.len()
        )));
    }
    let mut slots: Vec<Option<Subspace>> = vec![None; subsets.len()];
    for comp in &j.components {
        let mut particles = comp.subset.clone();
        particles.sort_unstable();
        let pos = subsets
            .iter()
            .position(|s| s.particles() == particles.as_slice())
            .ok_or_else(|| {
                parse_err(format!("subset {:?} is not a k={} subset", comp.subset, j.k))
            })?;
        if slots[pos].is_some() {
            return Err(parse_err(format!("subset {:?} appears twice", comp.subset)));
        }
        let local_dims: Vec<usize> = particles.iter().map(|&p| shape.dims()[p]).collect();
        let vectors: Vec<CVec> = comp
            .vectors
            .iter()
            .map(|v| vector_from_json(v, &local_dims))
            .collect::<Result<_>>()?;
        if vectors.is_empty() {
            return Err(parse_err(format!(
                "component for subset {:?} has no vectors",
                comp.subset
            )));
        }
        slots[pos] = Some(Subspace::from_spanning_vectors(&vectors, tol)?);
    }
    let components: Vec<Subspace> = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| parse_err(format!("missing component for subset {:?}", subsets[i].particles())))
        })
        .collect::<Result<_>>()?;
    ReducedSpaceVector::new(shape, j.k, components)
}

pub fn rsv_to_json(v: &ReducedSpaceVector) -> RsvJson {
    RsvJson {
        dims: v.shape().dims().to_vec(),
        k: v.k(),
        components: v
            .subsets()
            .iter()
            .zip(v.components())
            .map(|(subset, comp)| RsvComponentJson {
                subset: subset.particles().to_vec(),
                vectors: comp
                    .basis()
                    .columns()
                    .into_iter()
                    .map(|c| vector_to_json(&c.to_owned()))
                    .collect(),
            })
            .collect(),
    }
}

/// Resolved Hamiltonian input: terms as explicit matrices plus the
/// parsed shape and locality; feeds both the frustration check and
/// direct kernel assembly.
#[derive(Debug, Clone)]
pub struct HamiltonianInput {
    pub shape: SystemShape,
    pub k: usize,
    pub terms: Vec<(SubsetIndex, HamTerm)>,
}

#[derive(Debug, Clone)]
pub enum HamTerm {
    Kernel(Subspace),
    Matrix(CMat),
}

pub fn hamiltonian_from_json(j: &HamiltonianJson, tol: f64) -> Result<HamiltonianInput> {
    let shape = SystemShape::new(j.dims.clone())?;
    if j.terms.is_empty() {
        return Err(parse_err("hamiltonian needs at least one term"));
    }
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let mut particles = t.subset.clone();
        particles.sort_unstable();
        if particles.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_err(format!("subset {:?} repeats a particle", t.subset)));
        }
        if particles.iter().any(|&p| p >= shape.n()) {
            return Err(parse_err(format!(
                "subset {:?} exceeds the {}-particle system",
                t.subset,
                shape.n()
            )));
        }
        if particles.len() > j.k {
            return Err(parse_err(format!(
                "subset {:?} is larger than k={}",
                t.subset, j.k
            )));
        }
        let subset = SubsetIndex::new(shape.n(), particles.clone())?;
        let local_dims: Vec<usize> = particles.iter().map(|&p| shape.dims()[p]).collect();
        let local_dim: usize = local_dims.iter().product();
        let term = match (&t.kernel_vectors, &t.matrix) {
            (Some(vecs), None) => {
                if vecs.is_empty() {
                    return Err(parse_err(format!(
                        "kernel for subset {:?} has no vectors",
                        t.subset
                    )));
                }
                let parsed: Vec<CVec> = vecs
                    .iter()
                    .map(|v| vector_from_json(v, &local_dims))
                    .collect::<Result<_>>()?;
                HamTerm::Kernel(Subspace::from_spanning_vectors(&parsed, tol)?)
            }
            (None, Some(rows)) => {
                if rows.len() != local_dim || rows.iter().any(|r| r.len() != local_dim) {
                    return Err(parse_err(format!(
                        "matrix for subset {:?} is not {local_dim}x{local_dim}",
                        t.subset
                    )));
                }
                let mut m = CMat::zeros((local_dim, local_dim));
                for (i, row) in rows.iter().enumerate() {
                    for (jc, &(re, im)) in row.iter().enumerate() {
                        m[(i, jc)] = C64::new(re, im);
                    }
                }
                HamTerm::Matrix(m)
            }
            (Some(_), Some(_)) => {
                return Err(parse_err(format!(
                    "term on subset {:?} gives both kernel_vectors and matrix",
                    t.subset
                )))
            }
            (None, None) => {
                return Err(parse_err(format!(
                    "term on subset {:?} gives neither kernel_vectors nor matrix",
                    t.subset
                )))
            }
        };
        terms.push((subset, term));
    }
    Ok(HamiltonianInput {
        shape,
        k: j.k,
        terms,
    })
}

impl HamiltonianInput {
    /// Every term as a Hermitian matrix; kernels become projectors onto
    /// their orthogonal complements.
    pub fn matrix_terms(&self) -> Vec<(SubsetIndex, CMat)> {
        self.terms
            .iter()
            .map(|(subset, term)| {
                let m = match term {
                    HamTerm::Kernel(kernel) => {
                        CMat::eye(kernel.ambient_dim()) - kernel.projector()
                    }
                    HamTerm::Matrix(m) => m.clone(),
                };
                (subset.clone(), m)
            })
            .collect()
    }

    /// Direct kernel assembly at locality k: matrix terms contribute
    /// their ground eigenspaces, smaller subsets ride inside the first
    /// covering k-subset, omitted subsets stay full, duplicates
    /// intersect.
    pub fn to_local_hamiltonian(&self) -> Result<LocalHamiltonian> {
        let subsets = enumerate_subsets(self.shape.n(), self.k)?;
        let mut kernels: Vec<Subspace> = subsets
            .iter()
            .map(|s| Subspace::full(self.shape.dim_of(s.particles())))
            .collect();
        for (subset, term) in &self.terms {
            let kernel = match term {
                HamTerm::Kernel(kernel) => kernel.clone(),
                HamTerm::Matrix(m) => term_kernel(m)?,
            };
            let host = subsets
                .iter()
                .position(|s| subset.particles().iter().all(|p| s.particles().contains(p)))
                .expect("subset size validated against k");
            let lifted = if subset.particles().len() == self.k {
                kernel
            } else {
                lift_into(&self.shape, &kernel, subset, &subsets[host])?
            };
            let combined = kernels[host].intersect(&lifted)?;
            if combined.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "terms on subset {:?} leave a zero kernel",
                    subsets[host].particles()
                )));
            }
            kernels[host] = combined;
        }
        LocalHamiltonian::new(self.shape.clone(), self.k, kernels)
    }
}

fn lift_into(
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

pub fn hamiltonian_to_json(h: &LocalHamiltonian) -> HamiltonianJson {
    HamiltonianJson {
        dims: h.shape().dims().to_vec(),
        k: h.k(),
        terms: h
            .subsets()
            .iter()
            .zip(h.kernels())
            .map(|(subset, kernel)| HamTermJson {
                subset: subset.particles().to_vec(),
                kernel_vectors: Some(
                    kernel
                        .basis()
                        .columns()
                        .into_iter()
                        .map(|c| vector_to_json(&c.to_owned()))
                        .collect(),
                ),
                matrix: None,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Vector { value: RsvJson },
    VectorPair { first: RsvJson, second: RsvJson },
    Space { value: SubspaceJson },
    SpacePair { first: SubspaceJson, second: SubspaceJson },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub samples_used: usize,
    pub seed: u64,
}

pub fn status_string(status: VerdictStatus) -> &'static str {
    match status {
        VerdictStatus::CertifiedYes => "certified_yes",
        VerdictStatus::No => "no",
        VerdictStatus::Unknown => "unknown",
    }
}

pub fn verdict_to_json(v: &AnalysisVerdict, shape: &SystemShape) -> VerdictJson {
    let witness = v.witness.as_ref().map(|w| match w {
        Witness::Vector(r) => WitnessJson::Vector {
            value: rsv_to_json(r),
        },
        Witness::VectorPair(a, b) => WitnessJson::VectorPair {
            first: rsv_to_json(a),
            second: rsv_to_json(b),
        },
        Witness::Space(s) => WitnessJson::Space {
            value: subspace_to_json(shape, s),
        },
        Witness::SpacePair(a, b) => WitnessJson::SpacePair {
            first: subspace_to_json(shape, a),
            second: subspace_to_json(shape, b),
        },
    });
    VerdictJson {
        status: status_string(v.status).to_string(),
        rule: v.rule.clone(),
        witness,
        samples_used: v.samples_used,
        seed: v.seed,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JoinPrimePairJson {
    pub w1: RsvJson,
    pub w2: RsvJson,
    pub construction: String,
}

pub fn jp_pair_to_json(p: &JoinPrimePair) -> JoinPrimePairJson {
    JoinPrimePairJson {
        w1: rsv_to_json(&p.w1),
        w2: rsv_to_json(&p.w2),
        construction: p.construction.clone(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionPartJson {
    pub element: RsvJson,
    pub verdict: VerdictJson,
}

pub fn decomposition_to_json(
    parts: &[DecompositionPart],
    shape: &SystemShape,
) -> Vec<DecompositionPartJson> {
    parts
        .iter()
        .map(|p| DecompositionPartJson {
            element: rsv_to_json(&p.element),
            verdict: verdict_to_json(&p.verdict, shape),
        })
        .collect()
}
