//! Structural analysis of reduced-space tuples: atoms, join
//! irreducibility, join-prime witnesses, and greedy decomposition.
//!
//! Atomhood and irreducibility range over a continuum of subspaces, so
//! there is no complete decision procedure. Verdicts are three-valued:
//! certified yes (by a proved rule), no (with a witness that re-validates
//! through the order operations alone), or unknown after a seeded search
//! budget. Fixed seed means byte-identical outcomes, parallel or not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{embed_permutation, SubsetIndex, SystemShape};
use crate::linalg::{eigh, kron_vec, CMat, CVec, RANK_TOL};
use crate::reduced::ReducedSpaceVector;
use crate::sampling::random_state_in;
use crate::subspace::{tensor_on_subset, Subspace};

const MEMBER_TOL: f64 = 1e-8;
const PRODUCT_ACCEPT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    CertifiedYes,
    No,
    Unknown,
}

/// Counterexample payload attached to a No verdict.
#[derive(Debug, Clone)]
pub enum Witness {
    Vector(ReducedSpaceVector),
    VectorPair(Box<ReducedSpaceVector>, Box<ReducedSpaceVector>),
    Space(Subspace),
    SpacePair(Subspace, Subspace),
}

/// Outcome of a structural check, with enough evidence to audit it:
/// the certification rule on yes, the witness on no, and the consumed
/// budget either way.
#[derive(Debug, Clone)]
pub struct AnalysisVerdict {
    pub status: VerdictStatus,
    pub rule: Option<String>,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub seed: u64,
}

impl AnalysisVerdict {
    fn certified(rule: &str, seed: u64) -> Self {
        AnalysisVerdict {
            status: VerdictStatus::CertifiedYes,
            rule: Some(rule.into()),
            witness: None,
            samples_used: 0,
            seed,
        }
    }

    fn no(witness: Witness, samples_used: usize, seed: u64) -> Self {
        AnalysisVerdict {
            status: VerdictStatus::No,
            rule: None,
            witness: Some(witness),
            samples_used,
            seed,
        }
    }

    fn unknown(samples_used: usize, seed: u64) -> Self {
        AnalysisVerdict {
            status: VerdictStatus::Unknown,
            rule: None,
            witness: None,
            samples_used,
            seed,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == VerdictStatus::CertifiedYes
    }

    pub fn is_no(&self) -> bool {
        self.status == VerdictStatus::No
    }
}

/// Search effort knobs. Structured families are cheap and targeted;
/// random samples extend coverage. Candidates derive from the seed only.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub random_samples: usize,
    pub basis_states: bool,
    pub product_search: bool,
    pub mpi_basis: bool,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            random_samples: 200,
            basis_states: true,
            product_search: true,
            mpi_basis: true,
            seed: 0,
        }
    }
}

impl SearchBudget {
    pub fn new(random_samples: usize, seed: u64) -> Self {
        SearchBudget {
            random_samples,
            seed,
            ..Default::default()
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normalize(mut v: CVec) -> CVec {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.mapv_inplace(|z| z / n);
    }
    v
}

/// Validates the membership precondition and hands back the pre-image,
/// which every search below reuses.
fn checked_preimage(v: &ReducedSpaceVector) -> Result<Subspace> {
    let pre = v.maximal_preimage()?;
    if pre.is_zero() {
        return Err(Error::InvalidArgument(
            "input tuple is not the reduction of any subspace".into(),
        ));
    }
    let back = ReducedSpaceVector::reduce(v.shape(), &pre, v.k())?;
    if !back.equals(v)? {
        return Err(Error::InvalidArgument(
            "input tuple is not the reduction of any subspace".into(),
        ));
    }
    Ok(pre)
}

/// Candidate single states inside `target`, in deterministic order:
/// computational-basis members, basis columns, locally optimized product
/// states, then seeded random states.
pub(crate) fn candidate_states(
    shape: &SystemShape,
    target: &Subspace,
    budget: &SearchBudget,
) -> Vec<CVec> {
    let dim = target.ambient_dim();
    let mut out: Vec<CVec> = Vec::new();
    if budget.basis_states {
        for i in 0..dim {
            let mut e = CVec::zeros(dim);
            e[i] = num_complex::Complex64::new(1.0, 0.0);
            if target.residual(&e) < MEMBER_TOL {
                out.push(e);
            }
        }
    }
    if budget.mpi_basis {
        for col in target.basis().columns() {
            out.push(col.to_owned());
        }
    }
    if budget.product_search && target.rank() < dim {
        for phi in product_states_in(shape, target, 8, budget.seed) {
            out.push(phi);
        }
    }
    for i in 0..budget.random_samples {
        let mut rng = stream_rng(budget.seed, 1_000 + i as u64);
        out.push(random_state_in(target, &mut rng));
    }
    out
}

/// Alternating local optimization of ⟨φ|P|φ⟩ over product states, run
/// from several seeded starts. States that end close enough to `target`
/// are projected into it and returned.
fn product_states_in(
    shape: &SystemShape,
    target: &Subspace,
    starts: usize,
    seed: u64,
) -> Vec<CVec> {
    let p = target.projector();
    let n = shape.n();
    let mut found = Vec::new();
    for start in 0..starts {
        let mut rng = stream_rng(seed, 500 + start as u64);
        let mut factors: Vec<CVec> = shape
            .dims()
            .iter()
            .map(|&d| normalize(CVec::from_shape_fn(d, |_| {
                num_complex::Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })))
            .collect();
        let mut last = -1.0f64;
        for _ in 0..60 {
            for q in 0..n {
                let heff = effective_operator(shape, &p, &factors, q);
                let (vals, vecs) = match eigh(&heff.view()) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                let top = vals.len() - 1;
                factors[q] = vecs.column(top).to_owned();
            }
            let full = assemble_product(&factors);
            let overlap = 1.0 - target.residual(&full).powi(2);
            if (overlap - last).abs() < 1e-13 {
                break;
            }
            last = overlap;
        }
        let full = assemble_product(&factors);
        if target.residual(&full) < PRODUCT_ACCEPT_TOL {
            found.push(normalize(target.project(&full)));
        }
    }
    found
}

/// Contraction of a full-space operator against all factors except
/// particle q; the result acts on particle q alone.
fn effective_operator(
    shape: &SystemShape,
    op: &CMat,
    factors: &[CVec],
    q: usize,
) -> CMat {
    let subset = SubsetIndex::new(shape.n(), vec![q]).expect("single particle");
    let map = embed_permutation(shape, &subset).expect("embed map");
    let comp = subset.complement(shape.n());
    let (d, cdim) = (map.subset_dim(), map.complement_dim());
    // Environment amplitudes, complement indices in big-endian digit order.
    let mut w = vec![num_complex::Complex64::new(1.0, 0.0); cdim];
    for (ci, amp) in w.iter_mut().enumerate() {
        let mut rem = ci;
        for (pos, &particle) in comp.iter().enumerate().rev() {
            let dp = shape.dims()[particle];
            let digit = rem % dp;
            rem /= dp;
            let _ = pos;
            *amp *= factors[particle][digit];
        }
    }
    let mut heff = CMat::zeros((d, d));
    for s1 in 0..d {
        for s2 in 0..d {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for c1 in 0..cdim {
                if w[c1].norm_sqr() == 0.0 {
                    continue;
                }
                for c2 in 0..cdim {
                    acc += w[c1].conj() * op[(map.full_index(s1, c1), map.full_index(s2, c2))] * w[c2];
                }
            }
            heff[(s1, s2)] = acc;
        }
    }
    heff
}

/// Product of per-particle factors as a full-space vector.
fn assemble_product(factors: &[CVec]) -> CVec {
    let mut v = CVec::from_elem(1, num_complex::Complex64::new(1.0, 0.0));
    for f in factors {
        v = kron_vec(&v, f);
    }
    normalize(v)
}

/// Atom check: is anything strictly between the bottom and this tuple?
///
/// Rank-1 pre-image certifies yes. Otherwise single states sampled from
/// the pre-image are reduced and compared; any strictly smaller member
/// refutes atomhood.
pub fn is_atom(v: &ReducedSpaceVector, budget: &SearchBudget) -> Result<AnalysisVerdict> {
    let pre = checked_preimage(v)?;
    if pre.rank() == 1 {
        return Ok(AnalysisVerdict::certified("rank-1 pre-image", budget.seed));
    }
    let candidates = candidate_states(v.shape(), &pre, budget);
    let hit = (0..candidates.len())
        .into_par_iter()
        .find_map_first(|i| {
            let w = ReducedSpaceVector::reduce(v.shape(), &Subspace::line(&candidates[i]), v.k())
                .ok()?;
            match w.lt(v) {
                Ok(true) => Some((i, w)),
                _ => None,
            }
        });
    Ok(match hit {
        Some((i, w)) => AnalysisVerdict::no(Witness::Vector(w), i + 1, budget.seed),
        None => AnalysisVerdict::unknown(candidates.len(), budget.seed),
    })
}

/// Candidate pairs of proper subspaces of the pre-image whose reductions
/// might join to v.
fn candidate_pairs(
    shape: &SystemShape,
    pre: &Subspace,
    budget: &SearchBudget,
) -> Vec<(Subspace, Subspace)> {
    let mut singles: Vec<CVec> = Vec::new();
    let dim = pre.ambient_dim();
    if budget.basis_states {
        for i in 0..dim {
            let mut e = CVec::zeros(dim);
            e[i] = num_complex::Complex64::new(1.0, 0.0);
            if pre.residual(&e) < MEMBER_TOL {
                singles.push(e);
            }
        }
    }
    if budget.mpi_basis {
        for col in pre.basis().columns() {
            singles.push(col.to_owned());
        }
    }
    if budget.product_search && pre.rank() < dim {
        singles.extend(product_states_in(shape, pre, 8, budget.seed));
    }
    let mut pairs = Vec::new();
    for i in 0..singles.len() {
        for j in (i + 1)..singles.len() {
            pairs.push((
                Subspace::line(&singles[i]),
                Subspace::line(&singles[j]),
            ));
        }
    }
    let r = pre.rank();
    for i in 0..budget.random_samples {
        let mut rng = stream_rng(budget.seed, 10_000 + i as u64);
        let ra = rng.gen_range(1..r.max(2));
        let rb = rng.gen_range(1..r.max(2));
        let a = random_subspace_in(pre, ra, &mut rng);
        let b = random_subspace_in(pre, rb, &mut rng);
        pairs.push((a, b));
    }
    pairs
}

fn random_subspace_in(pre: &Subspace, rank: usize, rng: &mut impl Rng) -> Subspace {
    let vecs: Vec<CVec> = (0..rank).map(|_| random_state_in(pre, rng)).collect();
    Subspace::from_spanning_vectors(&vecs, RANK_TOL).unwrap_or_else(|_| Subspace::zero(pre.ambient_dim()))
}

/// Join-irreducibility check: can v be written as a join of two strictly
/// smaller members? Atoms certify yes; a validating pair refutes.
pub fn is_join_irreducible(
    v: &ReducedSpaceVector,
    budget: &SearchBudget,
) -> Result<AnalysisVerdict> {
    let pre = checked_preimage(v)?;
    if pre.rank() == 1 {
        return Ok(AnalysisVerdict::certified(
            "atom (rank-1 pre-image)",
            budget.seed,
        ));
    }
    let pairs = candidate_pairs(v.shape(), &pre, budget);
    let hit = (0..pairs.len()).into_par_iter().find_map_first(|i| {
        let (sa, sb) = &pairs[i];
        if sa.is_zero() || sb.is_zero() {
            return None;
        }
        let a = ReducedSpaceVector::reduce(v.shape(), sa, v.k()).ok()?;
        let b = ReducedSpaceVector::reduce(v.shape(), sb, v.k()).ok()?;
        let strict = a.lt(v).ok()? && b.lt(v).ok()?;
        if !strict {
            return None;
        }
        if a.join(&b).ok()?.equals(v).ok()? {
            Some((i, a, b))
        } else {
            None
        }
    });
    Ok(match hit {
        Some((i, a, b)) => AnalysisVerdict::no(
            Witness::VectorPair(Box::new(a), Box::new(b)),
            i + 1,
            budget.seed,
        ),
        None => AnalysisVerdict::unknown(pairs.len(), budget.seed),
    })
}

/// A constructed pair refuting join primality for one tuple: the input
/// reduction sits below the join but below neither part.
#[derive(Debug, Clone)]
pub struct JoinPrimePair {
    pub w1: ReducedSpaceVector,
    pub w2: ReducedSpaceVector,
    pub construction: String,
}

fn validate_jp(
    v0: &ReducedSpaceVector,
    w1: &ReducedSpaceVector,
    w2: &ReducedSpaceVector,
) -> Result<bool> {
    Ok(v0.leq(&w1.join(w2)?)? && !v0.leq(w1)? && !v0.leq(w2)?)
}

/// Superposition of "all factors as given" and "all factors flipped to an
/// orthogonal state" on one block, product elsewhere.
fn block_superposition(factors: &[CVec], flipped: &[CVec], block: &[usize]) -> CVec {
    let branch_a = assemble_product(factors);
    let mut alt: Vec<CVec> = factors.to_vec();
    for &p in block {
        alt[p] = flipped[p].clone();
    }
    let branch_b = assemble_product(&alt);
    normalize(branch_a + branch_b)
}

/// Constructs two members whose join dominates the reduction of the line
/// through ψ0 while neither member alone does, refuting join-primeness of
/// that reduction. Candidates come from product and block-superposition
/// splittings of ψ0; every returned pair is validated numerically.
pub fn join_prime_witness(
    shape: &SystemShape,
    s: &Subspace,
    k: usize,
) -> Result<JoinPrimePair> {
    if s.rank() != 1 {
        return Err(Error::InvalidArgument(format!(
            "witness construction needs a rank-1 input, got rank {}",
            s.rank()
        )));
    }
    let n = shape.n();
    if k == 0 || k >= n {
        return Err(Error::Unsupported(format!(
            "witness construction needs 1 <= k < n, got k={k}, n={n}"
        )));
    }
    let v0 = ReducedSpaceVector::reduce(shape, s, k)?;
    let singles = ReducedSpaceVector::reduce(shape, s, 1)?;
    let product = singles.components().iter().all(|c| c.rank() == 1);

    if product {
        if n < 3 {
            return Err(Error::Unsupported(
                "product construction needs at least three particles".into(),
            ));
        }
        let factors: Vec<CVec> = singles
            .components()
            .iter()
            .map(|c| c.basis().column(0).to_owned())
            .collect();
        let flipped: Vec<CVec> = singles
            .components()
            .iter()
            .map(|c| c.complement().basis().column(0).to_owned())
            .collect();
        // Entangled-block placements, tried in order: the two-particle
        // blocks at the ends, then blocks of size k at the ends, then a
        // sweep of disjoint adjacent pairs.
        let mut placements: Vec<(Vec<usize>, Vec<usize>, String)> = vec![(
            vec![0, 1],
            vec![n - 2, n - 1],
            "entangled pairs at (0,1) and (n-2,n-1)".into(),
        )];
        if k != 2 && k + 1 <= n {
            placements.push((
                (0..k).collect(),
                (n - k..n).collect(),
                format!("correlated blocks of size {k} at the ends"),
            ));
        }
        for i in 0..n.saturating_sub(1) {
            for j in (i + 2)..n.saturating_sub(1) {
                placements.push((
                    vec![i, i + 1],
                    vec![j, j + 1],
                    format!("entangled pairs at ({i},{}) and ({j},{})", i + 1, j + 1),
                ));
            }
        }
        for (block1, block2, label) in placements {
            let psi1 = block_superposition(&factors, &flipped, &block1);
            let psi2 = block_superposition(&factors, &flipped, &block2);
            let w1 = ReducedSpaceVector::reduce(shape, &Subspace::line(&psi1), k)?;
            let w2 = ReducedSpaceVector::reduce(shape, &Subspace::line(&psi2), k)?;
            if validate_jp(&v0, &w1, &w2)? {
                return Ok(JoinPrimePair {
                    w1,
                    w2,
                    construction: label,
                });
            }
        }
        return Err(Error::SearchExhausted(
            "no block placement validated the product construction".into(),
        ));
    }

    // Entangled input: split the spectrum of one particle's reduced state
    // into two groups and tensor each with the complement's full range.
    let psi = s.basis().column(0).to_owned();
    for alpha in 0..n {
        let subset = SubsetIndex::new(n, vec![alpha])?;
        let map = embed_permutation(shape, &subset)?;
        let (d, cdim) = (map.subset_dim(), map.complement_dim());
        let mut m = CMat::zeros((d, cdim));
        for si in 0..d {
            for ci in 0..cdim {
                m[(si, ci)] = psi[map.full_index(si, ci)];
            }
        }
        let rho = m.dot(&crate::linalg::dagger(&m.view()));
        let (vals, vecs) = eigh(&rho.view())?;
        let top = vals.iter().cloned().fold(0.0, f64::max);
        let kept: Vec<usize> = (0..vals.len())
            .filter(|&i| vals[i] > 1e-12 * top.max(1e-300))
            .collect();
        let r = kept.len();
        if r < 2 {
            continue;
        }
        let comp_range = Subspace::from_columns(&m.t().to_owned(), RANK_TOL)?;
        // Masks over the kept eigenvectors; group a always holds the first.
        for mask in 0..(1u32 << (r - 1)) {
            let mut ga = vec![kept[0]];
            let mut gb = Vec::new();
            for (bit, &idx) in kept.iter().enumerate().skip(1) {
                if mask & (1 << (bit - 1)) != 0 {
                    ga.push(idx);
                } else {
                    gb.push(idx);
                }
            }
            if gb.is_empty() {
                continue;
            }
            let span_of = |group: &[usize]| -> Result<Subspace> {
                let mut basis = CMat::zeros((d, group.len()));
                for (j, &idx) in group.iter().enumerate() {
                    basis.column_mut(j).assign(&vecs.column(idx));
                }
                Subspace::from_columns(&basis, RANK_TOL)
            };
            let sa = tensor_on_subset(&span_of(&ga)?, &comp_range, shape, &subset)?;
            let sb = tensor_on_subset(&span_of(&gb)?, &comp_range, shape, &subset)?;
            let w1 = ReducedSpaceVector::reduce(shape, &sa, k)?;
            let w2 = ReducedSpaceVector::reduce(shape, &sb, k)?;
            if validate_jp(&v0, &w1, &w2)? {
                return Ok(JoinPrimePair {
                    w1,
                    w2,
                    construction: format!(
                        "spectral split at particle {alpha}, {} vs {} eigenvectors",
                        ga.len(),
                        gb.len()
                    ),
                });
            }
        }
    }
    Err(Error::SearchExhausted(
        "no spectral split validated the entangled construction".into(),
    ))
}

/// One element of a greedy decomposition, carrying its own
/// irreducibility verdict.
#[derive(Debug, Clone)]
pub struct DecompositionPart {
    pub element: ReducedSpaceVector,
    pub verdict: AnalysisVerdict,
}

/// Greedy split into join-irreducible parts: recurse on No witnesses,
/// keep certified or unresolved leaves. The join of the output always
/// equals the input; irreducibility of each leaf is best effort.
pub fn decompose_irreducibles(
    v: &ReducedSpaceVector,
    budget: &SearchBudget,
) -> Result<Vec<DecompositionPart>> {
    let mut parts = Vec::new();
    split_into(v, budget, 0, &mut parts)?;
    // Merge duplicate leaves.
    let mut unique: Vec<DecompositionPart> = Vec::new();
    for part in parts {
        let mut seen = false;
        for kept in &unique {
            if kept.element.equals(&part.element)? {
                seen = true;
                break;
            }
        }
        if !seen {
            unique.push(part);
        }
    }
    Ok(unique)
}

fn split_into(
    v: &ReducedSpaceVector,
    budget: &SearchBudget,
    depth: usize,
    out: &mut Vec<DecompositionPart>,
) -> Result<()> {
    // Total component rank strictly drops on every split, so recursion
    // terminates; the cap is a backstop.
    let verdict = is_join_irreducible(v, budget)?;
    if depth < 64 {
        if let Some(Witness::VectorPair(a, b)) = &verdict.witness {
            split_into(a, budget, depth + 1, out)?;
            split_into(b, budget, depth + 1, out)?;
            return Ok(());
        }
    }
    out.push(DecompositionPart {
        element: v.clone(),
        verdict,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket(dim: usize, idx: usize) -> CVec {
        let mut v = CVec::zeros(dim);
        v[idx] = c(1.0, 0.0);
        v
    }

    fn w_state() -> CVec {
        let mut v = CVec::zeros(8);
        let a = c(1.0 / 3f64.sqrt(), 0.0);
        v[1] = a;
        v[2] = a;
        v[4] = a;
        v
    }

    fn reduce_line(shape: &SystemShape, v: &CVec, k: usize) -> ReducedSpaceVector {
        ReducedSpaceVector::reduce(shape, &Subspace::line(v), k).unwrap()
    }

    #[test]
    fn atom_certified_for_basis_state() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = reduce_line(&shape, &ket(8, 1), 2);
        let verdict = is_atom(&v, &SearchBudget::new(16, 0)).unwrap();
        assert!(verdict.is_yes());
        assert_eq!(verdict.rule.as_deref(), Some("rank-1 pre-image"));
    }

    #[test]
    fn atom_refuted_for_w_with_exact_witness() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = reduce_line(&shape, &w_state(), 2);
        let verdict = is_atom(&v, &SearchBudget::new(32, 0)).unwrap();
        assert!(verdict.is_no());
        match verdict.witness.as_ref().unwrap() {
            Witness::Vector(w) => {
                let expect = reduce_line(&shape, &ket(8, 0), 2);
                assert!(w.equals(&expect).unwrap());
            }
            other => panic!("unexpected witness shape {other:?}"),
        }
    }

    #[test]
    fn atom_refuted_for_ghz_span() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::from_spanning_vectors(&[ket(8, 0), ket(8, 7)], RANK_TOL).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        let verdict = is_atom(&v, &SearchBudget::new(32, 0)).unwrap();
        assert!(verdict.is_no());
        match verdict.witness.as_ref().unwrap() {
            Witness::Vector(w) => {
                let expect = reduce_line(&shape, &ket(8, 0), 2);
                assert!(w.equals(&expect).unwrap());
            }
            other => panic!("unexpected witness shape {other:?}"),
        }
    }

    #[test]
    fn atom_rejects_non_member() {
        // First component asks for more than the others allow.
        let shape = SystemShape::qubits(3).unwrap();
        let big = Subspace::from_spanning_vectors(
            &[ket(4, 0), {
                let mut v = CVec::zeros(4);
                v[1] = c(1.0 / 2f64.sqrt(), 0.0);
                v[2] = c(1.0 / 2f64.sqrt(), 0.0);
                v
            }],
            RANK_TOL,
        )
        .unwrap();
        let small = Subspace::line(&ket(4, 0));
        let v = ReducedSpaceVector::new(shape, 2, vec![big, small.clone(), small]).unwrap();
        assert!(matches!(
            is_atom(&v, &SearchBudget::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn irreducible_certified_for_atom() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = reduce_line(&shape, &ket(8, 1), 2);
        let verdict = is_join_irreducible(&v, &SearchBudget::new(16, 0)).unwrap();
        assert!(verdict.is_yes());
    }

    #[test]
    fn irreducible_refuted_for_ghz_span() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::from_spanning_vectors(&[ket(8, 0), ket(8, 7)], RANK_TOL).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        let verdict = is_join_irreducible(&v, &SearchBudget::new(64, 0)).unwrap();
        assert!(verdict.is_no());
        match verdict.witness.as_ref().unwrap() {
            Witness::VectorPair(a, b) => {
                assert!(a.lt(&v).unwrap());
                assert!(b.lt(&v).unwrap());
                assert!(a.join(b).unwrap().equals(&v).unwrap());
                let e0 = reduce_line(&shape, &ket(8, 0), 2);
                let e7 = reduce_line(&shape, &ket(8, 7), 2);
                let matches_either = (a.equals(&e0).unwrap() && b.equals(&e7).unwrap())
                    || (a.equals(&e7).unwrap() && b.equals(&e0).unwrap());
                assert!(matches_either);
            }
            other => panic!("unexpected witness shape {other:?}"),
        }
    }

    #[test]
    fn irreducible_unknown_for_w() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = reduce_line(&shape, &w_state(), 2);
        let verdict = is_join_irreducible(&v, &SearchBudget::new(300, 7)).unwrap();
        assert_eq!(verdict.status, VerdictStatus::Unknown);
        assert!(verdict.witness.is_none());
        assert!(verdict.samples_used >= 300);
    }

    #[test]
    fn verdicts_are_reproducible() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::from_spanning_vectors(&[ket(8, 0), ket(8, 7)], RANK_TOL).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        let b = SearchBudget::new(40, 5);
        let v1 = is_join_irreducible(&v, &b).unwrap();
        let v2 = is_join_irreducible(&v, &b).unwrap();
        assert_eq!(v1.status, v2.status);
        assert_eq!(v1.samples_used, v2.samples_used);
        match (v1.witness.unwrap(), v2.witness.unwrap()) {
            (Witness::VectorPair(a1, b1), Witness::VectorPair(a2, b2)) => {
                assert!(a1.equals(&a2).unwrap());
                assert!(b1.equals(&b2).unwrap());
            }
            _ => panic!("expected pair witnesses"),
        }
    }

    #[test]
    fn jp_witness_product_three_qubits() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::line(&ket(8, 0));
        let pair = join_prime_witness(&shape, &s, 2).unwrap();
        let v0 = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        assert!(v0.leq(&pair.w1.join(&pair.w2).unwrap()).unwrap());
        assert!(!v0.leq(&pair.w1).unwrap());
        assert!(!v0.leq(&pair.w2).unwrap());
        assert!(pair.construction.contains("(0,1)"));
    }

    #[test]
    fn jp_witness_product_four_qubits() {
        let shape = SystemShape::qubits(4).unwrap();
        let s = Subspace::line(&ket(16, 0));
        let pair = join_prime_witness(&shape, &s, 2).unwrap();
        let v0 = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        assert!(validate_jp(&v0, &pair.w1, &pair.w2).unwrap());
    }

    #[test]
    fn jp_witness_product_k3() {
        let shape = SystemShape::qubits(4).unwrap();
        let s = Subspace::line(&ket(16, 0));
        let pair = join_prime_witness(&shape, &s, 3).unwrap();
        let v0 = ReducedSpaceVector::reduce(&shape, &s, 3).unwrap();
        assert!(validate_jp(&v0, &pair.w1, &pair.w2).unwrap());
    }

    #[test]
    fn jp_witness_product_k4_uses_block_fallback() {
        // Pairs at the ends both fit inside one 4-subset of five
        // particles, so the size-4 correlated blocks must take over.
        let shape = SystemShape::qubits(5).unwrap();
        let s = Subspace::line(&ket(32, 0));
        let pair = join_prime_witness(&shape, &s, 4).unwrap();
        let v0 = ReducedSpaceVector::reduce(&shape, &s, 4).unwrap();
        assert!(validate_jp(&v0, &pair.w1, &pair.w2).unwrap());
        assert!(pair.construction.contains("blocks of size 4"));
    }

    #[test]
    fn jp_witness_entangled_w_state() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::line(&w_state());
        let pair = join_prime_witness(&shape, &s, 2).unwrap();
        let v0 = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        assert!(validate_jp(&v0, &pair.w1, &pair.w2).unwrap());
        assert!(pair.construction.contains("spectral split"));
    }

    #[test]
    fn jp_witness_entangled_bell_times_zero() {
        let shape = SystemShape::qubits(3).unwrap();
        let mut v = CVec::zeros(8);
        v[0] = c(1.0 / 2f64.sqrt(), 0.0);
        v[6] = c(1.0 / 2f64.sqrt(), 0.0);
        let s = Subspace::line(&v);
        let pair = join_prime_witness(&shape, &s, 2).unwrap();
        let v0 = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        assert!(validate_jp(&v0, &pair.w1, &pair.w2).unwrap());
        assert!(pair.construction.contains("spectral split"));
    }

    #[test]
    fn jp_witness_rejects_two_particles() {
        let shape = SystemShape::qubits(2).unwrap();
        let s = Subspace::line(&ket(4, 0));
        assert!(matches!(
            join_prime_witness(&shape, &s, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn jp_witness_rejects_full_locality() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::line(&ket(8, 0));
        assert!(matches!(
            join_prime_witness(&shape, &s, 3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn decompose_ghz_span_into_two_atoms() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = Subspace::from_spanning_vectors(&[ket(8, 0), ket(8, 7)], RANK_TOL).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        let parts = decompose_irreducibles(&v, &SearchBudget::new(64, 0)).unwrap();
        assert_eq!(parts.len(), 2);
        let mut joined = parts[0].element.clone();
        for p in &parts[1..] {
            joined = joined.join(&p.element).unwrap();
        }
        assert!(joined.equals(&v).unwrap());
        for p in &parts {
            assert!(p.verdict.is_yes());
        }
    }

    #[test]
    fn decompose_keeps_irreducible_whole() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = reduce_line(&shape, &w_state(), 2);
        let parts = decompose_irreducibles(&v, &SearchBudget::new(100, 3)).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].element.equals(&v).unwrap());
        assert_eq!(parts[0].verdict.status, VerdictStatus::Unknown);
    }

    #[test]
    fn decompose_atom_is_single_certified_part() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = reduce_line(&shape, &ket(8, 5), 2);
        let parts = decompose_irreducibles(&v, &SearchBudget::new(16, 0)).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].verdict.is_yes());
    }

    #[test]
    fn qutrit_tuple_is_certified_atom() {
        let shape = SystemShape::new(vec![3, 3, 3]).unwrap();
        let rt2 = 1.0 / 2f64.sqrt();
        let mk = |entries: &[(usize, f64)]| {
            let mut v = CVec::zeros(9);
            for &(i, a) in entries {
                v[i] = c(a, 0.0);
            }
            v
        };
        let c01 = Subspace::from_spanning_vectors(
            &[mk(&[(0, 1.0), (5, -rt2)]), mk(&[(4, 1.0), (2, -rt2)])],
            RANK_TOL,
        )
        .unwrap();
        let c02 = Subspace::from_spanning_vectors(
            &[mk(&[(0, 1.0)]), mk(&[(1, rt2), (3, rt2)]), mk(&[(4, 1.0)])],
            RANK_TOL,
        )
        .unwrap();
        let c12 = Subspace::from_spanning_vectors(
            &[mk(&[(0, 1.0), (7, -rt2)]), mk(&[(4, 1.0), (6, -rt2)])],
            RANK_TOL,
        )
        .unwrap();
        let v = ReducedSpaceVector::new(shape, 2, vec![c01, c02, c12]).unwrap();
        let verdict = is_atom(&v, &SearchBudget::new(8, 0)).unwrap();
        assert!(verdict.is_yes());
    }
}
