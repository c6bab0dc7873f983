//! Named reference states and the bundled example suites behind the
//! `examples` CLI command.
//!
//! Every fixture pins expected values (component spans, ranks, witnesses)
//! and reports pass/fail with a one-line detail and wall time, so the
//! suites double as an end-to-end self-test of the calculus.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ffham::{is_frustration_free, LocalHamiltonian};
use crate::hilbert::{SubsetIndex, SystemShape};
use crate::linalg::{CMat, CVec, RANK_TOL};
use crate::oracle;
use crate::reduced::ReducedSpaceVector;
use crate::sampling;
use crate::semilattice::{is_atom, is_join_irreducible, SearchBudget, VerdictStatus, Witness};
use crate::subspace::Subspace;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Computational basis ket.
pub fn basis_ket(dim: usize, idx: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[idx] = c(1.0, 0.0);
    v
}

/// Equal superposition (|i⟩ + |j⟩)/√2.
pub fn equal_pair(dim: usize, i: usize, j: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    let a = c(1.0 / 2f64.sqrt(), 0.0);
    v[i] = a;
    v[j] = a;
    v
}

/// n-qubit W state: equal superposition of the single-excitation kets.
pub fn w_state(n: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    let a = c(1.0 / (n as f64).sqrt(), 0.0);
    for i in 0..n {
        v[1 << i] = a;
    }
    v
}

/// Bit-flipped W state: equal superposition of the single-zero kets.
pub fn w_state_flipped(n: usize) -> CVec {
    let full = (1 << n) - 1;
    let mut v = CVec::zeros(1 << n);
    let a = c(1.0 / (n as f64).sqrt(), 0.0);
    for i in 0..n {
        v[full ^ (1 << i)] = a;
    }
    v
}

/// n-qubit GHZ state (|0...0⟩ + |1...1⟩)/√2.
pub fn ghz_state(n: usize) -> CVec {
    equal_pair(1 << n, 0, (1 << n) - 1)
}

/// Two-qubit Bell state (|00⟩ + |11⟩)/√2.
pub fn bell_phi_plus() -> CVec {
    ghz_state(2)
}

/// Three-qutrit pair tuple whose maximal pre-image is a single entangled
/// line, together with the state spanning that line:
/// ψ = (1/√3)[|000⟩ − (1/√2)(|021⟩ + |120⟩) + |111⟩].
pub fn qutrit_line_tuple() -> Result<(SystemShape, ReducedSpaceVector, CVec)> {
    let shape = SystemShape::new(vec![3, 3, 3])?;
    let rt2 = 1.0 / 2f64.sqrt();
    let mk = |pairs: &[(usize, f64)]| {
        let mut v = CVec::zeros(9);
        for &(i, a) in pairs {
            v[i] = c(a, 0.0);
        }
        v
    };
    // Components in lexicographic order {0,1}, {0,2}, {1,2}; two-qutrit
    // kets use index 3·first + second.
    let c01 = Subspace::from_spanning_vectors(
        &[mk(&[(0, 1.0), (5, -rt2)]), mk(&[(4, 1.0), (2, -rt2)])],
        RANK_TOL,
    )?;
    let c02 = Subspace::from_spanning_vectors(
        &[mk(&[(0, 1.0)]), mk(&[(1, rt2), (3, rt2)]), mk(&[(4, 1.0)])],
        RANK_TOL,
    )?;
    let c12 = Subspace::from_spanning_vectors(
        &[mk(&[(0, 1.0), (7, -rt2)]), mk(&[(4, 1.0), (6, -rt2)])],
        RANK_TOL,
    )?;
    let v = ReducedSpaceVector::new(shape.clone(), 2, vec![c01, c02, c12])?;
    let psi = {
        let a = c(1.0 / 3f64.sqrt(), 0.0);
        let b = c(-1.0 / 6f64.sqrt(), 0.0);
        let mut p = CVec::zeros(27);
        p[0] = a;
        p[7] = b;
        p[15] = b;
        p[13] = a;
        p
    };
    Ok((shape, v, psi))
}

/// Three-qubit pair tuple that lies outside the image of reduction: the
/// {0,1} component admits the symmetric pair state while the other two pin
/// |00⟩, so every joint pre-image state collapses to |000⟩.
pub fn non_member_pair_tuple() -> Result<(SystemShape, ReducedSpaceVector)> {
    let shape = SystemShape::qubits(3)?;
    let k00 = Subspace::line(&basis_ket(4, 0));
    let k_sym =
        Subspace::from_spanning_vectors(&[basis_ket(4, 0), equal_pair(4, 1, 2)], RANK_TOL)?;
    let v = ReducedSpaceVector::new(shape.clone(), 2, vec![k_sym, k00.clone(), k00])?;
    Ok((shape, v))
}

/// Toric-code Hamiltonian on the 2×2 periodic lattice: eight qubits, four
/// X-type star projectors and four Z-type plaquette projectors, each
/// supported on four qubits. Returns the shape and the 4-local terms.
pub fn toric_l2_terms() -> Result<(SystemShape, Vec<(SubsetIndex, CMat)>)> {
    let shape = SystemShape::qubits(8)?;
    let stars: [[usize; 4]; 4] = [[0, 1, 4, 6], [0, 1, 5, 7], [2, 3, 4, 6], [2, 3, 5, 7]];
    let plaqs: [[usize; 4]; 4] = [[0, 2, 4, 5], [1, 3, 4, 5], [0, 2, 6, 7], [1, 3, 6, 7]];
    let dim = 16;
    let mut terms = Vec::with_capacity(8);
    for star in stars {
        // (I − X⊗X⊗X⊗X)/2; the X string flips all four bits.
        let mut m = CMat::zeros((dim, dim));
        for i in 0..dim {
            m[[i, i]] = c(0.5, 0.0);
            m[[i, dim - 1 - i]] -= c(0.5, 0.0);
        }
        terms.push((SubsetIndex::new(8, star.to_vec())?, m));
    }
    for plaq in plaqs {
        // (I − Z⊗Z⊗Z⊗Z)/2; the Z string is diagonal with parity signs.
        let mut m = CMat::zeros((dim, dim));
        for i in 0..dim {
            let even = (i as u32).count_ones() % 2 == 0;
            m[[i, i]] = c(if even { 0.0 } else { 1.0 }, 0.0);
        }
        terms.push((SubsetIndex::new(8, plaq.to_vec())?, m));
    }
    Ok((shape, terms))
}

/// Tolerance, seed, and sampling budget threaded through fixture runs.
#[derive(Clone, Copy, Debug)]
pub struct FixtureCtx {
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

impl Default for FixtureCtx {
    fn default() -> Self {
        FixtureCtx {
            tol: 1e-8,
            seed: 0,
            samples: 200,
        }
    }
}

type CheckResult = std::result::Result<String, String>;

/// One self-checking example with pinned expected values.
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    check: fn(&FixtureCtx) -> CheckResult,
}

/// Outcome of one fixture run.
#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl Fixture {
    pub fn run(&self, ctx: &FixtureCtx) -> FixtureReport {
        let start = std::time::Instant::now();
        let out = (self.check)(ctx);
        let millis = start.elapsed().as_millis();
        let (passed, detail) = match out {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        FixtureReport {
            name: self.name,
            passed,
            detail,
            millis,
        }
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fx_pinned_reductions(_ctx: &FixtureCtx) -> CheckResult {
    let shape = SystemShape::qubits(3)?;
    let reduce = |s: &Subspace| ReducedSpaceVector::reduce(&shape, s, 2);
    // |001⟩ → (|00⟩, |01⟩, |01⟩) over the pairs {0,1}, {0,2}, {1,2}.
    let v = reduce(&Subspace::line(&basis_ket(8, 1)))?;
    let e00 = Subspace::line(&basis_ket(4, 0));
    let e01 = Subspace::line(&basis_ket(4, 1));
    ensure(
        v.components()[0].equals(&e00)?
            && v.components()[1].equals(&e01)?
            && v.components()[2].equals(&e01)?,
        "|001⟩ reduction does not match (|00⟩, |01⟩, |01⟩)",
    )?;
    // span{|000⟩, |111⟩} → span{|00⟩, |11⟩} on every pair.
    let ghz_span =
        Subspace::from_spanning_vectors(&[basis_ket(8, 0), basis_ket(8, 7)], RANK_TOL)?;
    let v = reduce(&ghz_span)?;
    let expect =
        Subspace::from_spanning_vectors(&[basis_ket(4, 0), basis_ket(4, 3)], RANK_TOL)?;
    for comp in v.components() {
        ensure(comp.equals(&expect)?, "GHZ-span reduction mismatch")?;
    }
    // W → span{|00⟩, (|01⟩+|10⟩)/√2} on every pair.
    let v = reduce(&Subspace::line(&w_state(3)))?;
    let expect =
        Subspace::from_spanning_vectors(&[basis_ket(4, 0), equal_pair(4, 1, 2)], RANK_TOL)?;
    for comp in v.components() {
        ensure(comp.equals(&expect)?, "W reduction mismatch")?;
    }
    Ok("three pinned two-particle reductions match".into())
}

fn fx_symmetric_join(_ctx: &FixtureCtx) -> CheckResult {
    let shape = SystemShape::qubits(3)?;
    let a = ReducedSpaceVector::reduce(&shape, &Subspace::line(&w_state(3)), 2)?;
    let b = ReducedSpaceVector::reduce(&shape, &Subspace::line(&basis_ket(8, 7)), 2)?;
    let joined = a.join(&b)?;
    let pre = joined.maximal_preimage()?;
    ensure(pre.rank() == 4, format!("join pre-image rank {} != 4", pre.rank()))?;
    let sym = Subspace::from_spanning_vectors(
        &[basis_ket(8, 0), w_state(3), w_state_flipped(3), basis_ket(8, 7)],
        RANK_TOL,
    )?;
    ensure(pre.equals(&sym)?, "join pre-image is not the symmetric subspace")?;
    let sum = a.maximal_preimage()?.sum(&b.maximal_preimage()?)?;
    ensure(sum.rank() == 3, format!("pre-image sum rank {} != 3", sum.rank()))?;
    ensure(
        pre.contains(&sum)? && !sum.contains(&pre)?,
        "join pre-image does not strictly contain the sum of pre-images",
    )?;
    Ok("join pulls back to the rank-4 symmetric space, strictly above the rank-3 sum".into())
}

fn fx_qutrit_line(ctx: &FixtureCtx) -> CheckResult {
    let (_shape, v, psi) = qutrit_line_tuple()?;
    let pre = v.maximal_preimage()?;
    ensure(pre.rank() == 1, format!("pre-image rank {} != 1", pre.rank()))?;
    let overlap = pre
        .basis()
        .column(0)
        .iter()
        .zip(psi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .norm();
    ensure(
        overlap > 1.0 - ctx.tol,
        format!("overlap with pinned state deficient by {:.2e}", 1.0 - overlap),
    )?;
    let verdict = is_atom(&v, &SearchBudget::new(ctx.samples, ctx.seed))?;
    ensure(
        verdict.status == VerdictStatus::CertifiedYes,
        format!("atom verdict {:?} instead of certified yes", verdict.status),
    )?;
    Ok(format!(
        "pre-image is the pinned entangled line (overlap deficit {:.1e}); atom certified",
        1.0 - overlap
    ))
}

fn fx_w_refutations(ctx: &FixtureCtx) -> CheckResult {
    let shape = SystemShape::qubits(3)?;
    let v = ReducedSpaceVector::reduce(&shape, &Subspace::line(&w_state(3)), 2)?;
    let budget = SearchBudget::new(ctx.samples, ctx.seed);
    let atom = is_atom(&v, &budget)?;
    ensure(atom.is_no(), format!("atom verdict {:?} instead of no", atom.status))?;
    let expect = ReducedSpaceVector::reduce(&shape, &Subspace::line(&basis_ket(8, 0)), 2)?;
    match &atom.witness {
        Some(Witness::Vector(w)) => ensure(
            w.equals(&expect)?,
            "atom counterexample is not the |000⟩ reduction",
        )?,
        other => return Err(format!("unexpected atom witness {other:?}")),
    }
    let irr = is_join_irreducible(&v, &budget)?;
    ensure(
        irr.status == VerdictStatus::Unknown && irr.witness.is_none(),
        format!("irreducibility verdict {:?} instead of unknown", irr.status),
    )?;
    Ok(format!(
        "atom refuted by the |000⟩ reduction; no join split in {} candidate pairs",
        irr.samples_used
    ))
}

fn fx_pair_kernel_dual(ctx: &FixtureCtx) -> CheckResult {
    let (shape, v) = non_member_pair_tuple()?;
    ensure(!v.is_member()?, "tuple unexpectedly lies in the reduction image")?;
    let h = LocalHamiltonian::from_rsv(&v)?;
    let ground = h.ground_space()?;
    let e000 = Subspace::line(&basis_ket(8, 0));
    ensure(ground.equals(&e000)?, "dual ground space is not span{|000⟩}")?;
    let back = ReducedSpaceVector::reduce(&shape, &ground, 2)?;
    let e00 = Subspace::line(&basis_ket(4, 0));
    for comp in back.components() {
        ensure(comp.equals(&e00)?, "ground reduction component is not span{|00⟩}")?;
    }
    let (e0, dense_ground) = oracle::brute_ground_dense(&h.assemble_dense()?, 1e-8)?;
    ensure(
        e0.abs() < ctx.tol && dense_ground.equals(&e000)?,
        format!("dense cross-check disagrees (e0 = {e0:.2e})"),
    )?;
    Ok("non-member tuple; its dual Hamiltonian grounds exactly on |000⟩".into())
}

fn fx_w_dual_ground(ctx: &FixtureCtx) -> CheckResult {
    let shape = SystemShape::qubits(3)?;
    let v = ReducedSpaceVector::reduce(&shape, &Subspace::line(&w_state(3)), 2)?;
    let h = LocalHamiltonian::from_rsv(&v)?;
    let ground = h.ground_space()?;
    let expect = Subspace::from_spanning_vectors(&[w_state(3), basis_ket(8, 0)], RANK_TOL)?;
    ensure(ground.rank() == 2, format!("ground rank {} != 2", ground.rank()))?;
    ensure(ground.equals(&expect)?, "ground space is not span{W, |000⟩}")?;
    let (e0, dense_ground) = oracle::brute_ground_dense(&h.assemble_dense()?, 1e-8)?;
    ensure(
        e0.abs() < ctx.tol && dense_ground.equals(&expect)?,
        format!("dense cross-check disagrees (e0 = {e0:.2e})"),
    )?;
    Ok("dual of the W reduction grounds on span{W, |000⟩}".into())
}

fn toric_ground() -> std::result::Result<(SystemShape, LocalHamiltonian, Subspace), String> {
    let (shape, terms) = toric_l2_terms()?;
    let (ff, h) = is_frustration_free(&shape, &terms)?;
    ensure(ff, "toric terms not recognized as frustration-free")?;
    let h = h.ok_or("no Hamiltonian despite nonzero term kernels")?;
    let ground = h.ground_space()?;
    Ok((shape, h, ground))
}

fn fx_toric_ground_space(ctx: &FixtureCtx) -> CheckResult {
    let (shape, _h, ground) = toric_ground()?;
    ensure(ground.rank() == 4, format!("ground rank {} != 4", ground.rank()))?;
    let (_, terms) = toric_l2_terms()?;
    let (e0, dense_ground) = oracle::brute_ground(&shape, &terms, 1e-8)?;
    ensure(
        e0.abs() < ctx.tol,
        format!("dense ground energy {e0:.2e} not at zero"),
    )?;
    ensure(
        dense_ground.rank() == 4 && dense_ground.equals(&ground)?,
        "dense ground space disagrees with the kernel-intersection route",
    )?;
    Ok("frustration-free with a 4-dimensional ground space, confirmed densely".into())
}

fn fx_toric_equal_image(ctx: &FixtureCtx) -> CheckResult {
    let (shape, _h, ground) = toric_ground()?;
    let v_full = ReducedSpaceVector::reduce(&shape, &ground, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let lines = 20;
    for i in 0..lines {
        let psi = sampling::random_state_in(&ground, &mut rng);
        let v = ReducedSpaceVector::reduce(&shape, &Subspace::line(&psi), 4)?;
        ensure(
            v.equals(&v_full)?,
            format!("ground line {i} image differs from the ground-space image"),
        )?;
    }
    Ok(format!(
        "{lines} random ground lines share the ground-space image on every 4-subset"
    ))
}

fn fx_toric_preimage_search(ctx: &FixtureCtx) -> CheckResult {
    let (shape, _h, ground) = toric_ground()?;
    let v_full = ReducedSpaceVector::reduce(&shape, &ground, 4)?;
    let verdict = is_atom(&v_full, &SearchBudget::new(ctx.samples, ctx.seed))?;
    ensure(
        !verdict.is_no(),
        "found a strictly smaller tuple with nonzero pre-image",
    )?;
    Ok(format!(
        "no strictly smaller image found across {} candidates",
        verdict.samples_used
    ))
}

/// The six bundled worked examples with pinned expected values.
pub fn worked_examples() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "pinned-reductions",
            description: "two-particle reductions of |001⟩, span{|000⟩,|111⟩}, and W",
            check: fx_pinned_reductions,
        },
        Fixture {
            name: "symmetric-join-preimage",
            description: "join of the W and |111⟩ reductions pulls back to the symmetric space",
            check: fx_symmetric_join,
        },
        Fixture {
            name: "qutrit-line-preimage",
            description: "three-qutrit tuple with a one-dimensional entangled pre-image",
            check: fx_qutrit_line,
        },
        Fixture {
            name: "w-refutations",
            description: "W reduction: atom refuted with witness, join split not found",
            check: fx_w_refutations,
        },
        Fixture {
            name: "pair-kernel-dual",
            description: "non-member pair tuple whose dual Hamiltonian grounds on |000⟩",
            check: fx_pair_kernel_dual,
        },
        Fixture {
            name: "w-dual-ground",
            description: "dual of the W reduction grounds on span{W, |000⟩}",
            check: fx_w_dual_ground,
        },
    ]
}

/// Toric-code checks on the 2×2 lattice.
pub fn toric_examples() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "toric-ground-space",
            description: "eight-qubit toric code is frustration-free with ground rank 4",
            check: fx_toric_ground_space,
        },
        Fixture {
            name: "toric-equal-image",
            description: "random ground lines share the full ground-space 4-subset image",
            check: fx_toric_equal_image,
        },
        Fixture {
            name: "toric-preimage-search",
            description: "sampling finds no strictly smaller tuple below the ground image",
            check: fx_toric_preimage_search,
        },
    ]
}
