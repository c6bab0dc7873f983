//! Subspace arithmetic over finite-dimensional complex spaces.
//!
//! A subspace is held as an orthonormal basis (an `ambient × r` matrix) and
//! every rank decision funnels through one singular-value threshold, so
//! downstream verdicts (membership, atomhood, frustration-freeness) cannot
//! disagree about what counts as zero.

use ndarray::{concatenate, Array1, ArrayView2, Axis};
use ndarray_linalg::SVD;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{embed_permutation, SubsetIndex, SystemShape};
use crate::linalg::{dagger, fro_norm, orthonormal_range, spectral_norm, CMat, CVec, RANK_TOL};

/// Inclusion tolerance: a ⊆ b iff the residual spectral norm is below this.
pub const CONTAINS_TOL: f64 = 1e-8;
/// Equality tolerance on the Frobenius distance between projectors.
pub const EQUALS_TOL: f64 = 1e-8;
/// Residual threshold for vectors admitted into an intersection.
pub const INTERSECT_TOL: f64 = 1e-8;
/// Orthonormality tolerance accepted by `from_orthonormal_basis`.
const ORTHO_TOL: f64 = 1e-10;

/// A subspace of C^ambient, stored as an orthonormal column basis.
///
/// Rank 0 (the zero space) is representable; operations whose semantics
/// require nonzero spaces reject it explicitly.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Span of the given vectors; rank is decided by `tol` relative to the
    /// largest singular value.
    pub fn from_spanning_vectors(vectors: &[CVec], tol: f64) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidArgument("no spanning vectors given".into()));
        }
        let ambient = vectors[0].len();
        if ambient == 0 {
            return Err(Error::InvalidArgument("vectors must have length ≥ 1".into()));
        }
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::InvalidArgument("spanning vectors differ in length".into()));
        }
        let mut m = CMat::zeros((ambient, vectors.len()));
        for (j, v) in vectors.iter().enumerate() {
            m.column_mut(j).assign(v);
        }
        Self::from_columns(&m, tol)
    }

    /// Span of the columns of `m`.
    pub fn from_columns(m: &CMat, tol: f64) -> Result<Self> {
        Ok(Subspace {
            basis: orthonormal_range(&m.view(), tol)?,
        })
    }

    /// Wraps an already-orthonormal basis, verifying B†B = I.
    pub fn from_orthonormal_basis(basis: CMat) -> Result<Self> {
        let r = basis.ncols();
        if r > basis.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} columns cannot be independent in dimension {}",
                r,
                basis.nrows()
            )));
        }
        let gram = dagger(&basis.view()).dot(&basis);
        let eye = CMat::eye(r);
        if fro_norm(&(&gram - &eye).view()) > ORTHO_TOL * (r.max(1) as f64).sqrt() {
            return Err(Error::InvalidArgument("basis columns are not orthonormal".into()));
        }
        Ok(Subspace { basis })
    }

    /// The zero subspace of C^ambient.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            basis: CMat::zeros((ambient, 0)),
        }
    }

    /// The whole space C^ambient.
    pub fn full(ambient: usize) -> Self {
        Subspace {
            basis: CMat::eye(ambient),
        }
    }

    /// Span of a single vector (normalized); rank 0 if the vector is zero.
    pub fn line(v: &CVec) -> Self {
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-300 {
            return Self::zero(v.len());
        }
        let mut basis = CMat::zeros((v.len(), 1));
        basis.column_mut(0).assign(&(v / C64::new(n, 0.0)));
        Subspace { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Orthonormal basis, one column per dimension.
    pub fn basis(&self) -> ArrayView2<'_, C64> {
        self.basis.view()
    }

    /// Orthogonal projector B·B†.
    pub fn projector(&self) -> CMat {
        self.basis.dot(&dagger(&self.basis.view()))
    }

    /// Orthogonal projection of a vector onto the subspace.
    pub fn project(&self, v: &CVec) -> CVec {
        if self.is_zero() {
            return Array1::zeros(self.ambient_dim());
        }
        let coef = dagger(&self.basis.view()).dot(v);
        self.basis.dot(&coef)
    }

    /// Distance ‖v − P v‖ from a vector to the subspace.
    pub fn residual(&self, v: &CVec) -> f64 {
        let p = self.project(v);
        (v - &p).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::InvalidArgument(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// Subspace sum: span of the union of both bases.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let joint = concatenate(Axis(1), &[self.basis(), other.basis()])
            .expect("ambient dims already checked");
        Subspace::from_columns(&joint, RANK_TOL)
    }

    /// Subspace intersection.
    ///
    /// A vector lies in a ∩ b exactly when it is annihilated by both
    /// complement projectors, i.e. it is a null vector of the stacked
    /// complement bases. Working with the stacked factor instead of the
    /// summed projector P_a⊥ + P_b⊥ resolves the small eigenvalues to
    /// machine precision rather than to its square root.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim()));
        }
        let comps = [self.complement().basis, other.complement().basis];
        Ok(intersect_from_complements(self.ambient_dim(), &comps))
    }

    /// True iff other ⊆ self within `CONTAINS_TOL`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(false);
        }
        // Residual (I − P_self)·B_other without forming the projector.
        let coef = dagger(&self.basis.view()).dot(&other.basis);
        let resid = &other.basis - &self.basis.dot(&coef);
        Ok(spectral_norm(&resid.view()) < CONTAINS_TOL)
    }

    /// True iff both subspaces have the same projector within `EQUALS_TOL`.
    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if self.rank() != other.rank() {
            // tr(P_a − P_b) = r_a − r_b, so distinct ranks force a Frobenius
            // distance of at least 1/√ambient.
            return Ok(false);
        }
        let diff = self.projector() - other.projector();
        Ok(fro_norm(&diff.view()) < EQUALS_TOL)
    }

    /// True iff other ⊆ self strictly.
    pub fn contains_strictly(&self, other: &Subspace) -> Result<bool> {
        Ok(self.contains(other)? && self.rank() > other.rank())
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let r = self.rank();
        if r == 0 {
            return Subspace::full(n);
        }
        if r == n {
            return Subspace::zero(n);
        }
        let (u, _, _) = self
            .basis
            .svd(true, false)
            .expect("SVD of an orthonormal basis");
        let u = u.expect("left singular vectors requested");
        Subspace {
            basis: u.slice_axis(Axis(1), (r..n).into()).to_owned(),
        }
    }

    /// Embeds a subspace living on `subset` into the full space, tensored
    /// with the whole complementary factor.
    ///
    /// The result has rank `r × complement_dim` and its basis columns are
    /// the subset basis vectors placed against every complement ket.
    pub fn tensor_extend(&self, shape: &SystemShape, subset: &SubsetIndex) -> Result<Subspace> {
        let comp_dim = shape.total_dim() / shape.dim_of(subset.particles());
        tensor_on_subset(self, &Subspace::full(comp_dim), shape, subset)
    }
}

/// Tensor product of a subspace on `subset` with a subspace on the
/// complementary particles, embedded into the full space.
pub fn tensor_on_subset(
    sub: &Subspace,
    comp: &Subspace,
    shape: &SystemShape,
    subset: &SubsetIndex,
) -> Result<Subspace> {
    let map = embed_permutation(shape, subset)?;
    if sub.ambient_dim() != map.subset_dim() {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {} does not match subset dimension {}",
            sub.ambient_dim(),
            map.subset_dim()
        )));
    }
    if comp.ambient_dim() != map.complement_dim() {
        return Err(Error::InvalidArgument(format!(
            "complement factor dimension {} does not match {}",
            comp.ambient_dim(),
            map.complement_dim()
        )));
    }
    let n = shape.total_dim();
    let r = sub.rank() * comp.rank();
    let mut basis = CMat::zeros((n, r));
    let mut col = 0;
    for cb in comp.basis().columns() {
        for sb in sub.basis().columns() {
            for (ci, cv) in cb.iter().enumerate() {
                if cv.norm_sqr() == 0.0 {
                    continue;
                }
                for (si, sv) in sb.iter().enumerate() {
                    basis[(map.full_index(si, ci), col)] = sv * cv;
                }
            }
            col += 1;
        }
    }
    // Tensor products of orthonormal families are orthonormal already.
    Ok(Subspace { basis })
}

/// Common null space of a family of constraints, each given as the
/// orthonormal basis of a subspace the result must be orthogonal to.
///
/// Stacks the conjugated bases into one matrix and reads the intersection
/// off its right singular vectors with singular value below
/// `INTERSECT_TOL`. An empty constraint list yields the full space.
pub(crate) fn intersect_from_complements(ambient: usize, complements: &[CMat]) -> Subspace {
    let rows: usize = complements.iter().map(|c| c.ncols()).sum();
    if rows == 0 {
        return Subspace::full(ambient);
    }
    let mut m = CMat::zeros((rows, ambient));
    let mut r0 = 0;
    for c in complements {
        let d = dagger(&c.view());
        m.slice_axis_mut(Axis(0), (r0..r0 + c.ncols()).into()).assign(&d);
        r0 += c.ncols();
    }
    let (_, s, vt) = m.svd(false, true).expect("SVD of constraint stack");
    let vt = vt.expect("right singular vectors requested");
    let kept = s.iter().filter(|&&sv| sv >= INTERSECT_TOL).count();
    let basis = dagger(&vt.view())
        .slice_axis(Axis(1), (kept..ambient).into())
        .to_owned();
    Subspace { basis }
}

/// Intersection of several subspaces of a common ambient space.
pub fn intersect_many(spaces: &[Subspace]) -> Result<Subspace> {
    let first = spaces
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty intersection list".into()))?;
    let ambient = first.ambient_dim();
    for s in spaces {
        if s.ambient_dim() != ambient {
            return Err(Error::InvalidArgument("ambient dimensions differ".into()));
        }
        if s.is_zero() {
            return Ok(Subspace::zero(ambient));
        }
    }
    let comps: Vec<CMat> = spaces.iter().map(|s| s.complement().basis).collect();
    Ok(intersect_from_complements(ambient, &comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket(dim: usize, idx: usize) -> CVec {
        let mut v = CVec::zeros(dim);
        v[idx] = c(1.0, 0.0);
        v
    }

    fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize, rank: usize) -> Subspace {
        let mut m = CMat::zeros((ambient, rank));
        for v in m.iter_mut() {
            *v = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        Subspace::from_columns(&m, RANK_TOL).unwrap()
    }

    #[test]
    fn duplicate_vectors_collapse_to_rank_one() {
        let a = ket(4, 0);
        let mut b = ket(4, 0);
        b[3] = c(1e-15, 0.0);
        let s = Subspace::from_spanning_vectors(&[a, b], RANK_TOL).unwrap();
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn orthogonal_pair_spans_rank_two() {
        let inv = 1.0 / 2f64.sqrt();
        let mut p = CVec::zeros(4);
        p[1] = c(inv, 0.0);
        p[2] = c(inv, 0.0);
        let mut m = CVec::zeros(4);
        m[1] = c(inv, 0.0);
        m[2] = c(-inv, 0.0);
        let s = Subspace::from_spanning_vectors(&[p, m], RANK_TOL).unwrap();
        assert_eq!(s.rank(), 2);
        let expect = Subspace::from_spanning_vectors(&[ket(4, 1), ket(4, 2)], RANK_TOL).unwrap();
        assert!(s.equals(&expect).unwrap());
    }

    #[test]
    fn w_and_000_span_rank_two() {
        let w = {
            let mut v = CVec::zeros(8);
            let a = c(1.0 / 3f64.sqrt(), 0.0);
            v[1] = a;
            v[2] = a;
            v[4] = a;
            v
        };
        let s = Subspace::from_spanning_vectors(&[ket(8, 0), w], RANK_TOL).unwrap();
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn all_zero_vectors_give_rank_zero() {
        let s = Subspace::from_spanning_vectors(&[CVec::zeros(3)], RANK_TOL).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn empty_vector_list_rejected() {
        assert!(Subspace::from_spanning_vectors(&[], RANK_TOL).is_err());
    }

    #[test]
    fn sum_of_disjoint_lines() {
        let a = Subspace::line(&ket(4, 0));
        let b = Subspace::line(&ket(4, 3));
        let s = a.sum(&b).unwrap();
        assert_eq!(s.rank(), 2);
        let expect = Subspace::from_spanning_vectors(&[ket(4, 0), ket(4, 3)], RANK_TOL).unwrap();
        assert!(s.equals(&expect).unwrap());
    }

    #[test]
    fn sum_is_idempotent_and_absorbs_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_subspace(&mut rng, 6, 3);
        assert!(a.sum(&a).unwrap().equals(&a).unwrap());
        assert!(a.sum(&Subspace::zero(6)).unwrap().equals(&a).unwrap());
    }

    #[test]
    fn intersection_picks_common_line() {
        let span_00_11 =
            Subspace::from_spanning_vectors(&[ket(4, 0), ket(4, 3)], RANK_TOL).unwrap();
        let span_00_01 =
            Subspace::from_spanning_vectors(&[ket(4, 0), ket(4, 1)], RANK_TOL).unwrap();
        let i = span_00_11.intersect(&span_00_01).unwrap();
        assert_eq!(i.rank(), 1);
        assert!(i.equals(&Subspace::line(&ket(4, 0))).unwrap());
    }

    #[test]
    fn intersection_with_self_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_subspace(&mut rng, 7, 4);
        assert!(a.intersect(&a).unwrap().equals(&a).unwrap());
    }

    #[test]
    fn containment_examples() {
        let big = Subspace::from_spanning_vectors(&[ket(4, 0), ket(4, 3)], RANK_TOL).unwrap();
        assert!(big.contains(&Subspace::line(&ket(4, 0))).unwrap());
        assert!(!big.contains(&Subspace::line(&ket(4, 1))).unwrap());
    }

    #[test]
    fn near_miss_containment_stays_false() {
        // span{|00⟩} against span{|00⟩ + ε|11⟩}: the residual is ≈ ε, far
        // above the inclusion tolerance.
        let eps = 1e-3;
        let mut v = ket(4, 0);
        v[3] = c(eps, 0.0);
        let tilted = Subspace::line(&v);
        assert!(!tilted.contains(&Subspace::line(&ket(4, 0))).unwrap());
    }

    #[test]
    fn equals_distinguishes_phase_orthogonal_lines() {
        let inv = 1.0 / 2f64.sqrt();
        let mut plus = CVec::zeros(2);
        plus[0] = c(inv, 0.0);
        plus[1] = c(inv, 0.0);
        let mut minus = CVec::zeros(2);
        minus[0] = c(inv, 0.0);
        minus[1] = c(-inv, 0.0);
        assert!(!Subspace::line(&plus).equals(&Subspace::line(&minus)).unwrap());
        // A global phase does not change the subspace.
        let phased = plus.mapv(|z| z * C64::from_polar(1.0, 0.77));
        assert!(Subspace::line(&plus).equals(&Subspace::line(&phased)).unwrap());
    }

    #[test]
    fn complement_rank_and_involution() {
        let s = Subspace::line(&ket(4, 0));
        let comp = s.complement();
        assert_eq!(comp.rank(), 3);
        assert!(comp.complement().equals(&s).unwrap());
        // Complement is orthogonal to the original.
        assert!(!comp.contains(&s).unwrap());
    }

    #[test]
    fn tensor_extend_on_leading_pair() {
        let shape = SystemShape::qubits(3).unwrap();
        let sub = SubsetIndex::new(3, vec![0, 1]).unwrap();
        let s = Subspace::line(&ket(4, 0));
        let ext = s.tensor_extend(&shape, &sub).unwrap();
        let expect = Subspace::from_spanning_vectors(&[ket(8, 0), ket(8, 1)], RANK_TOL).unwrap();
        assert!(ext.equals(&expect).unwrap());
    }

    #[test]
    fn tensor_extend_interleaves() {
        let shape = SystemShape::qubits(3).unwrap();
        let sub = SubsetIndex::new(3, vec![0, 2]).unwrap();
        let s = Subspace::line(&ket(4, 0));
        let ext = s.tensor_extend(&shape, &sub).unwrap();
        // Freed particle is in the middle: span{|000⟩, |010⟩}.
        let expect = Subspace::from_spanning_vectors(&[ket(8, 0), ket(8, 2)], RANK_TOL).unwrap();
        assert!(ext.equals(&expect).unwrap());
    }

    #[test]
    fn tensor_extend_of_full_factor_is_full() {
        let shape = SystemShape::qubits(3).unwrap();
        let sub = SubsetIndex::new(3, vec![0, 1]).unwrap();
        let ext = Subspace::full(4).tensor_extend(&shape, &sub).unwrap();
        assert_eq!(ext.rank(), 8);
    }

    #[test]
    fn lattice_laws_on_random_subspaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let dim = rng.gen_range(3..8);
            let ra = rng.gen_range(1..dim);
            let rb = rng.gen_range(1..dim);
            let a = random_subspace(&mut rng, dim, ra);
            let b = random_subspace(&mut rng, dim, rb);
            let sum_ab = a.sum(&b).unwrap();
            let sum_ba = b.sum(&a).unwrap();
            assert!(sum_ab.equals(&sum_ba).unwrap());
            assert!(sum_ab.contains(&a).unwrap());
            let cap = a.intersect(&b).unwrap();
            assert!(a.contains(&cap).unwrap());
            assert!(b.contains(&cap).unwrap());
            // Generic position: rank(sum) + rank(cap) = rank(a) + rank(b).
            assert_eq!(sum_ab.rank() + cap.rank(), a.rank() + b.rank());
        }
    }

    #[test]
    fn intersect_many_matches_pairwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = random_subspace(&mut rng, 8, 5);
            let b = random_subspace(&mut rng, 8, 6);
            let d = random_subspace(&mut rng, 8, 7);
            let many = intersect_many(&[a.clone(), b.clone(), d.clone()]).unwrap();
            let pair = a.intersect(&b).unwrap().intersect(&d).unwrap();
            assert!(many.equals(&pair).unwrap());
        }
    }

    #[test]
    fn extend_commutes_with_sum() {
        let shape = SystemShape::new(vec![2, 3, 2]).unwrap();
        let sub = SubsetIndex::new(3, vec![1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_subspace(&mut rng, 6, 2);
        let b = random_subspace(&mut rng, 6, 3);
        let lhs = a.sum(&b).unwrap().tensor_extend(&shape, &sub).unwrap();
        let rhs = a
            .tensor_extend(&shape, &sub)
            .unwrap()
            .sum(&b.tensor_extend(&shape, &sub).unwrap())
            .unwrap();
        assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let a = Subspace::line(&ket(4, 0));
        let b = Subspace::line(&ket(8, 0));
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&b).is_err());
        assert!(a.contains(&b).is_err());
        assert!(a.equals(&b).is_err());
    }
}

