//! The k-particle reduction map and the join-semilattice of its images.
//!
//! Reducing a subspace S means taking the maximally mixed state on S,
//! forming its k-particle reduced density matrices (one per k-subset, in
//! lexicographic order), and keeping the range of each. The resulting
//! tuples are ordered componentwise and closed under componentwise sum,
//! which makes them a join-semilattice. Every tuple has a maximal
//! pre-image: the largest subspace whose reduction equals it.

use crate::error::{Error, Result};
use crate::hilbert::{embed_permutation, enumerate_subsets, SubsetIndex, SystemShape};
use crate::linalg::{CMat, RANK_TOL};
use crate::subspace::{intersect_from_complements, Subspace};

/// The tuple of k-particle reduced subspaces of some state family, one
/// component per k-subset of particles in lexicographic order.
#[derive(Debug, Clone)]
pub struct ReducedSpaceVector {
    shape: SystemShape,
    k: usize,
    components: Vec<Subspace>,
}

impl ReducedSpaceVector {
    /// Assembles a tuple from explicit components, which must appear in
    /// lexicographic subset order with matching ambient dimensions.
    pub fn new(shape: SystemShape, k: usize, components: Vec<Subspace>) -> Result<Self> {
        let subsets = enumerate_subsets(shape.n(), k)?;
        if components.len() != subsets.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                subsets.len(),
                components.len()
            )));
        }
        for (sub, comp) in subsets.iter().zip(&components) {
            let want = shape.dim_of(sub.particles());
            if comp.ambient_dim() != want {
                return Err(Error::InvalidArgument(format!(
                    "component for subset {:?} has ambient {}, subset dimension is {want}",
                    sub.particles(),
                    comp.ambient_dim()
                )));
            }
        }
        Ok(ReducedSpaceVector { shape, k, components })
    }

    /// Reduction of a subspace of the full space onto every k-subset.
    ///
    /// The range of the j-th reduced density matrix equals the column space
    /// of the basis vectors reshaped to (subset) × (complement) blocks, so
    /// no full-space projector is ever formed.
    pub fn reduce(shape: &SystemShape, s: &Subspace, k: usize) -> Result<Self> {
        if s.ambient_dim() != shape.total_dim() {
            return Err(Error::InvalidArgument(format!(
                "subspace lives in dimension {}, shape has {}",
                s.ambient_dim(),
                shape.total_dim()
            )));
        }
        if s.is_zero() {
            return Err(Error::InvalidArgument(
                "cannot reduce the zero subspace".into(),
            ));
        }
        let subsets = enumerate_subsets(shape.n(), k)?;
        let r = s.rank();
        let mut components = Vec::with_capacity(subsets.len());
        for subset in &subsets {
            let map = embed_permutation(shape, subset)?;
            let (d, c) = (map.subset_dim(), map.complement_dim());
            let mut stack = CMat::zeros((d, r * c));
            for (bi, col) in s.basis().columns().into_iter().enumerate() {
                for ci in 0..c {
                    for si in 0..d {
                        stack[(si, bi * c + ci)] = col[map.full_index(si, ci)];
                    }
                }
            }
            components.push(Subspace::from_columns(&stack, RANK_TOL)?);
        }
        Ok(ReducedSpaceVector {
            shape: shape.clone(),
            k,
            components,
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    /// The k-subsets the components correspond to, in order.
    pub fn subsets(&self) -> Vec<SubsetIndex> {
        enumerate_subsets(self.shape.n(), self.k).expect("validated at construction")
    }

    /// True when every component has rank ≥ 1.
    pub fn all_components_nonzero(&self) -> bool {
        self.components.iter().all(|c| !c.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape || self.k != other.k {
            return Err(Error::InvalidArgument(
                "reduced-space vectors have different shape or locality".into(),
            ));
        }
        Ok(())
    }

    /// Componentwise subspace sum, the join of the semilattice.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sum(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedSpaceVector {
            shape: self.shape.clone(),
            k: self.k,
            components,
        })
    }

    /// Componentwise inclusion.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        for (a, b) in self.components.iter().zip(&other.components) {
            if !b.contains(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Strict order: componentwise inclusion with at least one strict drop.
    pub fn lt(&self, other: &Self) -> Result<bool> {
        Ok(self.leq(other)? && !self.equals(other)?)
    }

    /// Componentwise equality.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        for (a, b) in self.components.iter().zip(&other.components) {
            if !a.equals(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The largest subspace of the full space whose reduction is ≤ this
    /// tuple: the intersection of every component tensored with the full
    /// complementary factor. Rank 0 means no nonzero subspace maps into
    /// the tuple.
    pub fn maximal_preimage(&self) -> Result<Subspace> {
        if !self.all_components_nonzero() {
            return Err(Error::InvalidArgument(
                "maximal pre-image needs every component nonzero".into(),
            ));
        }
        let subsets = self.subsets();
        let mut constraints = Vec::new();
        for (subset, comp) in subsets.iter().zip(&self.components) {
            let orth = comp.complement();
            if orth.is_zero() {
                continue;
            }
            let extended = orth.tensor_extend(&self.shape, subset)?;
            constraints.push(extended.basis().to_owned());
        }
        Ok(intersect_from_complements(
            self.shape.total_dim(),
            &constraints,
        ))
    }

    /// Whether some subspace of the full space reduces exactly to this
    /// tuple. The maximal pre-image is the only candidate that needs
    /// checking: every pre-image is contained in it.
    pub fn is_member(&self) -> Result<bool> {
        if !self.all_components_nonzero() {
            return Err(Error::InvalidArgument(
                "membership needs every component nonzero".into(),
            ));
        }
        let pre = self.maximal_preimage()?;
        if pre.is_zero() {
            return Ok(false);
        }
        let back = Self::reduce(&self.shape, &pre, self.k)?;
        back.equals(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;
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

    fn sym_plus(dim: usize, i: usize, j: usize) -> CVec {
        let mut v = CVec::zeros(dim);
        let a = c(1.0 / 2f64.sqrt(), 0.0);
        v[i] = a;
        v[j] = a;
        v
    }

    fn line(v: &CVec) -> Subspace {
        Subspace::line(v)
    }

    fn span(vs: &[CVec]) -> Subspace {
        Subspace::from_spanning_vectors(vs, RANK_TOL).unwrap()
    }

    #[test]
    fn reduce_basis_product_state() {
        // |001⟩ reduces to (span{|00⟩}, span{|01⟩}, span{|01⟩}) over the
        // pairs {0,1}, {0,2}, {1,2}.
        let shape = SystemShape::qubits(3).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &line(&ket(8, 1)), 2).unwrap();
        assert!(v.components()[0].equals(&line(&ket(4, 0))).unwrap());
        assert!(v.components()[1].equals(&line(&ket(4, 1))).unwrap());
        assert!(v.components()[2].equals(&line(&ket(4, 1))).unwrap());
    }

    #[test]
    fn reduce_ghz_span() {
        let shape = SystemShape::qubits(3).unwrap();
        let s = span(&[ket(8, 0), ket(8, 7)]);
        let v = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
        let expect = span(&[ket(4, 0), ket(4, 3)]);
        for comp in v.components() {
            assert!(comp.equals(&expect).unwrap());
        }
    }

    #[test]
    fn reduce_w_state() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &line(&w_state()), 2).unwrap();
        let expect = span(&[ket(4, 0), sym_plus(4, 1, 2)]);
        for comp in v.components() {
            assert!(comp.equals(&expect).unwrap());
        }
    }

    #[test]
    fn join_of_w_and_111_is_fully_symmetric_on_pairs() {
        let shape = SystemShape::qubits(3).unwrap();
        let a = ReducedSpaceVector::reduce(&shape, &line(&w_state()), 2).unwrap();
        let b = ReducedSpaceVector::reduce(&shape, &line(&ket(8, 7)), 2).unwrap();
        let j = a.join(&b).unwrap();
        let expect = span(&[ket(4, 0), sym_plus(4, 1, 2), ket(4, 3)]);
        for comp in j.components() {
            assert!(comp.equals(&expect).unwrap());
        }
    }

    #[test]
    fn join_same_as_reduce_of_spanning_sum() {
        // Reducing span{|000⟩, |111⟩} equals the join of the two lines'
        // reductions.
        let shape = SystemShape::qubits(3).unwrap();
        let a = ReducedSpaceVector::reduce(&shape, &line(&ket(8, 0)), 2).unwrap();
        let b = ReducedSpaceVector::reduce(&shape, &line(&ket(8, 7)), 2).unwrap();
        let joined = a.join(&b).unwrap();
        let direct =
            ReducedSpaceVector::reduce(&shape, &span(&[ket(8, 0), ket(8, 7)]), 2).unwrap();
        assert!(joined.equals(&direct).unwrap());
    }

    #[test]
    fn preimage_of_w_reduction_gains_000() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = ReducedSpaceVector::reduce(&shape, &line(&w_state()), 2).unwrap();
        let pre = v.maximal_preimage().unwrap();
        let expect = span(&[w_state(), ket(8, 0)]);
        assert_eq!(pre.rank(), 2);
        assert!(pre.equals(&expect).unwrap());
    }

    #[test]
    fn preimage_of_symmetric_join() {
        // The join of the W and |111⟩ reductions pulls back to the full
        // 4-dimensional symmetric subspace of three qubits.
        let shape = SystemShape::qubits(3).unwrap();
        let a = ReducedSpaceVector::reduce(&shape, &line(&w_state()), 2).unwrap();
        let b = ReducedSpaceVector::reduce(&shape, &line(&ket(8, 7)), 2).unwrap();
        let j = a.join(&b).unwrap();
        let pre = j.maximal_preimage().unwrap();
        let w_bar = {
            let mut v = CVec::zeros(8);
            let amp = c(1.0 / 3f64.sqrt(), 0.0);
            v[3] = amp;
            v[5] = amp;
            v[6] = amp;
            v
        };
        let sym = span(&[ket(8, 0), w_state(), w_bar, ket(8, 7)]);
        assert_eq!(pre.rank(), 4);
        assert!(pre.equals(&sym).unwrap());
        // Strictly larger than the sum of the individual pre-images.
        let pre_a = a.maximal_preimage().unwrap();
        let pre_b = b.maximal_preimage().unwrap();
        let sum = pre_a.sum(&pre_b).unwrap();
        assert_eq!(sum.rank(), 3);
        assert!(pre.contains(&sum).unwrap());
        assert!(!sum.contains(&pre).unwrap());
    }

    #[test]
    fn qutrit_tuple_pulls_back_to_single_entangled_state() {
        let shape = SystemShape::new(vec![3, 3, 3]).unwrap();
        let rt2 = 1.0 / 2f64.sqrt();
        // Pair components in lexicographic order {0,1}, {0,2}, {1,2};
        // two-qutrit kets use index 3·first + second.
        let c01 = {
            let mut u = CVec::zeros(9);
            u[0] = c(1.0, 0.0);
            u[5] = c(-rt2, 0.0);
            let mut v = CVec::zeros(9);
            v[4] = c(1.0, 0.0);
            v[2] = c(-rt2, 0.0);
            span(&[u, v])
        };
        let c02 = {
            let mut u = CVec::zeros(9);
            u[0] = c(1.0, 0.0);
            let mut v = CVec::zeros(9);
            v[1] = c(rt2, 0.0);
            v[3] = c(rt2, 0.0);
            let mut w = CVec::zeros(9);
            w[4] = c(1.0, 0.0);
            span(&[u, v, w])
        };
        let c12 = {
            let mut u = CVec::zeros(9);
            u[0] = c(1.0, 0.0);
            u[7] = c(-rt2, 0.0);
            let mut v = CVec::zeros(9);
            v[4] = c(1.0, 0.0);
            v[6] = c(-rt2, 0.0);
            span(&[u, v])
        };
        let v = ReducedSpaceVector::new(shape.clone(), 2, vec![c01, c02, c12]).unwrap();
        let pre = v.maximal_preimage().unwrap();
        assert_eq!(pre.rank(), 1);
        // ψ = (1/√3)[|000⟩ − (1/√2)(|021⟩ + |120⟩) + |111⟩]
        let psi = {
            let mut p = CVec::zeros(27);
            let a = c(1.0 / 3f64.sqrt(), 0.0);
            let b = c(-1.0 / 6f64.sqrt(), 0.0);
            p[0] = a;
            p[7] = b; // |021⟩ = 0·9 + 2·3 + 1
            p[15] = b; // |120⟩ = 1·9 + 2·3 + 0
            p[13] = a; // |111⟩
            p
        };
        let overlap = pre
            .basis()
            .column(0)
            .iter()
            .zip(psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .norm();
        assert!(overlap > 1.0 - 1e-8);
        // Round trip: the tuple really is the reduction of its pre-image.
        assert!(v.is_member().unwrap());
    }

    #[test]
    fn order_examples() {
        let shape = SystemShape::qubits(3).unwrap();
        let small = ReducedSpaceVector::reduce(&shape, &line(&ket(8, 0)), 2).unwrap();
        let big = ReducedSpaceVector::reduce(&shape, &line(&w_state()), 2).unwrap();
        assert!(small.leq(&big).unwrap());
        assert!(small.lt(&big).unwrap());
        assert!(!big.leq(&small).unwrap());
        assert!(big.leq(&big).unwrap());
        assert!(!big.lt(&big).unwrap());
    }

    #[test]
    fn join_is_upper_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let shape = SystemShape::qubits(3).unwrap();
        for _ in 0..10 {
            let mut m1 = CMat::zeros((8, 2));
            let mut m2 = CMat::zeros((8, 2));
            for v in m1.iter_mut().chain(m2.iter_mut()) {
                *v = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
            let a = ReducedSpaceVector::reduce(
                &shape,
                &Subspace::from_columns(&m1, RANK_TOL).unwrap(),
                2,
            )
            .unwrap();
            let b = ReducedSpaceVector::reduce(
                &shape,
                &Subspace::from_columns(&m2, RANK_TOL).unwrap(),
                2,
            )
            .unwrap();
            let j = a.join(&b).unwrap();
            assert!(a.leq(&j).unwrap());
            assert!(b.leq(&j).unwrap());
            assert!(j.equals(&j.join(&a).unwrap()).unwrap());
        }
    }

    #[test]
    fn tuple_outside_the_image_set() {
        // (span{|00⟩, Ψ+}, span{|00⟩}, span{|00⟩}) pulls back to the line
        // |000⟩, whose reduction has a rank-1 first component, so nothing
        // reduces to the tuple itself.
        let shape = SystemShape::qubits(3).unwrap();
        let big = span(&[ket(4, 0), sym_plus(4, 1, 2)]);
        let small = line(&ket(4, 0));
        let v =
            ReducedSpaceVector::new(shape, 2, vec![big, small.clone(), small.clone()]).unwrap();
        let pre = v.maximal_preimage().unwrap();
        assert_eq!(pre.rank(), 1);
        assert!(!v.is_member().unwrap());
    }

    #[test]
    fn tuple_with_empty_preimage() {
        let shape = SystemShape::qubits(3).unwrap();
        let v = ReducedSpaceVector::new(
            shape,
            2,
            vec![line(&ket(4, 1)), line(&ket(4, 0)), line(&ket(4, 0))],
        )
        .unwrap();
        let pre = v.maximal_preimage().unwrap();
        assert!(pre.is_zero());
        assert!(!v.is_member().unwrap());
    }

    #[test]
    fn reduction_is_monotone() {
        let shape = SystemShape::qubits(3).unwrap();
        let inner = span(&[ket(8, 0)]);
        let outer = span(&[ket(8, 0), w_state()]);
        let vi = ReducedSpaceVector::reduce(&shape, &inner, 2).unwrap();
        let vo = ReducedSpaceVector::reduce(&shape, &outer, 2).unwrap();
        assert!(vi.leq(&vo).unwrap());
    }

    #[test]
    fn preimage_contains_the_original() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let shape = SystemShape::new(vec![2, 3, 2]).unwrap();
        for _ in 0..10 {
            let rank = rng.gen_range(1..4);
            let mut m = CMat::zeros((12, rank));
            for v in m.iter_mut() {
                *v = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
            let s = Subspace::from_columns(&m, RANK_TOL).unwrap();
            let v = ReducedSpaceVector::reduce(&shape, &s, 2).unwrap();
            let pre = v.maximal_preimage().unwrap();
            assert!(pre.contains(&s).unwrap());
            assert!(v.is_member().unwrap());
        }
    }

    #[test]
    fn mismatched_tuples_rejected() {
        let shape3 = SystemShape::qubits(3).unwrap();
        let shape2 = SystemShape::qubits(2).unwrap();
        let a = ReducedSpaceVector::reduce(&shape3, &line(&ket(8, 0)), 2).unwrap();
        let b = ReducedSpaceVector::reduce(&shape2, &line(&ket(4, 0)), 1).unwrap();
        assert!(a.join(&b).is_err());
        assert!(a.leq(&b).is_err());
    }

    #[test]
    fn zero_input_rejected() {
        let shape = SystemShape::qubits(3).unwrap();
        assert!(ReducedSpaceVector::reduce(&shape, &Subspace::zero(8), 2).is_err());
    }

    #[test]
    fn wrong_component_count_rejected() {
        let shape = SystemShape::qubits(3).unwrap();
        assert!(
            ReducedSpaceVector::new(shape, 2, vec![Subspace::full(4), Subspace::full(4)]).is_err()
        );
    }
}
