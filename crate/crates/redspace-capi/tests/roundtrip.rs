//! Exercises the C ABI from Rust: handle lifecycle, status codes, verdicts.

use std::ptr;

use redspace_capi::*;

fn w_data() -> Vec<RsComplex> {
    let a = 1.0 / 3f64.sqrt();
    let mut v = vec![RsComplex { re: 0.0, im: 0.0 }; 8];
    for i in [1, 2, 4] {
        v[i].re = a;
    }
    v
}

fn basis_data(dim: usize, idx: usize) -> Vec<RsComplex> {
    let mut v = vec![RsComplex { re: 0.0, im: 0.0 }; dim];
    v[idx].re = 1.0;
    v
}

unsafe fn subspace(dim: usize, cols: &[Vec<RsComplex>]) -> *mut RsSubspace {
    let flat: Vec<RsComplex> = cols.iter().flatten().copied().collect();
    let mut s = ptr::null_mut();
    let st = rs_subspace_new(dim, cols.len(), flat.as_ptr(), 0.0, &mut s);
    assert_eq!(st, RsStatus::Ok);
    s
}

unsafe fn reduce(shape: *const RsShape, s: *const RsSubspace, k: usize) -> *mut RsRsv {
    let mut v = ptr::null_mut();
    assert_eq!(rs_reduce(shape, s, k, &mut v), RsStatus::Ok);
    v
}

fn last_error() -> String {
    unsafe {
        std::ffi::CStr::from_ptr(rs_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn w_join_preimage_and_dual_ground_space() {
    unsafe {
        let mut shape = ptr::null_mut();
        assert_eq!(rs_shape_qubits(3, &mut shape), RsStatus::Ok);
        let mut dim = 0;
        assert_eq!(rs_shape_total_dim(shape, &mut dim), RsStatus::Ok);
        assert_eq!(dim, 8);

        let w_line = subspace(8, &[w_data()]);
        let top_line = subspace(8, &[basis_data(8, 7)]);
        let vw = reduce(shape, w_line, 2);
        let vt = reduce(shape, top_line, 2);

        let mut count = 0;
        assert_eq!(rs_rsv_component_count(vw, &mut count), RsStatus::Ok);
        assert_eq!(count, 3);

        let mut pre_w = ptr::null_mut();
        assert_eq!(rs_rsv_maximal_preimage(vw, &mut pre_w), RsStatus::Ok);
        let mut rank = 0;
        assert_eq!(rs_subspace_rank(pre_w, &mut rank), RsStatus::Ok);
        assert_eq!(rank, 2);

        let mut joined = ptr::null_mut();
        assert_eq!(rs_rsv_join(vw, vt, &mut joined), RsStatus::Ok);
        let mut member = false;
        assert_eq!(rs_rsv_is_member(joined, &mut member), RsStatus::Ok);
        assert!(member);
        let mut leq = false;
        assert_eq!(rs_rsv_leq(vw, joined, &mut leq), RsStatus::Ok);
        assert!(leq);

        let mut pre_join = ptr::null_mut();
        assert_eq!(rs_rsv_maximal_preimage(joined, &mut pre_join), RsStatus::Ok);
        assert_eq!(rs_subspace_rank(pre_join, &mut rank), RsStatus::Ok);
        assert_eq!(rank, 4);

        let mut ham = ptr::null_mut();
        assert_eq!(rs_ham_from_rsv(joined, &mut ham), RsStatus::Ok);
        let mut ground = ptr::null_mut();
        assert_eq!(rs_ham_ground_space(ham, &mut ground), RsStatus::Ok);
        let mut same = false;
        assert_eq!(rs_subspace_equals(ground, pre_join, &mut same), RsStatus::Ok);
        assert!(same);

        let mut sum = ptr::null_mut();
        assert_eq!(rs_subspace_sum(pre_w, ground, &mut sum), RsStatus::Ok);
        let mut contained = false;
        assert_eq!(rs_subspace_contains(ground, sum, &mut contained), RsStatus::Ok);
        assert!(contained);

        for s in [w_line, top_line, pre_w, pre_join, ground, sum] {
            rs_subspace_free(s);
        }
        for v in [vw, vt, joined] {
            rs_rsv_free(v);
        }
        rs_ham_free(ham);
        rs_shape_free(shape);
    }
}

#[test]
fn atom_refutation_returns_witness_handle() {
    unsafe {
        let mut shape = ptr::null_mut();
        assert_eq!(rs_shape_qubits(3, &mut shape), RsStatus::Ok);
        let w_line = subspace(8, &[w_data()]);
        let v = reduce(shape, w_line, 2);

        let mut verdict = RsVerdict::Unknown;
        let mut used = 0;
        let mut witness = ptr::null_mut();
        assert_eq!(
            rs_rsv_is_atom(v, 200, 0, &mut verdict, &mut used, &mut witness),
            RsStatus::Ok
        );
        assert_eq!(verdict, RsVerdict::No);
        assert!(used > 0);
        assert!(!witness.is_null());

        let zero_line = subspace(8, &[basis_data(8, 0)]);
        let expect = reduce(shape, zero_line, 2);
        let mut same = false;
        assert_eq!(rs_rsv_equals(witness, expect, &mut same), RsStatus::Ok);
        assert!(same);

        let mut basis = vec![RsComplex { re: 0.0, im: 0.0 }; 8 * 2];
        let mut pre = ptr::null_mut();
        assert_eq!(rs_rsv_maximal_preimage(v, &mut pre), RsStatus::Ok);
        assert_eq!(rs_subspace_basis(pre, basis.as_mut_ptr(), basis.len()), RsStatus::Ok);
        let norm0: f64 = (0..8).map(|i| basis[i].re.powi(2) + basis[i].im.powi(2)).sum();
        assert!((norm0 - 1.0).abs() < 1e-12);

        rs_subspace_free(w_line);
        rs_subspace_free(zero_line);
        rs_subspace_free(pre);
        rs_rsv_free(v);
        rs_rsv_free(expect);
        rs_rsv_free(witness);
        rs_shape_free(shape);
    }
}

#[test]
fn ff_check_accepts_and_rejects() {
    unsafe {
        let mut shape = ptr::null_mut();
        assert_eq!(rs_shape_qubits(2, &mut shape), RsStatus::Ok);

        // One projector term: (I - Z0 Z1) / 2, kernel span{|00>, |11>}.
        let zz = |sign: f64| -> Vec<RsComplex> {
            let mut m = vec![RsComplex { re: 0.0, im: 0.0 }; 16];
            for (i, z) in [1.0, -1.0, -1.0, 1.0].into_iter().enumerate() {
                m[5 * i].re = 0.5 - 0.5 * sign * z;
            }
            m
        };
        let lens = [2usize, 2];
        let particles = [0usize, 1, 0, 1];

        let agree: Vec<RsComplex> = [zz(1.0), zz(1.0)].concat();
        let mut ff = false;
        let mut ham = ptr::null_mut();
        assert_eq!(
            rs_ff_check(shape, 2, lens.as_ptr(), particles.as_ptr(), agree.as_ptr(), &mut ff, &mut ham),
            RsStatus::Ok
        );
        assert!(ff);
        assert!(!ham.is_null());
        let mut ground = ptr::null_mut();
        assert_eq!(rs_ham_ground_space(ham, &mut ground), RsStatus::Ok);
        let mut rank = 0;
        assert_eq!(rs_subspace_rank(ground, &mut rank), RsStatus::Ok);
        assert_eq!(rank, 2);

        let clash: Vec<RsComplex> = [zz(1.0), zz(-1.0)].concat();
        let mut ham2 = ptr::null_mut();
        assert_eq!(
            rs_ff_check(shape, 2, lens.as_ptr(), particles.as_ptr(), clash.as_ptr(), &mut ff, &mut ham2),
            RsStatus::Ok
        );
        assert!(!ff);
        assert!(ham2.is_null());

        rs_subspace_free(ground);
        rs_ham_free(ham);
        rs_shape_free(shape);
    }
}

#[test]
fn meet_of_disjoint_kernels_reports_undefined() {
    unsafe {
        let mut shape = ptr::null_mut();
        assert_eq!(rs_shape_qubits(2, &mut shape), RsStatus::Ok);
        let s1 = subspace(4, &[basis_data(4, 0)]);
        let s2 = subspace(4, &[basis_data(4, 3)]);
        let v1 = reduce(shape, s1, 1);
        let v2 = reduce(shape, s2, 1);
        let mut h1 = ptr::null_mut();
        let mut h2 = ptr::null_mut();
        assert_eq!(rs_ham_from_rsv(v1, &mut h1), RsStatus::Ok);
        assert_eq!(rs_ham_from_rsv(v2, &mut h2), RsStatus::Ok);
        let mut met = ptr::null_mut();
        assert_eq!(rs_ham_meet(h1, h2, &mut met), RsStatus::MeetUndefined);
        assert!(!last_error().is_empty());

        rs_subspace_free(s1);
        rs_subspace_free(s2);
        rs_rsv_free(v1);
        rs_rsv_free(v2);
        rs_ham_free(h1);
        rs_ham_free(h2);
        rs_shape_free(shape);
    }
}

#[test]
fn errors_and_null_arguments_map_to_codes() {
    unsafe {
        let mut shape = ptr::null_mut();
        assert_eq!(rs_shape_qubits(3, &mut shape), RsStatus::Ok);
        let line = subspace(8, &[basis_data(8, 0)]);

        let mut v = ptr::null_mut();
        assert_eq!(rs_reduce(shape, line, 0, &mut v), RsStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(rs_reduce(shape, line, 2, ptr::null_mut()), RsStatus::NullPointer);
        assert_eq!(
            rs_shape_qubits(3, ptr::null_mut()),
            RsStatus::NullPointer
        );

        let mut rank = 0;
        assert_eq!(rs_subspace_rank(ptr::null(), &mut rank), RsStatus::NullPointer);

        let mut small = [RsComplex { re: 0.0, im: 0.0 }; 2];
        assert_eq!(
            rs_subspace_basis(line, small.as_mut_ptr(), small.len()),
            RsStatus::InvalidArgument
        );

        let mut bad = ptr::null_mut();
        assert_eq!(
            rs_shape_new([2usize, 0, 2].as_ptr(), 3, &mut bad),
            RsStatus::InvalidArgument
        );

        assert!(!rs_version().is_null());

        rs_subspace_free(line);
        rs_shape_free(shape);
    }
}
