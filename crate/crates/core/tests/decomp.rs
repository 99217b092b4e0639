//! Decompositions of random matrices.

mod common;

use fairlot_core::decomp::{
    bihierarchy_decompose, bvn_constraints, bvn_decompose, prefix_constraints, reduce_support, ConstraintSet,
    Bihierarchy,
};
use fairlot_core::rational::{one, rat};
use fairlot_core::rng::Sampler;
use fairlot_core::{Error, FractionalAllocation, IntegralAllocation, Lottery};

fn assert_exact(x: &FractionalAllocation, l: &Lottery, h: &Bihierarchy) {
    assert_eq!(&l.marginal(), x);
    let total = l.support().iter().fold(rat(0, 1), |a, (w, _)| a + w);
    assert_eq!(total, one());
    for (w, a) in l.support() {
        assert!(*w > rat(0, 1));
        assert!(h.admits(a), "part {a:?} breaks a quota");
    }
}

#[test]
fn bvn_on_substochastic_matrices() {
    let mut s = Sampler::new(51);
    for _ in 0..200 {
        let n = 1 + s.below(4);
        let m = 1 + s.below(5);
        let x = common::substochastic(&mut s, n, m);
        let l = bvn_decompose(&x).unwrap();
        assert_exact(&x, &l, &bvn_constraints(&x).unwrap());
        assert!(l.len() <= x.fractional_cells() + 1, "{} parts for {x:?}", l.len());
        for (_, a) in l.support() {
            for i in 0..n {
                let got = rat(a.bundle(i).len() as i64, 1);
                let row = x.row_sum(i);
                assert!(got == row.floor() || got == row.ceil());
            }
        }
    }
}

#[test]
fn prefix_quotas_on_random_allocations() {
    let mut s = Sampler::new(52);
    for _ in 0..150 {
        let n = 1 + s.below(4);
        let m = 1 + s.below(6);
        let inst = common::goods(&mut s, n, m, 9);
        let d = 1 + s.below(6);
        let x = common::fractional(&mut s, n, m, d);
        let h = prefix_constraints(&inst.ordinal_prefs(), &x).unwrap();
        let l = bihierarchy_decompose(&x, &h).unwrap();
        assert_exact(&x, &l, &h);
        assert!(l.len() <= x.fractional_cells() + 1);
    }
}

#[test]
fn reduction_keeps_marginal_and_bounds_support() {
    let mut s = Sampler::new(53);
    for _ in 0..60 {
        let n = 1 + s.below(3);
        let m = 1 + s.below(4);
        let k = 1 + s.below(3 * n * m);
        let parts: Vec<(fairlot_core::Rational, IntegralAllocation)> =
            (0..k).map(|_| (rat(1, k as i64), common::allocation(&mut s, n, m))).collect();
        let l = Lottery::new(parts).unwrap();
        let r = reduce_support(&l);
        assert_eq!(r.marginal(), l.marginal());
        assert!(r.len() <= n * m + 1);
        for (_, a) in r.support() {
            assert!(l.support().iter().any(|(_, b)| b == a));
        }
    }
}

#[test]
fn overlapping_family_is_rejected() {
    let a = ConstraintSet::new(vec![(0, 0), (0, 1)], 0, 1).unwrap();
    let b = ConstraintSet::new(vec![(0, 1), (0, 2)], 0, 1).unwrap();
    assert!(matches!(Bihierarchy::new(vec![a, b], vec![]), Err(Error::NotBihierarchy(_))));
}

#[test]
fn quota_violation_is_reported() {
    let x = FractionalAllocation::new(vec![vec![rat(1, 2), rat(1, 2)]]).unwrap();
    let row = ConstraintSet::new(vec![(0, 0), (0, 1)], 0, 0).unwrap();
    let h = Bihierarchy::new(vec![row], vec![]).unwrap();
    assert!(matches!(
        bihierarchy_decompose(&x, &h),
        Err(Error::QuotaViolated { hierarchy: 1, index: 0 })
    ));
}
