//! Lotteries, marginals and expected utilities.

mod common;

use fairlot_core::rational::{rat, zero};
use fairlot_core::rng::Sampler;
use fairlot_core::{Error, IntegralAllocation, Lottery, Rational};

fn random_lottery(s: &mut Sampler, n: usize, m: usize) -> Lottery {
    let k = 1 + s.below(5);
    let weights: Vec<i64> = (0..k).map(|_| 1 + s.below(9) as i64).collect();
    let total: i64 = weights.iter().sum();
    Lottery::new(
        weights
            .iter()
            .map(|&w| (rat(w, total), common::allocation(s, n, m)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn expected_value_is_linear() {
    let mut s = Sampler::new(81);
    for _ in 0..100 {
        let inst = common::any_goods(&mut s, 3, 5, 9);
        let (n, m) = (inst.agents(), inst.items());
        let l = random_lottery(&mut s, n, m);
        let x = l.marginal();
        for i in 0..n {
            for h in 0..n {
                let direct = l
                    .support()
                    .iter()
                    .fold(zero(), |acc, (w, a)| acc + w * inst.set_value(i, &a.bundle(h)));
                let through: Rational = (0..m).fold(zero(), |acc, j| acc + inst.value(i, j) * x.get(h, j));
                assert_eq!(l.expected_value(&inst, i, h), direct);
                assert_eq!(direct, through);
            }
        }
    }
}

#[test]
fn sorting_and_merging_keep_the_marginal() {
    let mut s = Sampler::new(82);
    for _ in 0..100 {
        let (n, m) = (1 + s.below(3), 1 + s.below(4));
        let l = random_lottery(&mut s, n, m);
        let sorted = l.sorted();
        assert_eq!(sorted.marginal(), l.marginal());
        assert!(sorted.support().windows(2).all(|w| w[0].1 < w[1].1));
        assert!(l.marginal().is_complete());
    }
    let a = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
    let b = IntegralAllocation::from_bundles(2, &[vec![1], vec![0]]).unwrap();
    let l = Lottery::new(vec![(rat(1, 4), a.clone()), (rat(1, 2), b), (rat(1, 4), a)]).unwrap();
    assert_eq!(l.len(), 2);
    assert_eq!(l.support()[0].0, rat(1, 2));
}

#[test]
fn invalid_lotteries_are_rejected() {
    let a = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
    assert!(matches!(Lottery::new(vec![]), Err(Error::InvalidLottery(_))));
    assert!(matches!(
        Lottery::new(vec![(rat(1, 2), a.clone())]),
        Err(Error::InvalidLottery(_))
    ));
    assert!(matches!(
        Lottery::new(vec![(rat(3, 2), a.clone()), (rat(-1, 2), a.clone())]),
        Err(Error::InvalidLottery(_))
    ));
    let wide = IntegralAllocation::from_bundles(3, &[vec![0], vec![1, 2]]).unwrap();
    assert!(matches!(
        Lottery::new(vec![(rat(1, 2), a), (rat(1, 2), wide)]),
        Err(Error::InvalidLottery(_))
    ));
}
