//! Lottery rules on random instances.

mod common;

use fairlot_core::properties::{check, AllocationRef, Property};
use fairlot_core::rng::Sampler;
use fairlot_core::rps::{
    randomized_round_robin, rps, rps_bads, rps_mixed, rps_ordinal, sample_trace, RoundRobinMode, RpsConfig,
};
use fairlot_core::Instance;
use proptest::prelude::*;

fn holds(inst: &Instance, a: AllocationRef<'_>, p: Property) -> bool {
    check(inst, a, p).unwrap().holds
}

#[test]
fn trimmed_support_keeps_the_full_marginal() {
    let mut s = Sampler::new(31);
    let mut trimmed = 0;
    for _ in 0..25 {
        let n = 2 + s.below(2);
        let m = 9 + s.below(3);
        // shared ranking, so every stage splits every branch
        let row: Vec<i64> = (0..m).map(|_| 1 + s.below(20) as i64).collect();
        let inst = Instance::from_ints(&vec![row; n]).unwrap();
        let full = rps(&inst, &RpsConfig::full()).unwrap().lottery().unwrap();
        let poly = rps(&inst, &RpsConfig::poly()).unwrap().lottery().unwrap();
        if full.len() > n * m + 1 {
            trimmed += 1;
        }
        assert!(poly.len() <= n * m + 1);
        assert_eq!(full.marginal(), poly.marginal());
        for (_, a) in poly.support() {
            assert!(full.support().iter().any(|(_, b)| b == a));
            assert!(holds(&inst, AllocationRef::Integral(a), Property::SdEf1));
        }
    }
    println!("{trimmed} of 25 instances trimmed");
    assert!(trimmed > 0, "no instance exercised the trimming step");
}

#[test]
fn trimming_with_perturbed_rankings() {
    let mut s = Sampler::new(32);
    for _ in 0..15 {
        let n = 2 + s.below(2);
        let m = 9 + s.below(2);
        let base: Vec<i64> = (0..m).map(|_| 4 + s.below(20) as i64).collect();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| base.iter().map(|v| v + s.below(4) as i64).collect())
            .collect();
        let inst = Instance::from_ints(&rows).unwrap();
        let full = rps(&inst, &RpsConfig::full()).unwrap().lottery().unwrap();
        let poly = rps(&inst, &RpsConfig::poly()).unwrap().lottery().unwrap();
        assert!(poly.len() <= n * m + 1);
        assert_eq!(full.marginal(), poly.marginal());
    }
}

fn values(max_n: usize, max_m: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n, 1..=max_m).prop_flat_map(move |(n, m)| {
        prop::collection::vec(prop::collection::vec(lo..=hi, m), n)
    })
}

fn goods_instance(mut rows: Vec<Vec<i64>>) -> Instance {
    for j in 0..rows[0].len() {
        if rows.iter().all(|r| r[j] == 0) {
            rows[0][j] = 1;
        }
    }
    Instance::from_ints(&rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_items_beat_everything_left(rows in values(4, 8, 0, 10), seed in any::<u64>()) {
        let inst = goods_instance(rows);
        let trace = sample_trace(&inst.ordinal_prefs(), seed).unwrap();
        let mut taken = vec![false; inst.items()];
        for stage in &trace.stages {
            for g in stage.iter().flatten() {
                taken[*g] = true;
            }
            for (i, got) in stage.iter().enumerate() {
                if let Some(g) = got {
                    for j in (0..inst.items()).filter(|&j| !taken[j]) {
                        prop_assert!(inst.value(i, *g) >= inst.value(i, j));
                    }
                }
            }
        }
        prop_assert!(trace.allocation.is_complete());
        let again = sample_trace(&inst.ordinal_prefs(), seed).unwrap();
        prop_assert_eq!(trace, again);
    }

    #[test]
    fn sampled_allocation_is_in_the_full_support(rows in values(3, 6, 0, 10), seed in any::<u64>()) {
        let inst = goods_instance(rows);
        let full = rps(&inst, &RpsConfig::full()).unwrap().lottery().unwrap();
        let a = rps(&inst, &RpsConfig::sample(seed)).unwrap().sample().unwrap();
        prop_assert!(full.support().iter().any(|(_, b)| *b == a));
    }

    #[test]
    fn bads_guarantees(rows in values(3, 7, -10, 0)) {
        let inst = Instance::from_ints(&rows).unwrap();
        let plain = rps_ordinal(&inst.ordinal_prefs(), &RpsConfig::full()).unwrap().lottery().unwrap();
        prop_assert!(holds(&inst, AllocationRef::Fractional(&plain.marginal()), Property::SdEf));
        for (_, a) in plain.support() {
            prop_assert!(holds(&inst, AllocationRef::Integral(a), Property::Efk(2)));
        }
        let padded = rps_bads(&inst, &RpsConfig::full()).unwrap().lottery().unwrap();
        prop_assert!(holds(&inst, AllocationRef::Fractional(&padded.marginal()), Property::SdEf));
        for (_, a) in padded.support() {
            prop_assert!(holds(&inst, AllocationRef::Integral(a), Property::Efk(1)));
        }
    }

    #[test]
    fn mixed_guarantees(mut rows in values(3, 7, -10, 10)) {
        for j in 0..rows[0].len() {
            if rows.iter().all(|r| r[j] == 0) {
                rows[0][j] = -1;
            }
        }
        let inst = Instance::from_ints(&rows).unwrap();
        let l = rps_mixed(&inst, &RpsConfig::full()).unwrap().lottery().unwrap();
        prop_assert!(holds(&inst, AllocationRef::Fractional(&l.marginal()), Property::SdEf));
        for (_, a) in l.support() {
            prop_assert!(holds(&inst, AllocationRef::Integral(a), Property::WEf1));
        }
    }

    #[test]
    fn round_robin_is_proportional(rows in values(4, 7, 0, 10)) {
        let inst = goods_instance(rows);
        let l = randomized_round_robin(&inst, RoundRobinMode::Exact).unwrap().lottery().unwrap();
        prop_assert!(holds(&inst, AllocationRef::Fractional(&l.marginal()), Property::Prop));
        for (_, a) in l.support() {
            prop_assert!(holds(&inst, AllocationRef::Integral(a), Property::Ef1));
        }
    }
}
