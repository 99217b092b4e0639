//! Nash welfare solver on random instances.

mod common;

use fairlot_core::mnw::{
    ceei_verify, mnw_deviation_witness, mnw_v, nash_product, replicate, replicate_allocation, solve_mnw, weak_goods,
    DEFAULT_TOL,
};
use fairlot_core::oracle::{all_allocations, nash_argmax};
use fairlot_core::properties::{check, AllocationRef, Property};
use fairlot_core::rational::{int, one, rat, zero};
use fairlot_core::rng::Sampler;
use fairlot_core::{Instance, Kind, Rational};

fn utilities(inst: &Instance, x: &fairlot_core::FractionalAllocation) -> Vec<Rational> {
    (0..inst.agents())
        .map(|i| (0..inst.items()).fold(zero(), |a, j| a + inst.value(i, j) * x.get(i, j)))
        .collect()
}

#[test]
fn solutions_are_exact_equilibria() {
    let mut s = Sampler::new(61);
    for _ in 0..80 {
        let inst = common::any_goods(&mut s, 4, 6, 9);
        let sol = solve_mnw(&inst, DEFAULT_TOL).unwrap();
        assert!(sol.x.is_complete());
        assert_eq!(sol.utilities, utilities(&inst, &sol.x));
        assert!(sol.is_exact(), "slack {} on {:?}", sol.slack, inst.values());
        assert!(ceei_verify(&inst, &sol.x, &sol.slack, Kind::Goods).unwrap().holds);
        assert!(check(&inst, AllocationRef::Fractional(&sol.x), Property::Fpo).unwrap().holds);
    }
}

#[test]
fn beats_every_integral_allocation() {
    let mut s = Sampler::new(62);
    for _ in 0..40 {
        let inst = common::any_valued_goods(&mut s, 3, 6, 7);
        let sol = solve_mnw(&inst, DEFAULT_TOL).unwrap();
        let (_, best) = nash_argmax(&inst).unwrap();
        assert!(sol.nash_product(&inst) >= best);
    }
}

#[test]
fn scaling_an_agent_scales_only_her_utility() {
    let mut s = Sampler::new(63);
    for _ in 0..30 {
        let inst = common::any_valued_goods(&mut s, 3, 5, 6);
        let sol = solve_mnw(&inst, DEFAULT_TOL).unwrap();
        let who = s.below(inst.agents());
        let c = int(1 + s.below(5) as i64);
        let mut rows = inst.values().to_vec();
        for v in rows[who].iter_mut() {
            *v *= &c;
        }
        let scaled = Instance::new(rows).unwrap();
        let again = solve_mnw(&scaled, DEFAULT_TOL).unwrap();
        for i in 0..inst.agents() {
            let expect = if i == who { &sol.utilities[i] * &c } else { sol.utilities[i].clone() };
            assert_eq!(again.utilities[i], expect);
        }
    }
}

#[test]
fn replication_copies_the_utilities() {
    let mut s = Sampler::new(64);
    for _ in 0..20 {
        let inst = common::any_valued_goods(&mut s, 3, 4, 6);
        let n = inst.agents();
        let sol = solve_mnw(&inst, DEFAULT_TOL).unwrap();
        let big = replicate(&inst, 2).unwrap();
        let twice = solve_mnw(&big, DEFAULT_TOL).unwrap();
        for l in 0..2 {
            for i in 0..n {
                assert_eq!(twice.utilities[l * n + i], sol.utilities[i]);
            }
        }
        let copied = replicate_allocation(&sol.x, 2).unwrap();
        assert_eq!(utilities(&big, &copied), twice.utilities);
        assert!(ceei_verify(&big, &copied, &zero(), Kind::Goods).unwrap().holds);
    }
}

#[test]
fn weak_goods_go_to_their_only_valuer() {
    let mut s = Sampler::new(65);
    for _ in 0..40 {
        let inst = common::any_goods(&mut s, 3, 6, 3);
        let x = mnw_v(&inst, DEFAULT_TOL).unwrap();
        assert!(x.is_complete());
        let weak = weak_goods(&inst);
        for &(j, i) in &weak {
            assert!(x.get(i, j) == &one());
        }
        let strong: Vec<usize> = (0..inst.items()).filter(|j| !weak.iter().any(|(w, _)| w == j)).collect();
        if strong.is_empty() {
            continue;
        }
        let reduced = Instance::new(
            inst.values().iter().map(|r| strong.iter().map(|&j| r[j].clone()).collect()).collect(),
        )
        .unwrap();
        let sol = solve_mnw(&reduced, DEFAULT_TOL).unwrap();
        let got: Vec<Rational> = (0..inst.agents())
            .map(|i| strong.iter().fold(zero(), |a, &j| a + inst.value(i, j) * x.get(i, j)))
            .collect();
        assert_eq!(got, sol.utilities);
    }
}

#[test]
fn deviation_witness_for_every_efficient_suboptimal_allocation() {
    let mut s = Sampler::new(66);
    let mut seen = 0;
    for _ in 0..25 {
        let inst = common::any_valued_goods(&mut s, 3, 4, 6);
        let best = solve_mnw(&inst, DEFAULT_TOL).unwrap().nash_product(&inst);
        for a in all_allocations(inst.agents(), inst.items()).unwrap() {
            let x = a.to_fractional();
            if !check(&inst, AllocationRef::Fractional(&x), Property::Fpo).unwrap().holds {
                continue;
            }
            let own: Vec<Rational> = (0..inst.agents()).map(|i| inst.set_value(i, &a.bundle(i))).collect();
            let w = mnw_deviation_witness(&inst, &a, DEFAULT_TOL).unwrap();
            if nash_product(&inst, &own) < best {
                let w = w.expect("efficient suboptimal allocation without a witness");
                assert!(w.holds(&inst, &a), "{w:?}");
                seen += 1;
            } else {
                assert!(w.is_none());
            }
        }
    }
    assert!(seen > 20, "only {seen} allocations exercised");
}

#[test]
fn two_goods_example() {
    let inst = Instance::from_ints(&[[1, 2], [1, 3]]).unwrap();
    let sol = solve_mnw(&inst, DEFAULT_TOL).unwrap();
    assert_eq!(sol.utilities, vec![rat(3, 2), rat(9, 4)]);
}
