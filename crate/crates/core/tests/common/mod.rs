//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use fairlot_core::rng::Sampler;
use fairlot_core::rational::{rat, zero};
use fairlot_core::{FractionalAllocation, Instance, IntegralAllocation};

/// Goods instance with `n × m` integer values in `0..=max`; columns that
/// come out all zero are redrawn so every good has a positive valuer.
pub fn goods(s: &mut Sampler, n: usize, m: usize, max: i64) -> Instance {
    let mut rows = vec![vec![0i64; m]; n];
    for j in 0..m {
        loop {
            for row in rows.iter_mut() {
                row[j] = s.below(max as usize + 1) as i64;
            }
            if rows.iter().any(|r| r[j] > 0) {
                break;
            }
        }
    }
    Instance::from_ints(&rows).unwrap()
}

/// Goods instance of random shape with `n ∈ 1..=max_n`, `m ∈ 1..=max_m`.
pub fn any_goods(s: &mut Sampler, max_n: usize, max_m: usize, max: i64) -> Instance {
    let n = 1 + s.below(max_n);
    let m = 1 + s.below(max_m);
    goods(s, n, m, max)
}

/// Uniformly random complete integral allocation.
pub fn allocation(s: &mut Sampler, n: usize, m: usize) -> IntegralAllocation {
    IntegralAllocation::from_owners(n, (0..m).map(|_| Some(s.below(n))).collect()).unwrap()
}

/// Like [`any_goods`], but every agent values at least one good. Group
/// fairness is unattainable once an agent values nothing: she can join any
/// group for free and raise its `|S|/|T|` scaling.
pub fn any_valued_goods(s: &mut Sampler, max_n: usize, max_m: usize, max: i64) -> Instance {
    loop {
        let inst = any_goods(s, max_n, max_m, max);
        if (0..inst.agents()).all(|i| !inst.is_degenerate(i)) {
            return inst;
        }
    }
}

/// Complete fractional allocation with entries in multiples of `1/d`.
pub fn fractional(s: &mut Sampler, n: usize, m: usize, d: usize) -> FractionalAllocation {
    let columns: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let mut units = vec![0i64; n];
            for _ in 0..d {
                units[s.below(n)] += 1;
            }
            units
        })
        .collect();
    let rows = (0..n)
        .map(|i| columns.iter().map(|c| rat(c[i], d as i64)).collect())
        .collect();
    FractionalAllocation::new(rows).unwrap()
}

/// Matrix with row and column sums at most one: a random convex
/// combination of partial matchings, scaled by a factor in `(0, 1]`.
pub fn substochastic(s: &mut Sampler, n: usize, m: usize) -> FractionalAllocation {
    let k = 1 + s.below(4);
    let scale = rat(1 + s.below(4) as i64, 4);
    let mut rows = vec![vec![zero(); m]; n];
    for _ in 0..k {
        let mut free: Vec<usize> = (0..m).collect();
        for row in rows.iter_mut() {
            if free.is_empty() || s.below(4) == 0 {
                continue;
            }
            let j = free.swap_remove(s.below(free.len()));
            row[j] += &scale / rat(k as i64, 1);
        }
    }
    FractionalAllocation::new(rows).unwrap()
}
