//! Exact simplex against grid search and its own certificates.

use fairlot_core::lp::{basic_feasible_point, solve, verify_optimality, LinearProgram, Relation, Status};
use fairlot_core::rational::{int, rat, zero};
use fairlot_core::Rational;
use proptest::prelude::*;

const BOX: i64 = 3;

fn relation(k: u8) -> Relation {
    match k % 3 {
        0 => Relation::Le,
        1 => Relation::Ge,
        _ => Relation::Eq,
    }
}

type Rows = Vec<(Vec<i64>, u8, i64)>;

fn program(objective: &[i64], rows: &Rows, maximize: bool) -> LinearProgram {
    let c: Vec<Rational> = objective.iter().map(|&v| if maximize { int(v) } else { int(-v) }).collect();
    let n = c.len();
    let mut lp = if maximize { LinearProgram::maximize(c) } else { LinearProgram::minimize(c) };
    for (a, rel, b) in rows {
        lp.add(a.iter().map(|&v| int(v)).collect(), relation(*rel), int(*b));
    }
    // keep the region bounded
    for j in 0..n {
        let mut e = vec![zero(); n];
        e[j] = int(1);
        lp.add(e, Relation::Le, int(BOX));
    }
    lp
}

/// Every point of `{0, 1/2, ..., BOX}^n`.
fn grid(n: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                (0..=2 * BOX).map(move |k| {
                    let mut q = p.clone();
                    q.push(rat(k, 2));
                    q
                })
            })
            .collect();
    }
    out
}

fn lp_case() -> impl Strategy<Value = (Vec<i64>, Rows)> {
    (1..=3usize, 0..=3usize).prop_flat_map(|(n, rows)| {
        (
            prop::collection::vec(-4i64..=4, n),
            prop::collection::vec((prop::collection::vec(-3i64..=3, n), 0u8..3, -2i64..=6), rows),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn optimum_is_certified_and_beats_the_grid((c, rows) in lp_case()) {
        let lp = program(&c, &rows, true);
        let sol = solve(&lp);
        let feasible: Vec<Vec<Rational>> = grid(c.len()).into_iter().filter(|x| lp.is_feasible(x)).collect();
        prop_assert_ne!(sol.status, Status::Unbounded);
        if !feasible.is_empty() {
            prop_assert_eq!(sol.status, Status::Optimal);
        }
        if sol.status == Status::Optimal {
            prop_assert!(verify_optimality(&lp, &sol));
            prop_assert!(lp.is_feasible(&sol.values));
            for x in &feasible {
                let v = x.iter().zip(&c).fold(zero(), |a, (x, &c)| a + x * int(c));
                prop_assert!(v <= sol.objective_value);
            }
            // the same problem posed as a minimization
            let min = solve(&program(&c, &rows, false));
            prop_assert_eq!(min.status, Status::Optimal);
            prop_assert_eq!(min.objective_value, -sol.objective_value.clone());
        }
    }

    #[test]
    fn basic_points_have_small_support(
        points in prop::collection::vec(prop::collection::vec(0i64..=1, 4), 1..8),
        weights in prop::collection::vec(1i64..=5, 8),
    ) {
        // Σ_k α_k p^k = target, Σ α_k = 1
        let k = points.len();
        let total: i64 = weights[..k].iter().sum();
        let mut rows: Vec<Vec<Rational>> = (0..4).map(|d| points.iter().map(|p| int(p[d])).collect()).collect();
        rows.push(vec![int(1); k]);
        let target: Vec<Rational> = (0..4)
            .map(|d| (0..k).fold(zero(), |a, q| a + rat(weights[q] * points[q][d], total)))
            .chain([int(1)])
            .collect();
        let sol = basic_feasible_point(&rows, &target);
        prop_assert_eq!(sol.status, Status::Optimal);
        prop_assert!(sol.values.iter().all(|v| *v >= zero()));
        prop_assert!(sol.values.iter().filter(|v| **v != zero()).count() <= rows.len());
        for (row, b) in rows.iter().zip(&target) {
            let got = row.iter().zip(&sol.values).fold(zero(), |a, (r, v)| a + r * v);
            prop_assert_eq!(&got, b);
        }
    }
}

#[test]
fn infeasible_and_unbounded_are_statuses() {
    let mut lp = LinearProgram::maximize(vec![int(1)]);
    lp.add(vec![int(1)], Relation::Ge, int(2));
    lp.add(vec![int(1)], Relation::Le, int(1));
    assert_eq!(solve(&lp).status, Status::Infeasible);
    let mut lp = LinearProgram::maximize(vec![int(1), int(1)]);
    lp.add(vec![int(1), int(-1)], Relation::Le, int(1));
    assert_eq!(solve(&lp).status, Status::Unbounded);
}
