//! Decomposing fractional allocations into lotteries over integral ones.
//!
//! The engine works for any bihierarchy of integer-quota constraints. It
//! repeatedly finds an integral vertex `Y` on the smallest face of the
//! constraint polytope containing the current matrix `X`, then peels off
//! as much of `Y` as possible: `X = λY + (1-λ)X'`. Each peel makes a new
//! constraint tight, so the number of parts is at most the number of
//! fractional cells plus one. Vertices are integral because bihierarchy
//! constraint matrices are totally unimodular.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{FractionalAllocation, IntegralAllocation, Lottery, OrdinalPrefs};
use crate::rational::{int, one, zero, Rational};

/// `lower ≤ Σ_{(i,j) ∈ cells} X_ij ≤ upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    cells: Vec<(usize, usize)>,
    lower: i64,
    upper: i64,
}

impl ConstraintSet {
    pub fn new(mut cells: Vec<(usize, usize)>, lower: i64, upper: i64) -> Result<Self> {
        if lower > upper {
            return Err(Error::NotBihierarchy(format!(
                "quota [{lower}, {upper}] is empty"
            )));
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(ConstraintSet {
            cells,
            lower,
            upper,
        })
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn lower(&self) -> i64 {
        self.lower
    }

    pub fn upper(&self) -> i64 {
        self.upper
    }

    pub fn total(&self, x: &FractionalAllocation) -> Rational {
        self.cells
            .iter()
            .fold(zero(), |acc, &(i, j)| acc + x.get(i, j))
    }

    pub fn admits_total(&self, total: &Rational) -> bool {
        *total >= int(self.lower) && *total <= int(self.upper)
    }

    pub fn satisfied_by(&self, a: &IntegralAllocation) -> bool {
        let count = self.cells.iter().filter(|&&(i, j)| a.holds(i, j)).count() as i64;
        (self.lower..=self.upper).contains(&count)
    }

    /// Nested or disjoint.
    fn laminar_with(&self, other: &ConstraintSet) -> bool {
        let (mut a, mut b, mut common) = (0, 0, 0);
        while a < self.cells.len() && b < other.cells.len() {
            match self.cells[a].cmp(&other.cells[b]) {
                core::cmp::Ordering::Less => a += 1,
                core::cmp::Ordering::Greater => b += 1,
                core::cmp::Ordering::Equal => {
                    common += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
        common == 0 || common == self.cells.len() || common == other.cells.len()
    }
}

/// Two laminar families of constraint sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bihierarchy {
    h1: Vec<ConstraintSet>,
    h2: Vec<ConstraintSet>,
}

impl Bihierarchy {
    /// Checks that each family is laminar and that no cell set is shared
    /// between the two families.
    pub fn new(h1: Vec<ConstraintSet>, h2: Vec<ConstraintSet>) -> Result<Self> {
        for (name, fam) in [("first", &h1), ("second", &h2)] {
            for a in 0..fam.len() {
                for b in a + 1..fam.len() {
                    if !fam[a].laminar_with(&fam[b]) {
                        return Err(Error::NotBihierarchy(format!(
                            "sets {a} and {b} of the {name} family overlap without nesting"
                        )));
                    }
                }
            }
        }
        for (a, s) in h1.iter().enumerate() {
            if let Some(b) = h2.iter().position(|t| t.cells == s.cells) {
                return Err(Error::NotBihierarchy(format!(
                    "set {a} of the first family reappears as set {b} of the second"
                )));
            }
        }
        Ok(Bihierarchy { h1, h2 })
    }

    pub fn h1(&self) -> &[ConstraintSet] {
        &self.h1
    }

    pub fn h2(&self) -> &[ConstraintSet] {
        &self.h2
    }

    fn all(&self) -> impl Iterator<Item = &ConstraintSet> {
        self.h1.iter().chain(&self.h2)
    }

    /// Errors with the first violated quota.
    pub fn check(&self, x: &FractionalAllocation) -> Result<()> {
        let (n, m) = (x.agents(), x.items());
        for (h, fam) in [&self.h1, &self.h2].into_iter().enumerate() {
            for (index, s) in fam.iter().enumerate() {
                if s.cells.iter().any(|&(i, j)| i >= n || j >= m) {
                    return Err(Error::IndexOutOfRange(format!(
                        "set {index} of hierarchy {} names a cell outside {n}×{m}",
                        h + 1
                    )));
                }
                if !s.admits_total(&s.total(x)) {
                    return Err(Error::QuotaViolated {
                        hierarchy: h + 1,
                        index,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn admits(&self, a: &IntegralAllocation) -> bool {
        self.all().all(|s| s.satisfied_by(a))
    }
}

fn floor_i64(q: &Rational) -> i64 {
    num_traits::ToPrimitive::to_i64(&q.floor().to_integer()).expect("quota fits in i64")
}

fn ceil_i64(q: &Rational) -> i64 {
    num_traits::ToPrimitive::to_i64(&q.ceil().to_integer()).expect("quota fits in i64")
}

/// Drops first-family sets whose cells coincide with a second-family set,
/// folding their quotas into it.
fn build(mut h1: Vec<ConstraintSet>, mut h2: Vec<ConstraintSet>) -> Result<Bihierarchy> {
    h1.retain(|s| match h2.iter_mut().find(|t| t.cells == s.cells) {
        Some(t) => {
            t.lower = t.lower.max(s.lower);
            t.upper = t.upper.min(s.upper);
            false
        }
        None => true,
    });
    Bihierarchy::new(h1, h2)
}

fn singletons(n: usize, m: usize) -> Vec<ConstraintSet> {
    (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|c| ConstraintSet {
            cells: vec![c],
            lower: 0,
            upper: 1,
        })
        .collect()
}

fn columns(x: &FractionalAllocation) -> Vec<ConstraintSet> {
    (0..x.items())
        .map(|j| {
            let s = x.column_sum(j);
            ConstraintSet {
                cells: (0..x.agents()).map(|i| (i, j)).collect(),
                lower: floor_i64(&s),
                upper: ceil_i64(&s),
            }
        })
        .collect()
}

/// Singletons and rows in the first family, columns in the second, with
/// floor/ceiling quotas of the current sums.
pub fn bvn_constraints(x: &FractionalAllocation) -> Result<Bihierarchy> {
    let (n, m) = (x.agents(), x.items());
    let mut h1 = singletons(n, m);
    for i in 0..n {
        let s = x.row_sum(i);
        h1.push(ConstraintSet {
            cells: (0..m).map(|j| (i, j)).collect(),
            lower: floor_i64(&s),
            upper: ceil_i64(&s),
        });
    }
    build(h1, columns(x))
}

/// Generalized Birkhoff-von Neumann decomposition of a matrix with row
/// and column sums at most one. Every part gives each agent either the
/// floor or the ceiling of her row sum.
pub fn bvn_decompose(x: &FractionalAllocation) -> Result<Lottery> {
    for i in 0..x.agents() {
        if x.row_sum(i) > one() {
            return Err(Error::InvalidAllocation(format!(
                "row {i} sums to more than one"
            )));
        }
    }
    bihierarchy_decompose(x, &bvn_constraints(x)?)
}

/// Per-agent prefix sets over her ordinal order with floor/ceiling quotas of
/// the prefix masses, plus all singletons, in the first family; columns in
/// the second.
pub fn prefix_constraints(prefs: &OrdinalPrefs, x: &FractionalAllocation) -> Result<Bihierarchy> {
    let (n, m) = (x.agents(), x.items());
    if prefs.agents() != n || prefs.items() != m {
        return Err(Error::Dimension(format!(
            "preferences are {}×{}, allocation is {n}×{m}",
            prefs.agents(),
            prefs.items()
        )));
    }
    let mut h1 = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        let mut q = zero();
        let mut cells = Vec::with_capacity(m);
        for &j in prefs.order(i) {
            q += x.get(i, j);
            cells.push((i, j));
            h1.push(ConstraintSet::new(cells.clone(), floor_i64(&q), ceil_i64(&q))?);
        }
    }
    h1.extend(singletons(n, m));
    build(h1, columns(x))
}

/// Decomposes `x` into integral allocations that each satisfy every quota.
pub fn bihierarchy_decompose(x: &FractionalAllocation, h: &Bihierarchy) -> Result<Lottery> {
    h.check(x)?;
    let (n, m) = (x.agents(), x.items());
    let sets: Vec<Set> = h
        .all()
        .map(|s| Set {
            cells: s.cells.iter().map(|&(i, j)| i * m + j).collect(),
            lower: int(s.lower),
            upper: int(s.upper),
        })
        .collect();
    let mut cur: Vec<Rational> = x.rows().iter().flatten().cloned().collect();
    let mut remaining = one();
    let mut parts: Vec<(Rational, Vec<Rational>)> = Vec::new();
    loop {
        if cur.iter().all(|v| v.is_zero() || v.is_one()) {
            parts.push((remaining, cur));
            break;
        }
        let y = vertex(&cur, &sets)?;
        let lambda = peel_weight(&cur, &y, &sets);
        if lambda.is_one() {
            parts.push((remaining, y));
            break;
        }
        let rest = one() - &lambda;
        for (c, v) in cur.iter_mut().zip(&y) {
            *c = (&*c - &lambda * v) / &rest;
        }
        parts.push((&remaining * &lambda, y));
        remaining *= rest;
    }
    let entries = parts
        .into_iter()
        .map(|(w, y)| {
            let owners = (0..m)
                .map(|j| (0..n).find(|&i| y[i * m + j].is_one()))
                .collect();
            (w, IntegralAllocation::from_owners(n, owners).expect("agents in range"))
        })
        .collect();
    let lottery = Lottery::new(entries)?;
    debug_assert!(lottery.support().iter().all(|(_, a)| h.admits(a)));
    Ok(lottery)
}

struct Set {
    cells: Vec<usize>,
    lower: Rational,
    upper: Rational,
}

fn total(x: &[Rational], cells: &[usize]) -> Rational {
    cells.iter().fold(zero(), |acc, &c| acc + &x[c])
}

fn fractional(v: &Rational) -> bool {
    v.is_positive() && *v < one()
}

/// Walks from `x` inside its minimal face until no fractional cell is left.
fn vertex(x: &[Rational], sets: &[Set]) -> Result<Vec<Rational>> {
    let mut cur = x.to_vec();
    loop {
        let free: Vec<usize> = (0..cur.len()).filter(|&c| fractional(&cur[c])).collect();
        if free.is_empty() {
            return Ok(cur);
        }
        let mut pos = vec![usize::MAX; cur.len()];
        for (k, &c) in free.iter().enumerate() {
            pos[c] = k;
        }
        let sums: Vec<Rational> = sets.iter().map(|s| total(&cur, &s.cells)).collect();
        let touches = |s: &Set| s.cells.iter().any(|&c| pos[c] != usize::MAX);
        let tight: Vec<usize> = (0..sets.len())
            .filter(|&k| {
                (sums[k] == sets[k].lower || sums[k] == sets[k].upper) && touches(&sets[k])
            })
            .collect();
        let mut columns = vec![vec![zero(); tight.len()]; free.len()];
        for (r, &k) in tight.iter().enumerate() {
            for &c in &sets[k].cells {
                if pos[c] != usize::MAX {
                    columns[pos[c]][r] = one();
                }
            }
        }
        let dir = if tight.is_empty() {
            let mut d = vec![zero(); free.len()];
            d[0] = one();
            d
        } else {
            linalg::null_vector(&columns).ok_or_else(|| {
                Error::NotBihierarchy("a fractional vertex appeared; constraints are not totally unimodular".into())
            })?
        };
        // Longest step keeping every cell in [0,1] and every set in quota.
        let mut step: Option<Rational> = None;
        let mut consider = |t: Rational| {
            if step.as_ref().is_none_or(|s| t < *s) {
                step = Some(t);
            }
        };
        for (k, d) in dir.iter().enumerate() {
            let v = &cur[free[k]];
            if d.is_positive() {
                consider((one() - v) / d);
            } else if d.is_negative() {
                consider(-(v / d));
            }
        }
        for (k, s) in sets.iter().enumerate() {
            let slope = s
                .cells
                .iter()
                .filter(|&&c| pos[c] != usize::MAX)
                .fold(zero(), |acc, &c| acc + &dir[pos[c]]);
            if slope.is_positive() {
                consider((&s.upper - &sums[k]) / &slope);
            } else if slope.is_negative() {
                consider((&sums[k] - &s.lower) / -slope);
            }
        }
        let t = step.expect("a nonzero direction inside the unit cube is bounded");
        for (k, d) in dir.iter().enumerate() {
            if !d.is_zero() {
                cur[free[k]] += &t * d;
            }
        }
    }
}

/// Largest `λ ≤ 1` such that `(x - λy)/(1-λ)` stays feasible.
fn peel_weight(x: &[Rational], y: &[Rational], sets: &[Set]) -> Rational {
    let mut lambda = one();
    let mut bound = |ax: Rational, ay: Rational, lo: &Rational, hi: &Rational| {
        if ay > *lo {
            let t = (&ax - lo) / (&ay - lo);
            if t < lambda {
                lambda = t;
            }
        }
        if *hi > ay {
            let t = (hi - &ax) / (hi - &ay);
            if t < lambda {
                lambda = t;
            }
        }
    };
    let (lo, hi) = (zero(), one());
    for (a, b) in x.iter().zip(y) {
        bound(a.clone(), b.clone(), &lo, &hi);
    }
    for s in sets {
        bound(total(x, &s.cells), total(y, &s.cells), &s.lower, &s.upper);
    }
    debug_assert!(lambda.is_positive());
    lambda
}

/// Shrinks the support to linearly independent allocations (at most
/// `n·m + 1`) with the same marginal; the result's support is a subset of
/// the input's.
pub fn reduce_support(lottery: &Lottery) -> Lottery {
    let (n, m) = (lottery.agents(), lottery.items());
    let columns: Vec<Vec<Rational>> = lottery
        .support()
        .iter()
        .map(|(_, a)| {
            let mut v = Vec::with_capacity(n * m + 1);
            for i in 0..n {
                v.extend(a.indicator(i));
            }
            v.push(one());
            v
        })
        .collect();
    let weights: Vec<Rational> = lottery.support().iter().map(|(w, _)| w.clone()).collect();
    let reduced = linalg::caratheodory(&columns, &weights);
    let entries = reduced
        .into_iter()
        .zip(lottery.support())
        .filter(|(w, _)| w.is_positive())
        .map(|(w, (_, a))| (w, a.clone()))
        .collect();
    Lottery::new(entries).expect("reduction preserves total weight")
}
