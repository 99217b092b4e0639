//! Exact linear programming: dense-tableau primal simplex with Bland's
//! anti-cycling rule, two phases.
//!
//! Problems are stated over original variables with optional bounds and are
//! rewritten internally to `min c·y, A y = b, y ≥ 0, b ≥ 0`. Solutions carry
//! the basis and the dual vector of that internal form, which
//! [`verify_optimality`] turns into an exact optimality certificate.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::linalg;
use crate::rational::{one, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    sense: Sense,
    constraints: Vec<Constraint>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// `vars` variables, each bounded below by zero and unbounded above.
    pub fn new(vars: usize, sense: Sense) -> Self {
        LinearProgram {
            objective: vec![zero(); vars],
            sense,
            constraints: Vec::new(),
            lower: vec![Some(zero()); vars],
            upper: vec![None; vars],
        }
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        let mut lp = Self::new(objective.len(), Sense::Max);
        lp.objective = objective;
        lp
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        let mut lp = Self::new(objective.len(), Sense::Min);
        lp.objective = objective;
        lp
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Adds a row. Panics if its width differs from the variable count.
    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars(), "constraint width");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Sets both bounds of a variable; `None` means unbounded on that side.
    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Checks every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.vars() {
            return false;
        }
        for (k, v) in x.iter().enumerate() {
            if self.lower[k].as_ref().is_some_and(|l| v < l)
                || self.upper[k].as_ref().is_some_and(|u| v > u)
            {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    /// Original variables; meaningful only when optimal.
    pub values: Vec<Rational>,
    pub objective_value: Rational,
    /// Basic columns of the internal standard form.
    pub basis: Vec<usize>,
    /// Duals of the internal standard-form rows (minimization sense).
    pub duals: Vec<Rational>,
}

impl LpSolution {
    fn status_only(status: Status, vars: usize) -> Self {
        LpSolution {
            status,
            values: vec![zero(); vars],
            objective_value: zero(),
            basis: Vec::new(),
            duals: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Debug, Clone)]
enum VarMap {
    /// `x = lo + y[col]`
    Shift { lo: Rational, col: usize },
    /// `x = hi - y[col]`
    Mirror { hi: Rational, col: usize },
    /// `x = y[pos] - y[neg]`
    Split { pos: usize, neg: usize },
}

/// `min c·y` subject to `a y = b`, `y ≥ 0`, `b ≥ 0`.
struct Standard {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    map: Vec<VarMap>,
    /// Column that can start basic in each row (a +1 slack), if any.
    start: Vec<Option<usize>>,
    cols: usize,
}

impl Standard {
    fn build(lp: &LinearProgram) -> Standard {
        let mut map = Vec::with_capacity(lp.vars());
        let mut cols = 0;
        // Rows are collected as (coeffs over original vars, relation, rhs).
        let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| (c.coeffs.clone(), c.relation, c.rhs.clone()))
            .collect();
        for k in 0..lp.vars() {
            match (&lp.lower[k], &lp.upper[k]) {
                (Some(lo), hi) => {
                    map.push(VarMap::Shift {
                        lo: lo.clone(),
                        col: cols,
                    });
                    cols += 1;
                    if let Some(hi) = hi {
                        let mut e = vec![zero(); lp.vars()];
                        e[k] = one();
                        rows.push((e, Relation::Le, hi.clone()));
                    }
                }
                (None, Some(hi)) => {
                    map.push(VarMap::Mirror {
                        hi: hi.clone(),
                        col: cols,
                    });
                    cols += 1;
                }
                (None, None) => {
                    map.push(VarMap::Split {
                        pos: cols,
                        neg: cols + 1,
                    });
                    cols += 2;
                }
            }
        }
        let structural = cols;
        let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let total = structural + slack_count;
        let mut a = Vec::with_capacity(rows.len());
        let mut b = Vec::with_capacity(rows.len());
        let mut start = Vec::with_capacity(rows.len());
        let mut next_slack = structural;
        for (coeffs, rel, rhs) in rows {
            let mut row = vec![zero(); total];
            let mut rhs = rhs;
            for (k, coef) in coeffs.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                match &map[k] {
                    VarMap::Shift { lo, col } => {
                        row[*col] += coef;
                        rhs -= coef * lo;
                    }
                    VarMap::Mirror { hi, col } => {
                        row[*col] -= coef;
                        rhs -= coef * hi;
                    }
                    VarMap::Split { pos, neg } => {
                        row[*pos] += coef;
                        row[*neg] -= coef;
                    }
                }
            }
            let slack = match rel {
                Relation::Eq => None,
                Relation::Le => {
                    row[next_slack] = one();
                    next_slack += 1;
                    Some(next_slack - 1)
                }
                Relation::Ge => {
                    row[next_slack] = -one();
                    next_slack += 1;
                    Some(next_slack - 1)
                }
            };
            if rhs.is_negative() {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = -x.clone();
                    }
                }
                rhs = -rhs;
            }
            start.push(slack.filter(|&s| row[s] == one()));
            a.push(row);
            b.push(rhs);
        }
        let mut c = vec![zero(); total];
        let sign = if lp.sense == Sense::Max { -one() } else { one() };
        for (k, coef) in lp.objective.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let coef = &sign * coef;
            match &map[k] {
                VarMap::Shift { col, .. } => c[*col] += &coef,
                VarMap::Mirror { col, .. } => c[*col] -= &coef,
                VarMap::Split { pos, neg } => {
                    c[*pos] += &coef;
                    c[*neg] -= &coef;
                }
            }
        }
        Standard {
            a,
            b,
            c,
            map,
            start,
            cols: total,
        }
    }

    fn original(&self, y: &[Rational]) -> Vec<Rational> {
        self.map
            .iter()
            .map(|m| match m {
                VarMap::Shift { lo, col } => lo + &y[*col],
                VarMap::Mirror { hi, col } => hi - &y[*col],
                VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
            })
            .collect()
    }

    /// Standard-form point for original values, with slacks filled in.
    fn lift(&self, x: &[Rational]) -> Vec<Rational> {
        let mut y = vec![zero(); self.cols];
        for (k, m) in self.map.iter().enumerate() {
            match m {
                VarMap::Shift { lo, col } => y[*col] = &x[k] - lo,
                VarMap::Mirror { hi, col } => y[*col] = hi - &x[k],
                VarMap::Split { pos, neg } => {
                    if x[k].is_negative() {
                        y[*neg] = -x[k].clone();
                    } else {
                        y[*pos] = x[k].clone();
                    }
                }
            }
        }
        let structural = self.structural();
        for (row, rhs) in self.a.iter().zip(&self.b) {
            if let Some(s) = (structural..self.cols).find(|&s| !row[s].is_zero()) {
                let rest = dot(&row[..s], &y[..s]);
                y[s] = (rhs - rest) / &row[s];
            }
        }
        y
    }

    fn structural(&self) -> usize {
        self.map
            .iter()
            .map(|m| match m {
                VarMap::Shift { col, .. } | VarMap::Mirror { col, .. } => col + 1,
                VarMap::Split { neg, .. } => neg + 1,
            })
            .max()
            .unwrap_or(0)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current objective.
    cost: Vec<Rational>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.rows[r][e].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.rows[i][j] -= d;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[e].is_zero() {
            let f = self.cost[e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.cost[j] -= d;
            }
        }
        self.basis[r] = e;
    }

    /// Bland's rule over the first `allowed` columns.
    fn optimize(&mut self, allowed: usize) -> Outcome {
        loop {
            let Some(e) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(Rational, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((best, r)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((ratio, i));
                }
            }
            let Some((_, r)) = leave else {
                return Outcome::Unbounded;
            };
            self.pivot(r, e);
        }
    }

    fn set_cost(&mut self, c: &[Rational]) {
        let mut cost = c.to_vec();
        for (i, &bcol) in self.basis.iter().enumerate() {
            let cb = &c[bcol];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    cost[j] -= cb * a;
                }
            }
        }
        self.cost = cost;
    }
}

/// Runs phase one. Returns the tableau restricted to the standard columns
/// with redundant rows removed (and the kept row indices), or `None` when
/// infeasible.
fn phase_one(std: &Standard) -> Option<(Tableau, Vec<usize>)> {
    let n = std.cols;
    let needs: Vec<usize> = (0..std.a.len()).filter(|&i| std.start[i].is_none()).collect();
    let width = n + needs.len();
    let mut rows = Vec::with_capacity(std.a.len());
    let mut basis = Vec::with_capacity(std.a.len());
    let mut art = 0;
    for (i, row) in std.a.iter().enumerate() {
        let mut r = row.clone();
        r.resize(width, zero());
        match std.start[i] {
            Some(s) => basis.push(s),
            None => {
                r[n + art] = one();
                basis.push(n + art);
                art += 1;
            }
        }
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        rhs: std.b.clone(),
        basis,
        cost: Vec::new(),
    };
    if !needs.is_empty() {
        let mut c1 = vec![zero(); width];
        for x in &mut c1[n..] {
            *x = one();
        }
        t.set_cost(&c1);
        t.optimize(width);
        let infeas = t
            .basis
            .iter()
            .zip(&t.rhs)
            .any(|(&b, v)| b >= n && v.is_positive());
        if infeas {
            return None;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut r = 0;
        let mut kept: Vec<usize> = (0..t.rows.len()).collect();
        while r < t.rows.len() {
            if t.basis[r] >= n {
                match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        kept.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in t.rows.iter_mut() {
            row.truncate(n);
        }
        return Some((t, kept));
    }
    let kept = (0..t.rows.len()).collect();
    Some((t, kept))
}

fn duals(std: &Standard, basis: &[usize], kept: &[usize], c: &[Rational]) -> Vec<Rational> {
    // Solve B^T π = c_B over the kept rows.
    let k = kept.len();
    let bt: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&col| kept.iter().map(|&i| std.a[i][col].clone()).collect())
        .collect();
    let cb: Vec<Rational> = basis.iter().map(|&col| c[col].clone()).collect();
    let pi = linalg::solve_any(&bt, &cb, k).unwrap_or_else(|| vec![zero(); k]);
    let mut full = vec![zero(); std.a.len()];
    for (pos, &i) in kept.iter().enumerate() {
        full[i] = pi[pos].clone();
    }
    full
}

/// Solves the program exactly.
pub fn solve(lp: &LinearProgram) -> LpSolution {
    let std = Standard::build(lp);
    let Some((mut t, kept)) = phase_one(&std) else {
        return LpSolution::status_only(Status::Infeasible, lp.vars());
    };
    t.set_cost(&std.c);
    if let Outcome::Unbounded = t.optimize(std.cols) {
        return LpSolution::status_only(Status::Unbounded, lp.vars());
    }
    let mut y = vec![zero(); std.cols];
    for (i, &b) in t.basis.iter().enumerate() {
        y[b] = t.rhs[i].clone();
    }
    let values = std.original(&y);
    let objective_value = dot(&lp.objective, &values);
    let duals = duals(&std, &t.basis, &kept, &std.c);
    let sol = LpSolution {
        status: Status::Optimal,
        values,
        objective_value,
        basis: t.basis,
        duals,
    };
    debug_assert!(verify_optimality(lp, &sol), "simplex produced an uncertified optimum");
    sol
}

/// Exact certificate check for an optimal solution: primal feasibility,
/// dual feasibility of the standard-form duals, and equal objectives.
pub fn verify_optimality(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.status != Status::Optimal || !lp.is_feasible(&sol.values) {
        return false;
    }
    if dot(&lp.objective, &sol.values) != sol.objective_value {
        return false;
    }
    let std = Standard::build(lp);
    if sol.duals.len() != std.a.len() {
        return false;
    }
    let y = std.lift(&sol.values);
    if y.iter().any(Signed::is_negative) {
        return false;
    }
    for j in 0..std.cols {
        let col_dot = std
            .a
            .iter()
            .zip(&sol.duals)
            .fold(zero(), |acc, (row, p)| acc + &row[j] * p);
        if std.c[j] < col_dot {
            return false;
        }
    }
    dot(&std.b, &sol.duals) == dot(&std.c, &y)
}

/// A basic feasible solution of `rows · x = rhs`, `x ≥ 0`. Its support is
/// at most the rank of the system.
pub fn basic_feasible_point(rows: &[Vec<Rational>], rhs: &[Rational]) -> LpSolution {
    let vars = rows.first().map_or(0, Vec::len);
    let mut lp = LinearProgram::new(vars, Sense::Min);
    for (r, b) in rows.iter().zip(rhs) {
        lp.add(r.clone(), Relation::Eq, b.clone());
    }
    solve(&lp)
}
