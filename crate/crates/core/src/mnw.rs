//! Fractional maximum Nash welfare, the CEEI condition, the MNW-V variant
//! and replication.
//!
//! The solver runs proportional-response dynamics in floating point until
//! the relative bang-per-buck residual drops below the tolerance, then
//! rebuilds an exact equilibrium from the support it found: prices follow
//! from `p_j = v_ij / u_i` along support edges, spending is a basic
//! feasible flow on those edges, and the result is checked exactly. Only if
//! that fails are the floats rationalized and repaired.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{basic_feasible_point, Status};
use crate::model::{FractionalAllocation, Instance, IntegralAllocation, Kind};
use crate::rational::{from_f64_bounded, from_f64_exact, int, one, to_f64, zero, Rational};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Iteration cap for the floating-point dynamics.
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Denominator cap when rationalizing leftover fractional entries.
pub const SNAP_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MnwSolution {
    pub x: FractionalAllocation,
    /// Exact utilities of `x`.
    pub utilities: Vec<Rational>,
    /// Sum of log utilities over agents with a positive value somewhere.
    pub log_nash_welfare: f64,
    /// Relative bang-per-buck residual of the floating-point iterate.
    pub kkt_residual: f64,
    /// Additive slack under which `x` passes [`ceei_verify`]; zero when the
    /// exact reconstruction succeeded.
    pub slack: Rational,
    pub iterations: usize,
}

impl MnwSolution {
    pub fn is_exact(&self) -> bool {
        self.slack.is_zero()
    }

    /// Product of the utilities of non-degenerate agents.
    pub fn nash_product(&self, inst: &Instance) -> Rational {
        nash_product(inst, &self.utilities)
    }
}

/// Product of utilities over agents who value some item.
pub fn nash_product(inst: &Instance, utilities: &[Rational]) -> Rational {
    (0..inst.agents())
        .filter(|&i| !inst.is_degenerate(i))
        .fold(one(), |acc, i| acc * &utilities[i])
}

fn require(inst: &Instance, kind: Kind) -> Result<()> {
    if inst.kind() != kind {
        return Err(Error::KindMismatch {
            expected: kind.name(),
            found: inst.kind().name(),
        });
    }
    Ok(())
}

/// A fractional allocation maximizing the product of utilities.
pub fn solve_mnw(inst: &Instance, tol: f64) -> Result<MnwSolution> {
    require(inst, Kind::Goods)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (n, m) = (inst.agents(), inst.items());
    let active: Vec<usize> = (0..n).filter(|&i| !inst.is_degenerate(i)).collect();
    if m == 0 || active.is_empty() {
        return Ok(MnwSolution {
            x: FractionalAllocation::zeros(n, m),
            utilities: vec![zero(); n],
            log_nash_welfare: 0.0,
            kkt_residual: 0.0,
            slack: zero(),
            iterations: 0,
        });
    }
    let market = Market::new(inst, &active);
    let (x, residual, iterations) = market.converge(tol);
    if let Some(sol) = reconstruct(inst, &active, &x) {
        return Ok(finish(inst, sol, residual, zero(), iterations));
    }
    if residual > tol {
        return Err(Error::IterationLimit(format!(
            "bang-per-buck residual {residual:e} after {iterations} iterations, tolerance {tol:e}"
        )));
    }
    let snapped = snap(inst, &active, &x, tol)?;
    let slack = from_f64_exact(f64::min(1e-6, tol * 1e4));
    let verdict = ceei_verify(inst, &snapped, &slack, Kind::Goods)?;
    if !verdict.holds {
        return Err(Error::IterationLimit(format!(
            "snapped allocation fails the CEEI check with slack {slack}: {:?}",
            verdict.violation
        )));
    }
    Ok(finish(inst, snapped, residual, slack, iterations))
}

fn finish(
    inst: &Instance,
    x: FractionalAllocation,
    kkt_residual: f64,
    slack: Rational,
    iterations: usize,
) -> MnwSolution {
    let utilities: Vec<Rational> = (0..inst.agents())
        .map(|i| inst.utility_unchecked(i, x.row(i)))
        .collect();
    let log_nash_welfare = (0..inst.agents())
        .filter(|&i| !inst.is_degenerate(i))
        .map(|i| libm::log(to_f64(&utilities[i])))
        .sum();
    MnwSolution {
        x,
        utilities,
        log_nash_welfare,
        kkt_residual,
        slack,
        iterations,
    }
}

/// Fisher market with unit budgets over the active agents.
struct Market {
    values: Vec<Vec<f64>>,
    m: usize,
}

impl Market {
    fn new(inst: &Instance, active: &[usize]) -> Self {
        Market {
            values: active.iter().map(|&i| inst.row(i).iter().map(to_f64).collect()).collect(),
            m: inst.items(),
        }
    }

    /// Runs proportional response; returns the allocation over active
    /// agents, its residual and the iteration count.
    fn converge(&self, tol: f64) -> (Vec<Vec<f64>>, f64, usize) {
        let k = self.values.len();
        let mut bids: Vec<Vec<f64>> = self
            .values
            .iter()
            .map(|row| {
                let total: f64 = row.iter().sum();
                row.iter().map(|v| v / total).collect()
            })
            .collect();
        let mut x = vec![vec![0.0; self.m]; k];
        let mut iterations = 0;
        loop {
            let prices: Vec<f64> = (0..self.m).map(|j| bids.iter().map(|b| b[j]).sum()).collect();
            let mut residual: f64 = 0.0;
            for a in 0..k {
                let mut utility = 0.0;
                let mut best: f64 = 0.0;
                for j in 0..self.m {
                    x[a][j] = if prices[j] > 0.0 { bids[a][j] / prices[j] } else { 0.0 };
                    utility += self.values[a][j] * x[a][j];
                    if prices[j] > 0.0 {
                        best = best.max(self.values[a][j] / prices[j]);
                    }
                }
                residual = residual.max(1.0 - utility / best);
                for j in 0..self.m {
                    bids[a][j] = self.values[a][j] * x[a][j] / utility;
                }
            }
            if residual <= tol || iterations >= MAX_ITERATIONS {
                return (x, residual, iterations);
            }
            iterations += 1;
        }
    }
}

/// Exact equilibrium on the support of `x` thresholded at successively
/// finer levels.
fn reconstruct(inst: &Instance, active: &[usize], x: &[Vec<f64>]) -> Option<FractionalAllocation> {
    let mut tried: Vec<Vec<(usize, usize)>> = Vec::new();
    for exp in [3, 4, 5, 6, 7, 8, 9, 10, 11, 12] {
        let threshold = libm::pow(10.0, -(exp as f64));
        let edges: Vec<(usize, usize)> = (0..active.len())
            .flat_map(|a| (0..inst.items()).map(move |j| (a, j)))
            .filter(|&(a, j)| x[a][j] > threshold && inst.value(active[a], j).is_positive())
            .collect();
        if tried.contains(&edges) {
            continue;
        }
        if let Some(sol) = equilibrium_on(inst, active, &edges) {
            return Some(sol);
        }
        tried.push(edges);
    }
    None
}

fn equilibrium_on(inst: &Instance, active: &[usize], edges: &[(usize, usize)]) -> Option<FractionalAllocation> {
    let (k, m) = (active.len(), inst.items());
    let v = |a: usize, j: usize| inst.value(active[a], j);
    let mut agent_edges = vec![Vec::new(); k];
    let mut item_edges = vec![Vec::new(); m];
    for &(a, j) in edges {
        agent_edges[a].push(j);
        item_edges[j].push(a);
    }
    if agent_edges.iter().any(Vec::is_empty) || item_edges.iter().any(Vec::is_empty) {
        return None;
    }
    // beta_a = 1 / u_a; along an edge p_j = v_aj · beta_a
    let mut beta: Vec<Option<Rational>> = vec![None; k];
    let mut price: Vec<Option<Rational>> = vec![None; m];
    for root in 0..k {
        if beta[root].is_some() {
            continue;
        }
        beta[root] = Some(one());
        let (mut agents, mut items) = (vec![root], Vec::new());
        let mut queue = VecDeque::from([(true, root)]);
        while let Some((is_agent, node)) = queue.pop_front() {
            if is_agent {
                let b = beta[node].clone().unwrap();
                for &j in &agent_edges[node] {
                    let p = v(node, j) * &b;
                    match &price[j] {
                        Some(q) if *q != p => return None,
                        Some(_) => {}
                        None => {
                            price[j] = Some(p);
                            items.push(j);
                            queue.push_back((false, j));
                        }
                    }
                }
            } else {
                let p = price[node].clone().unwrap();
                for &a in &item_edges[node] {
                    let b = &p / v(a, node);
                    match &beta[a] {
                        Some(c) if *c != b => return None,
                        Some(_) => {}
                        None => {
                            beta[a] = Some(b);
                            agents.push(a);
                            queue.push_back((true, a));
                        }
                    }
                }
            }
        }
        // the component's goods are bought with its agents' budgets
        let total = items.iter().fold(zero(), |acc, &j| acc + price[j].as_ref().unwrap());
        let scale = int(agents.len() as i64) / total;
        for &a in &agents {
            beta[a] = Some(beta[a].take().unwrap() * &scale);
        }
        for &j in &items {
            price[j] = Some(price[j].take().unwrap() * &scale);
        }
    }
    let beta: Vec<Rational> = beta.into_iter().map(Option::unwrap).collect();
    let price: Vec<Rational> = price.into_iter().map(Option::unwrap).collect();
    // maximum bang per buck everywhere
    for a in 0..k {
        for j in 0..m {
            if v(a, j) * &beta[a] > price[j] {
                return None;
            }
        }
    }
    let mut rows = Vec::with_capacity(k + m);
    let mut rhs = Vec::with_capacity(k + m);
    for a in 0..k {
        rows.push(edges.iter().map(|&(b, _)| if b == a { one() } else { zero() }).collect());
        rhs.push(one());
    }
    for (j, p) in price.iter().enumerate() {
        rows.push(edges.iter().map(|&(_, g)| if g == j { one() } else { zero() }).collect());
        rhs.push(p.clone());
    }
    let flow = basic_feasible_point(&rows, &rhs);
    if flow.status != Status::Optimal {
        return None;
    }
    let mut out = vec![vec![zero(); m]; inst.agents()];
    for (&(a, j), s) in edges.iter().zip(&flow.values) {
        out[active[a]][j] = s / &price[j];
    }
    let x = FractionalAllocation::new(out).ok()?;
    let verdict = ceei_verify(inst, &x, &zero(), Kind::Goods).ok()?;
    (x.is_complete() && verdict.holds).then_some(x)
}

/// Rationalizes a floating-point allocation: near-0/1 entries snap, the
/// rest become bounded continued fractions, and the largest entry of each
/// column absorbs the rounding error.
fn snap(inst: &Instance, active: &[usize], x: &[Vec<f64>], tol: f64) -> Result<FractionalAllocation> {
    let (n, m) = (inst.agents(), inst.items());
    let mut out = vec![vec![zero(); m]; n];
    for (a, &i) in active.iter().enumerate() {
        for j in 0..m {
            let f = x[a][j];
            out[i][j] = if f <= tol {
                zero()
            } else if f >= 1.0 - tol {
                one()
            } else {
                from_f64_bounded(f, SNAP_DENOMINATOR)
            };
        }
    }
    for j in 0..m {
        let total = (0..n).fold(zero(), |acc, i| acc + &out[i][j]);
        let largest = (0..n)
            .max_by(|&a, &b| out[a][j].cmp(&out[b][j]).then(b.cmp(&a)))
            .expect("at least one agent");
        let fixed = &out[largest][j] + (one() - total);
        if fixed.is_negative() || fixed > one() {
            return Err(Error::InvalidAllocation(format!("column {j} cannot be repaired")));
        }
        out[largest][j] = fixed;
    }
    FractionalAllocation::new(out)
}

/// A triple breaking the CEEI condition: agent `agent` holds part of
/// `item` although `other` gets more bang per buck from it (goods), or less
/// harm per buck (bads).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeeiViolation {
    pub agent: usize,
    pub other: usize,
    pub item: usize,
    /// `v_agent,item / u_agent`
    pub own_ratio: Rational,
    /// `v_other,item / u_other`
    pub other_ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeeiVerdict {
    pub holds: bool,
    pub violation: Option<CeeiViolation>,
}

/// Checks the CEEI condition on a complete allocation up to an additive
/// slack. Goods: every holder of an item has the highest ratio
/// `v_ij / u_i`. Bads: every holder has the lowest ratio, with all
/// utilities negative.
pub fn ceei_verify(inst: &Instance, x: &FractionalAllocation, slack: &Rational, kind: Kind) -> Result<CeeiVerdict> {
    if kind == Kind::Mixed {
        return Err(Error::KindMismatch {
            expected: "goods or bads",
            found: kind.name(),
        });
    }
    require(inst, kind)?;
    if slack.is_negative() {
        return Err(Error::InvalidParameter("slack must be non-negative".into()));
    }
    if x.agents() != inst.agents() || x.items() != inst.items() {
        return Err(Error::Dimension(format!(
            "allocation is {}x{}, instance is {}x{}",
            x.agents(),
            x.items(),
            inst.agents(),
            inst.items()
        )));
    }
    if !x.is_complete() {
        return Err(Error::Incomplete);
    }
    let n = inst.agents();
    let utilities: Vec<Rational> = (0..n).map(|i| inst.utility_unchecked(i, x.row(i))).collect();
    for (i, u) in utilities.iter().enumerate() {
        match kind {
            Kind::Goods if u.is_zero() && !inst.is_degenerate(i) => return Err(Error::ZeroUtility { agent: i }),
            Kind::Bads if !u.is_negative() => return Err(Error::NonNegativeUtility { agent: i }),
            _ => {}
        }
    }
    // degenerate goods agents count as ratio 0 for every item
    let ratio = |i: usize, j: usize| -> Rational {
        if utilities[i].is_zero() {
            zero()
        } else {
            inst.value(i, j) / &utilities[i]
        }
    };
    for j in 0..inst.items() {
        for i in (0..n).filter(|&i| x.get(i, j).is_positive()) {
            let own = ratio(i, j);
            for h in (0..n).filter(|&h| h != i) {
                let other = ratio(h, j);
                let broken = match kind {
                    Kind::Goods => &own + slack < other,
                    _ => own > &other + slack,
                };
                if broken {
                    return Ok(CeeiVerdict {
                        holds: false,
                        violation: Some(CeeiViolation {
                            agent: i,
                            other: h,
                            item: j,
                            own_ratio: own,
                            other_ratio: other,
                        }),
                    });
                }
            }
        }
    }
    Ok(CeeiVerdict {
        holds: true,
        violation: None,
    })
}

/// Goods valued positively by exactly one agent, with that agent.
pub fn weak_goods(inst: &Instance) -> Vec<(usize, usize)> {
    (0..inst.items())
        .filter_map(|j| {
            let mut valuers = (0..inst.agents()).filter(|&i| inst.value(i, j).is_positive());
            match (valuers.next(), valuers.next()) {
                (Some(i), None) => Some((j, i)),
                _ => None,
            }
        })
        .collect()
}

/// MNW-V: weak goods go to their only valuer; the remaining goods are split
/// by maximum Nash welfare among everybody.
pub fn mnw_v(inst: &Instance, tol: f64) -> Result<FractionalAllocation> {
    require(inst, Kind::Goods)?;
    let (n, m) = (inst.agents(), inst.items());
    let weak = weak_goods(inst);
    let strong: Vec<usize> = (0..m).filter(|j| !weak.iter().any(|(w, _)| w == j)).collect();
    let mut out = vec![vec![zero(); m]; n];
    for &(j, i) in &weak {
        out[i][j] = one();
    }
    if !strong.is_empty() {
        let reduced = Instance::new(
            (0..n)
                .map(|i| strong.iter().map(|&j| inst.value(i, j).clone()).collect())
                .collect(),
        )?;
        let sol = solve_mnw(&reduced, tol)?;
        for (c, &j) in strong.iter().enumerate() {
            for (i, row) in out.iter_mut().enumerate() {
                row[j] = sol.x.get(i, c).clone();
            }
        }
    }
    FractionalAllocation::new(out)
}

/// `k` copies of every agent and good. Copy `l` of agent `i` has index
/// `l·n + i`; copy `r` of good `j` has index `r·m + j`.
pub fn replicate(inst: &Instance, k: usize) -> Result<Instance> {
    if k == 0 {
        return Err(Error::InvalidParameter("replication factor must be at least 1".into()));
    }
    let rows = (0..k)
        .flat_map(|_| inst.values().iter())
        .map(|row| (0..k).flat_map(|_| row.iter().cloned()).collect())
        .collect();
    Instance::new(rows)
}

/// Copy `l` of agent `i` receives `X_i` on copy `l` of each good.
pub fn replicate_allocation(x: &FractionalAllocation, k: usize) -> Result<FractionalAllocation> {
    if k == 0 {
        return Err(Error::InvalidParameter("replication factor must be at least 1".into()));
    }
    let (n, m) = (x.agents(), x.items());
    let mut out = vec![vec![zero(); k * m]; k * n];
    for l in 0..k {
        for i in 0..n {
            for j in 0..m {
                out[l * n + i][l * m + j] = x.get(i, j).clone();
            }
        }
    }
    FractionalAllocation::new(out)
}

/// A fractional slice of one agent's bundle that another agent would pay
/// relatively more for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    /// The agent giving the slice away.
    pub giver: usize,
    /// The agent valuing it relatively more.
    pub taker: usize,
    pub slice: Vec<Rational>,
}

impl DeviationWitness {
    /// `0 < v_i(X) < v_i(A_i)`, `v_j(X) > 0` and
    /// `v_j(X) > v_j(A_j) · v_i(X) / v_i(A_i \ X)`.
    pub fn holds(&self, inst: &Instance, a: &IntegralAllocation) -> bool {
        let (i, j) = (self.giver, self.taker);
        let own = a.indicator(i);
        if self.slice.iter().zip(&own).any(|(s, o)| s.is_negative() || s > o) {
            return false;
        }
        let vi_x = inst.utility_unchecked(i, &self.slice);
        let vi_a = inst.utility_unchecked(i, &own);
        let vj_x = inst.utility_unchecked(j, &self.slice);
        let vj_a = inst.utility_unchecked(j, &a.indicator(j));
        let rest = &vi_a - &vi_x;
        vi_x.is_positive() && vi_x < vi_a && vj_x.is_positive() && vj_x * &rest > vj_a * vi_x
    }
}

/// For an allocation with lower Nash welfare than the MNW solution `Z`,
/// a pair `(i, j)` and a slice `ε·(A_i ∩ Z_j)` with `ε` halved until the
/// inequality holds. `None` when `A` already attains the maximum. The
/// pair is guaranteed for Pareto-optimal `A`; for other allocations the
/// search may also come back empty.
pub fn mnw_deviation_witness(inst: &Instance, a: &IntegralAllocation, tol: f64) -> Result<Option<DeviationWitness>> {
    if a.agents() != inst.agents() || a.items() != inst.items() {
        return Err(Error::Dimension("allocation and instance shapes differ".into()));
    }
    if !a.is_complete() {
        return Err(Error::Incomplete);
    }
    let z = solve_mnw(inst, tol)?;
    let utilities: Vec<Rational> = (0..inst.agents()).map(|i| inst.set_value(i, &a.bundle(i))).collect();
    if nash_product(inst, &utilities) >= z.nash_product(inst) {
        return Ok(None);
    }
    let n = inst.agents();
    let mut best: Option<(Rational, usize, usize, Vec<Rational>)> = None;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let y: Vec<Rational> = (0..inst.items())
                .map(|g| if a.holds(i, g) { z.x.get(j, g).clone() } else { zero() })
                .collect();
            let vi_y = inst.utility_unchecked(i, &y);
            let vj_y = inst.utility_unchecked(j, &y);
            if !vi_y.is_positive() || !vj_y.is_positive() {
                continue;
            }
            // for small ε the inequality reads v_j(Y)/v_j(A_j) > v_i(Y)/v_i(A_i)
            let vi_a = &utilities[i];
            let vj_a = &utilities[j];
            let gain = &vj_y * vi_a - vj_a * &vi_y;
            if !gain.is_positive() {
                continue;
            }
            let score = gain / (vi_a * &vj_y);
            if best.as_ref().is_none_or(|(s, ..)| score > *s) {
                best = Some((score, i, j, y));
            }
        }
    }
    let Some((_, giver, taker, y)) = best else {
        return Ok(None);
    };
    let mut eps = one();
    for _ in 0..256 {
        let w = DeviationWitness {
            giver,
            taker,
            slice: y.iter().map(|t| t * &eps).collect(),
        };
        if w.holds(inst, a) {
            return Ok(Some(w));
        }
        eps /= int(2);
    }
    Err(Error::IterationLimit("no admissible slice size found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn inst(rows: &[&[i64]]) -> Instance {
        Instance::from_ints(rows).unwrap()
    }

    #[test]
    fn two_by_two_optimum() {
        let i = inst(&[&[1, 2], &[1, 3]]);
        let s = solve_mnw(&i, DEFAULT_TOL).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.x.rows(), &[vec![one(), rat(1, 4)], vec![zero(), rat(3, 4)]]);
        assert_eq!(s.utilities, vec![rat(3, 2), rat(9, 4)]);
        assert!(s.kkt_residual <= DEFAULT_TOL);
        // beats the grid: (x + 2y)((1 - x) + 3(1 - y))
        for a in 0..=12 {
            for b in 0..=12 {
                let (x, y) = (rat(a, 12), rat(b, 12));
                let p = (&x + int(2) * &y) * ((one() - &x) + int(3) * (one() - &y));
                assert!(p <= s.nash_product(&i));
            }
        }
    }

    #[test]
    fn symmetric_and_single_agent() {
        let i = inst(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]);
        let s = solve_mnw(&i, DEFAULT_TOL).unwrap();
        assert_eq!(s.utilities, vec![int(2); 3]);
        let one_agent = inst(&[&[1, 2, 3]]);
        let s = solve_mnw(&one_agent, DEFAULT_TOL).unwrap();
        assert_eq!(s.utilities, vec![int(6)]);
    }

    #[test]
    fn degenerate_agent_gets_nothing() {
        let i = inst(&[&[0, 0], &[1, 2]]);
        let s = solve_mnw(&i, DEFAULT_TOL).unwrap();
        assert_eq!(s.x.row(0), &[zero(), zero()]);
        assert_eq!(s.utilities[1], int(3));
    }

    #[test]
    fn ceei_triples() {
        let i = inst(&[&[1, 2], &[1, 3]]);
        let a = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap().to_fractional();
        let v = ceei_verify(&i, &a, &zero(), Kind::Goods).unwrap();
        let w = v.violation.unwrap();
        assert_eq!((w.agent, w.other, w.item), (1, 0, 1));
        assert_eq!((w.own_ratio, w.other_ratio), (one(), int(2)));
        let bads = inst(&[&[-1, -2], &[-2, -1]]);
        let own = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap().to_fractional();
        assert!(ceei_verify(&bads, &own, &zero(), Kind::Bads).unwrap().holds);
        let swapped = IntegralAllocation::from_bundles(2, &[vec![1], vec![0]]).unwrap().to_fractional();
        assert!(!ceei_verify(&bads, &swapped, &zero(), Kind::Bads).unwrap().holds);
        let starved = IntegralAllocation::from_bundles(2, &[vec![0, 1], vec![]]).unwrap().to_fractional();
        assert_eq!(
            ceei_verify(&i, &starved, &zero(), Kind::Goods),
            Err(Error::ZeroUtility { agent: 1 })
        );
    }

    #[test]
    fn mnw_v_on_weak_goods() {
        let i = inst(&[&[1, 1], &[1, 0], &[1, 0]]);
        let x = mnw_v(&i, DEFAULT_TOL).unwrap();
        assert_eq!(x.rows(), &[vec![rat(1, 3), one()], vec![rat(1, 3), zero()], vec![rat(1, 3), zero()]]);
        let all_weak = inst(&[&[3, 0], &[0, 4]]);
        let x = mnw_v(&all_weak, DEFAULT_TOL).unwrap();
        assert_eq!(x.rows(), &[vec![one(), zero()], vec![zero(), one()]]);
        let none_weak = inst(&[&[1, 2], &[1, 3]]);
        assert_eq!(mnw_v(&none_weak, DEFAULT_TOL).unwrap(), solve_mnw(&none_weak, DEFAULT_TOL).unwrap().x);
    }

    #[test]
    fn replication_layout() {
        let i = inst(&[&[1, 2], &[3, 4]]);
        assert_eq!(replicate(&i, 1).unwrap(), i);
        let r = replicate(&i, 2).unwrap();
        assert_eq!((r.agents(), r.items()), (4, 4));
        assert_eq!(r.row(3), &[int(3), int(4), int(3), int(4)]);
        let s = solve_mnw(&i, DEFAULT_TOL).unwrap();
        let rx = replicate_allocation(&s.x, 2).unwrap();
        assert!(ceei_verify(&r, &rx, &s.slack, Kind::Goods).unwrap().holds);
    }

    #[test]
    fn deviation_witness() {
        let i = inst(&[&[1, 2], &[1, 3]]);
        let a = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        let w = mnw_deviation_witness(&i, &a, DEFAULT_TOL).unwrap().unwrap();
        assert_eq!((w.giver, w.taker), (1, 0));
        assert!(w.slice[0].is_zero() && w.slice[1].is_positive());
        assert!(w.holds(&i, &a));
        let sym = inst(&[&[1, 1], &[1, 1]]);
        let fair = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(mnw_deviation_witness(&sym, &fair, DEFAULT_TOL).unwrap(), None);
        let greedy = IntegralAllocation::from_bundles(2, &[vec![0, 1], vec![]]).unwrap();
        assert!(mnw_deviation_witness(&sym, &greedy, DEFAULT_TOL).unwrap().unwrap().holds(&sym, &greedy));
    }
}
