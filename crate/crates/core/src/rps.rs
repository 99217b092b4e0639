//! Lottery rules built on eating: recursive probabilistic serial, its
//! bounded-support variant, the bads and mixed adaptations, and randomized
//! round-robin.
//!
//! Each stage of recursive probabilistic serial lets every agent eat one
//! unit from the items still unassigned, decomposes the eaten matrix into
//! allocations that hand each agent at most one item, and commits one of
//! them. The full mode follows every branch; the bounded mode keeps at most
//! `n·m + 1` branches after every stage; the sample mode follows one branch
//! drawn with a seeded generator.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::decomp::bvn_decompose;
use crate::eating::eat;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Instance, IntegralAllocation, Kind, Lottery, OrdinalPrefs};
use crate::rational::{int, one, zero, Rational};
use crate::rng::Sampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every branch of every stage.
    Full,
    /// Support trimmed to at most `n·m + 1` after every stage.
    Poly,
    /// One seeded draw.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RpsConfig {
    pub mode: Mode,
    pub seed: u64,
    /// Abort guard for the full mode.
    pub max_support: usize,
}

impl Default for RpsConfig {
    fn default() -> Self {
        RpsConfig {
            mode: Mode::Full,
            seed: 0,
            max_support: 100_000,
        }
    }
}

impl RpsConfig {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn poly() -> Self {
        RpsConfig {
            mode: Mode::Poly,
            ..Self::default()
        }
    }

    pub fn sample(seed: u64) -> Self {
        RpsConfig {
            mode: Mode::Sample,
            seed,
            ..Self::default()
        }
    }
}

/// A whole lottery, or a single drawn allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Lottery(Lottery),
    Sample(IntegralAllocation),
}

impl Outcome {
    pub fn lottery(self) -> Option<Lottery> {
        match self {
            Outcome::Lottery(l) => Some(l),
            Outcome::Sample(_) => None,
        }
    }

    pub fn sample(self) -> Option<IntegralAllocation> {
        match self {
            Outcome::Sample(a) => Some(a),
            Outcome::Lottery(_) => None,
        }
    }

    /// A drawn allocation as a point-mass lottery.
    pub fn into_lottery(self) -> Lottery {
        match self {
            Outcome::Lottery(l) => l,
            Outcome::Sample(a) => Lottery::certain(a),
        }
    }
}

/// Items a sampled run handed out at each stage: `stages[t][i]` is agent
/// `i`'s item in stage `t`, if she got one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub allocation: IntegralAllocation,
    pub stages: Vec<Vec<Option<usize>>>,
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

/// Recursive probabilistic serial on a goods instance.
pub fn rps(inst: &Instance, cfg: &RpsConfig) -> Result<Outcome> {
    require(inst, Kind::Goods)?;
    rps_ordinal(&inst.ordinal_prefs(), cfg)
}

/// Recursive probabilistic serial on bads, after padding with zero-valued
/// dummy bads until the item count is a multiple of the agent count.
pub fn rps_bads(inst: &Instance, cfg: &RpsConfig) -> Result<Outcome> {
    require(inst, Kind::Bads)?;
    padded(inst, cfg)
}

/// Recursive probabilistic serial on mixed items, padded like the bads
/// variant. Accepts instances of any kind.
pub fn rps_mixed(inst: &Instance, cfg: &RpsConfig) -> Result<Outcome> {
    padded(inst, cfg)
}

fn padded(inst: &Instance, cfg: &RpsConfig) -> Result<Outcome> {
    let (n, m) = (inst.agents(), inst.items());
    let extra = (n - m % n) % n;
    let values: Vec<Vec<Rational>> = inst
        .values()
        .iter()
        .map(|row| row.iter().cloned().chain((0..extra).map(|_| zero())).collect())
        .collect();
    let prefs = OrdinalPrefs::from_values(&values);
    let strip = |a: &IntegralAllocation| {
        IntegralAllocation::from_owners(n, a.owners()[..m].to_vec()).expect("agents in range")
    };
    Ok(match rps_ordinal(&prefs, cfg)? {
        Outcome::Sample(a) => Outcome::Sample(strip(&a)),
        Outcome::Lottery(l) => Outcome::Lottery(Lottery::new(
            l.support().iter().map(|(w, a)| (w.clone(), strip(a))).collect(),
        )?),
    })
}

/// The engine: runs on ordinal preferences alone.
pub fn rps_ordinal(prefs: &OrdinalPrefs, cfg: &RpsConfig) -> Result<Outcome> {
    if cfg.max_support == 0 {
        return Err(Error::InvalidLottery("max_support must be at least 1".into()));
    }
    let mut engine = Engine::new(prefs);
    match cfg.mode {
        Mode::Sample => Ok(Outcome::Sample(engine.trace(cfg.seed)?.allocation)),
        Mode::Full => Ok(Outcome::Lottery(engine.expand(None, cfg.max_support)?)),
        Mode::Poly => {
            let cap = prefs.agents() * prefs.items() + 1;
            Ok(Outcome::Lottery(engine.expand(Some(cap), usize::MAX)?))
        }
    }
}

/// One seeded run with the items handed out at every stage.
pub fn sample_trace(prefs: &OrdinalPrefs, seed: u64) -> Result<Trace> {
    Engine::new(prefs).trace(seed)
}

/// Largest number of distinct remaining-item sets the bounded mode will
/// evaluate to keep its marginal identical to the full mode's.
const CONTINUATION_LIMIT: usize = 4096;

struct Engine<'a> {
    prefs: &'a OrdinalPrefs,
    n: usize,
    m: usize,
    stages: BTreeMap<Vec<bool>, Lottery>,
    continuation: BTreeMap<Vec<bool>, Vec<Rational>>,
}

#[derive(Clone)]
struct Branch {
    weight: Rational,
    alloc: IntegralAllocation,
}

impl Branch {
    fn remaining(&self) -> Vec<bool> {
        self.alloc.owners().iter().map(Option::is_none).collect()
    }
}

impl<'a> Engine<'a> {
    fn new(prefs: &'a OrdinalPrefs) -> Self {
        Engine {
            prefs,
            n: prefs.agents(),
            m: prefs.items(),
            stages: BTreeMap::new(),
            continuation: BTreeMap::new(),
        }
    }

    /// Decomposition of one unit of eating from `remaining`.
    fn stage(&mut self, remaining: &[bool]) -> Result<Lottery> {
        if let Some(l) = self.stages.get(remaining) {
            return Ok(l.clone());
        }
        let avail: Vec<Rational> = remaining.iter().map(|&r| if r { one() } else { zero() }).collect();
        let x = eat(self.prefs, &avail, &one());
        let l = bvn_decompose(&x)?;
        self.stages.insert(remaining.to_vec(), l.clone());
        Ok(l)
    }

    fn expand(&mut self, cap: Option<usize>, max_support: usize) -> Result<Lottery> {
        let mut branches = vec![Branch {
            weight: one(),
            alloc: IntegralAllocation::empty(self.n, self.m),
        }];
        while branches.iter().any(|b| b.remaining().contains(&true)) {
            let mut next: Vec<Branch> = Vec::new();
            let mut index: BTreeMap<IntegralAllocation, usize> = BTreeMap::new();
            for b in &branches {
                let rem = b.remaining();
                let parts = if rem.contains(&true) {
                    self.stage(&rem)?.into_support()
                } else {
                    vec![(one(), IntegralAllocation::empty(self.n, self.m))]
                };
                for (w, a) in parts {
                    let mut alloc = b.alloc.clone();
                    for (j, owner) in a.owners().iter().enumerate() {
                        if owner.is_some() {
                            alloc.assign(j, *owner);
                        }
                    }
                    let weight = &b.weight * &w;
                    match index.get(&alloc) {
                        Some(&k) => next[k].weight += weight,
                        None => {
                            index.insert(alloc.clone(), next.len());
                            next.push(Branch { weight, alloc });
                        }
                    }
                }
            }
            if next.len() > max_support {
                return Err(Error::SupportExplosion { limit: max_support });
            }
            if let Some(cap) = cap {
                if next.len() > cap {
                    next = self.reduce(next)?;
                }
            }
            branches = next;
        }
        Lottery::new(branches.into_iter().map(|b| (b.weight, b.alloc)).collect())
    }

    /// Expected allocation of the items in `remaining` from this stage on.
    fn continuation(&mut self, remaining: &[bool]) -> Result<Option<Vec<Rational>>> {
        if !remaining.contains(&true) {
            return Ok(Some(vec![zero(); self.n * self.m]));
        }
        if let Some(c) = self.continuation.get(remaining) {
            return Ok(Some(c.clone()));
        }
        if self.continuation.len() >= CONTINUATION_LIMIT {
            return Ok(None);
        }
        let stage = self.stage(remaining)?;
        let mut total = vec![zero(); self.n * self.m];
        for (w, a) in stage.support() {
            let mut rest = remaining.to_vec();
            for (j, owner) in a.owners().iter().enumerate() {
                if let Some(i) = owner {
                    total[i * self.m + j] += w;
                    rest[j] = false;
                }
            }
            let Some(future) = self.continuation(&rest)? else {
                return Ok(None);
            };
            for (t, f) in total.iter_mut().zip(&future) {
                if !f.is_zero() {
                    *t += w * f;
                }
            }
        }
        self.continuation.insert(remaining.to_vec(), total.clone());
        Ok(Some(total))
    }

    /// Carathéodory reduction. Each branch is represented by its committed
    /// items plus the expected continuation from its remaining items, so
    /// the final marginal is unchanged; if the continuations are too costly
    /// only the committed part is preserved.
    fn reduce(&mut self, branches: Vec<Branch>) -> Result<Vec<Branch>> {
        let mut columns = Vec::with_capacity(branches.len());
        let mut exact = true;
        for b in &branches {
            let mut v: Vec<Rational> = Vec::with_capacity(self.n * self.m + 1);
            for i in 0..self.n {
                v.extend(b.alloc.indicator(i));
            }
            if exact {
                match self.continuation(&b.remaining())? {
                    Some(f) => {
                        for (x, y) in v.iter_mut().zip(f) {
                            *x += y;
                        }
                    }
                    None => exact = false,
                }
            }
            v.push(one());
            columns.push(v);
        }
        if !exact {
            for (col, b) in columns.iter_mut().zip(&branches) {
                let mut v = Vec::with_capacity(self.n * self.m + 1);
                for i in 0..self.n {
                    v.extend(b.alloc.indicator(i));
                }
                v.push(one());
                *col = v;
            }
        }
        let weights: Vec<Rational> = branches.iter().map(|b| b.weight.clone()).collect();
        let reduced = linalg::caratheodory(&columns, &weights);
        Ok(branches
            .into_iter()
            .zip(reduced)
            .filter(|(_, w)| w.is_positive())
            .map(|(b, weight)| Branch { weight, ..b })
            .collect())
    }

    fn trace(&mut self, seed: u64) -> Result<Trace> {
        let mut sampler = Sampler::new(seed);
        let mut alloc = IntegralAllocation::empty(self.n, self.m);
        let mut stages = Vec::new();
        loop {
            let rem: Vec<bool> = alloc.owners().iter().map(Option::is_none).collect();
            if !rem.contains(&true) {
                break;
            }
            let l = self.stage(&rem)?;
            let weights: Vec<Rational> = l.support().iter().map(|(w, _)| w.clone()).collect();
            let (_, pick) = &l.support()[sampler.pick(&weights)];
            let mut got = vec![None; self.n];
            for (j, owner) in pick.owners().iter().enumerate() {
                if let Some(i) = *owner {
                    alloc.assign(j, Some(i));
                    got[i] = Some(j);
                }
            }
            stages.push(got);
        }
        Ok(Trace {
            allocation: alloc,
            stages,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundRobinMode {
    /// Every agent order, each with weight `1/n!`.
    Exact,
    /// One uniformly drawn order.
    Sample(u64),
}

/// Largest agent count for exact round-robin.
pub const ROUND_ROBIN_MAX_AGENTS: usize = 8;

/// Agents pick their favourite remaining good in turn, following `order`.
pub fn round_robin(prefs: &OrdinalPrefs, order: &[usize]) -> IntegralAllocation {
    let (n, m) = (prefs.agents(), prefs.items());
    let mut alloc = IntegralAllocation::empty(n, m);
    for turn in 0..m {
        let i = order[turn % order.len()];
        let j = prefs
            .order(i)
            .iter()
            .copied()
            .find(|&j| alloc.owner(j).is_none())
            .expect("an item is left");
        alloc.assign(j, Some(i));
    }
    alloc
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| current[k] < current[k + 1]) else {
            return out;
        };
        let l = (k + 1..n).rev().find(|&l| current[k] < current[l]).unwrap();
        current.swap(k, l);
        current[k + 1..].reverse();
    }
}

/// Round-robin under a uniformly random agent order.
pub fn randomized_round_robin(inst: &Instance, mode: RoundRobinMode) -> Result<Outcome> {
    require(inst, Kind::Goods)?;
    let prefs = inst.ordinal_prefs();
    let n = inst.agents();
    match mode {
        RoundRobinMode::Exact => {
            if n > ROUND_ROBIN_MAX_AGENTS {
                return Err(Error::SizeLimit(format!(
                    "exact round-robin enumerates n! orders and allows at most {ROUND_ROBIN_MAX_AGENTS} agents, got {n}"
                )));
            }
            let orders = permutations(n);
            let w = one() / int(orders.len() as i64);
            Ok(Outcome::Lottery(Lottery::new(
                orders
                    .iter()
                    .map(|o| (w.clone(), round_robin(&prefs, o)))
                    .collect(),
            )?))
        }
        RoundRobinMode::Sample(seed) => {
            let mut sampler = Sampler::new(seed);
            let mut order: Vec<usize> = (0..n).collect();
            for k in (1..n).rev() {
                let r = sampler.below(k + 1);
                order.swap(k, r);
            }
            Ok(Outcome::Sample(round_robin(&prefs, &order)))
        }
    }
}
