//! Instances, fractional and integral allocations, and lotteries over
//! integral allocations.
//!
//! Everything here is immutable once constructed and every constructor
//! validates the invariants of its type, so downstream code can rely on
//! them without re-checking.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, one, sum, zero, Rational};

/// Sign classification of an instance's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// All values non-negative, every item valued positively by someone.
    Goods,
    /// All values non-positive.
    Bads,
    /// Anything else.
    Mixed,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Goods => "goods",
            Kind::Bads => "bads",
            Kind::Mixed => "mixed",
        }
    }
}

/// Additive valuations of `n` agents over `m` items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    values: Vec<Vec<Rational>>,
    items: usize,
    kind: Kind,
}

impl Instance {
    /// Validates shape and classifies the sign pattern. A non-negative
    /// instance with some positive value is a goods instance, and then
    /// every item must have a positive valuer.
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        let inst = Self::classify(values)?;
        if inst.kind == Kind::Goods {
            for j in 0..inst.items {
                if inst.values.iter().all(|row| row[j].is_zero()) {
                    return Err(Error::ZeroColumn { item: j });
                }
            }
        }
        Ok(inst)
    }

    /// Like [`Instance::new`] but without the positive-valuer requirement;
    /// used for padded and negated helper instances.
    pub(crate) fn new_unchecked(values: Vec<Vec<Rational>>) -> Result<Self> {
        Self::classify(values)
    }

    fn classify(values: Vec<Vec<Rational>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("an instance needs at least one agent".into()));
        }
        let items = values[0].len();
        if items == 0 {
            return Err(Error::Dimension("an instance needs at least one item".into()));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != items {
                return Err(Error::Dimension(format!(
                    "agent {i} has {} values, expected {items}",
                    row.len()
                )));
            }
        }
        let cells = || values.iter().flatten();
        let any_pos = cells().any(|v| v.is_positive());
        let any_neg = cells().any(|v| v.is_negative());
        let kind = match (any_pos, any_neg) {
            (true, false) => Kind::Goods,
            (false, _) => Kind::Bads,
            (true, true) => Kind::Mixed,
        };
        Ok(Instance {
            values,
            items,
            kind,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn agents(&self) -> usize {
        self.values.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn value(&self, agent: usize, item: usize) -> &Rational {
        &self.values[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.values[agent]
    }

    pub fn ordinal_prefs(&self) -> OrdinalPrefs {
        OrdinalPrefs::from_values(&self.values)
    }

    /// `v_i(X_i)` for a fractional bundle row.
    pub fn utility(&self, agent: usize, bundle: &[Rational]) -> Result<Rational> {
        if agent >= self.agents() {
            return Err(Error::IndexOutOfRange(format!("agent {agent}")));
        }
        if bundle.len() != self.items {
            return Err(Error::Dimension(format!(
                "bundle has {} entries, expected {}",
                bundle.len(),
                self.items
            )));
        }
        Ok(self.utility_unchecked(agent, bundle))
    }

    pub(crate) fn utility_unchecked(&self, agent: usize, bundle: &[Rational]) -> Rational {
        self.values[agent]
            .iter()
            .zip(bundle)
            .filter(|(_, x)| !x.is_zero())
            .fold(zero(), |acc, (v, x)| acc + v * x)
    }

    /// Value of an integral set of items.
    pub fn set_value(&self, agent: usize, items: &[usize]) -> Rational {
        items
            .iter()
            .fold(zero(), |acc, &j| acc + &self.values[agent][j])
    }

    /// `v_i(1^m)`: the agent's value for everything.
    pub fn total_value(&self, agent: usize) -> Rational {
        sum(&self.values[agent])
    }

    /// The instance with every value negated.
    pub fn negated(&self) -> Instance {
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| -v).collect())
            .collect();
        Instance::new_unchecked(values).expect("negation keeps the shape")
    }

    /// True if the agent values every item at zero.
    pub fn is_degenerate(&self, agent: usize) -> bool {
        self.values[agent].iter().all(Zero::is_zero)
    }
}

/// Per-agent strict orders over items: non-increasing value, ties broken
/// by ascending item index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalPrefs {
    order: Vec<Vec<usize>>,
    rank: Vec<Vec<usize>>,
}

impl OrdinalPrefs {
    pub fn from_values(values: &[Vec<Rational>]) -> Self {
        let order: Vec<Vec<usize>> = values
            .iter()
            .map(|row| {
                let mut idx: Vec<usize> = (0..row.len()).collect();
                idx.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
                idx
            })
            .collect();
        let rank = order
            .iter()
            .map(|ord| {
                let mut r = vec![0; ord.len()];
                for (pos, &j) in ord.iter().enumerate() {
                    r[j] = pos;
                }
                r
            })
            .collect();
        OrdinalPrefs { order, rank }
    }

    pub fn agents(&self) -> usize {
        self.order.len()
    }

    pub fn items(&self) -> usize {
        self.order.first().map_or(0, Vec::len)
    }

    /// Items from most to least preferred.
    pub fn order(&self, agent: usize) -> &[usize] {
        &self.order[agent]
    }

    /// Position of `item` in the agent's order (0 = favourite).
    pub fn rank(&self, agent: usize, item: usize) -> usize {
        self.rank[agent][item]
    }

    /// Same orders extended with `extra` items ranked after every real
    /// item, in index order.
    pub fn with_trailing_items(&self, extra: usize) -> Self {
        let m = self.items();
        let order: Vec<Vec<usize>> = self
            .order
            .iter()
            .map(|ord| ord.iter().copied().chain(m..m + extra).collect())
            .collect();
        let rank = order
            .iter()
            .map(|ord| {
                let mut r = vec![0; ord.len()];
                for (pos, &j) in ord.iter().enumerate() {
                    r[j] = pos;
                }
                r
            })
            .collect();
        OrdinalPrefs { order, rank }
    }
}

/// First-order stochastic dominance of bundle `p` over bundle `q` for the
/// agent: every prefix of her order carries at least as much mass in `p`.
pub fn sd_dominates(prefs: &OrdinalPrefs, agent: usize, p: &[Rational], q: &[Rational]) -> bool {
    let mut acc_p = zero();
    let mut acc_q = zero();
    for &j in prefs.order(agent) {
        acc_p += &p[j];
        acc_q += &q[j];
        if acc_p < acc_q {
            return false;
        }
    }
    true
}

/// Non-negative `n × m` matrix with entries in `[0, 1]` and column sums at
/// most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionalAllocation {
    rows: Vec<Vec<Rational>>,
}

impl FractionalAllocation {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("allocation has no agents".into()));
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("allocation rows differ in length".into()));
        }
        let unit = one();
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_negative() || *x > unit {
                    return Err(Error::InvalidAllocation(format!(
                        "entry ({i},{j}) is outside [0,1]"
                    )));
                }
            }
        }
        for j in 0..m {
            if sum(rows.iter().map(|r| &r[j])) > unit {
                return Err(Error::InvalidAllocation(format!(
                    "item {j} is allocated more than once"
                )));
            }
        }
        Ok(FractionalAllocation { rows })
    }

    pub fn zeros(agents: usize, items: usize) -> Self {
        FractionalAllocation {
            rows: vec![vec![zero(); items]; agents],
        }
    }

    pub fn agents(&self) -> usize {
        self.rows.len()
    }

    pub fn items(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, agent: usize, item: usize) -> &Rational {
        &self.rows[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.rows[agent]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    pub fn column_sum(&self, item: usize) -> Rational {
        sum(self.rows.iter().map(|r| &r[item]))
    }

    pub fn row_sum(&self, agent: usize) -> Rational {
        sum(&self.rows[agent])
    }

    /// Every item fully allocated.
    pub fn is_complete(&self) -> bool {
        (0..self.items()).all(|j| self.column_sum(j).is_one())
    }

    pub fn is_integral(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|x| x.is_zero() || x.is_one())
    }

    /// Number of cells strictly between 0 and 1.
    pub fn fractional_cells(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .filter(|x| !x.is_zero() && !x.is_one())
            .count()
    }

    pub fn to_integral(&self) -> Option<IntegralAllocation> {
        if !self.is_integral() {
            return None;
        }
        let mut owner = vec![None; self.items()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_one() {
                    owner[j] = Some(i);
                }
            }
        }
        Some(IntegralAllocation {
            agents: self.agents(),
            owner,
        })
    }
}

/// Assignment of each item to at most one agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralAllocation {
    agents: usize,
    owner: Vec<Option<usize>>,
}

impl IntegralAllocation {
    pub fn from_owners(agents: usize, owner: Vec<Option<usize>>) -> Result<Self> {
        if let Some(bad) = owner.iter().flatten().find(|&&i| i >= agents) {
            return Err(Error::IndexOutOfRange(format!("agent {bad}")));
        }
        Ok(IntegralAllocation { agents, owner })
    }

    pub fn from_bundles(items: usize, bundles: &[Vec<usize>]) -> Result<Self> {
        let mut owner = vec![None; items];
        for (i, bundle) in bundles.iter().enumerate() {
            for &j in bundle {
                if j >= items {
                    return Err(Error::IndexOutOfRange(format!("item {j}")));
                }
                if owner[j].is_some() {
                    return Err(Error::InvalidAllocation(format!(
                        "item {j} appears in two bundles"
                    )));
                }
                owner[j] = Some(i);
            }
        }
        Ok(IntegralAllocation {
            agents: bundles.len(),
            owner,
        })
    }

    pub fn empty(agents: usize, items: usize) -> Self {
        IntegralAllocation {
            agents,
            owner: vec![None; items],
        }
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn items(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, item: usize) -> Option<usize> {
        self.owner[item]
    }

    pub fn owners(&self) -> &[Option<usize>] {
        &self.owner
    }

    pub fn holds(&self, agent: usize, item: usize) -> bool {
        self.owner[item] == Some(agent)
    }

    pub fn assign(&mut self, item: usize, agent: Option<usize>) {
        self.owner[item] = agent;
    }

    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        (0..self.items()).filter(|&j| self.holds(agent, j)).collect()
    }

    pub fn bundles(&self) -> Vec<Vec<usize>> {
        (0..self.agents).map(|i| self.bundle(i)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    /// Agent's row of the 0/1 matrix as rationals.
    pub fn indicator(&self, agent: usize) -> Vec<Rational> {
        (0..self.items())
            .map(|j| if self.holds(agent, j) { one() } else { zero() })
            .collect()
    }

    pub fn to_fractional(&self) -> FractionalAllocation {
        FractionalAllocation {
            rows: (0..self.agents).map(|i| self.indicator(i)).collect(),
        }
    }

    fn cell(&self, flat: usize) -> bool {
        let m = self.items();
        self.holds(flat / m, flat % m)
    }
}

impl Ord for IntegralAllocation {
    /// Lexicographic order of the row-major 0/1 matrices.
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.agents * self.items();
        (self.agents, self.items())
            .cmp(&(other.agents, other.items()))
            .then_with(|| {
                (0..len)
                    .map(|k| self.cell(k).cmp(&other.cell(k)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl PartialOrd for IntegralAllocation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Probability distribution over integral allocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lottery {
    entries: Vec<(Rational, IntegralAllocation)>,
}

impl Lottery {
    /// Validates weights (positive, summing to one) and shapes, and merges
    /// duplicate allocations in first-seen order.
    pub fn new(entries: Vec<(Rational, IntegralAllocation)>) -> Result<Self> {
        let lottery = Self::merged(entries)?;
        let total = sum(lottery.entries.iter().map(|(w, _)| w));
        if !total.is_one() {
            return Err(Error::InvalidLottery(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(lottery)
    }

    fn merged(entries: Vec<(Rational, IntegralAllocation)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return Err(Error::InvalidLottery("empty support".into()));
        };
        let shape = (first.agents(), first.items());
        let mut index: BTreeMap<IntegralAllocation, usize> = BTreeMap::new();
        let mut merged: Vec<(Rational, IntegralAllocation)> = Vec::with_capacity(entries.len());
        for (w, a) in entries {
            if !w.is_positive() {
                return Err(Error::InvalidLottery(format!("non-positive weight {w}")));
            }
            if (a.agents(), a.items()) != shape {
                return Err(Error::InvalidLottery("support shapes differ".into()));
            }
            match index.get(&a) {
                Some(&k) => merged[k].0 += w,
                None => {
                    index.insert(a.clone(), merged.len());
                    merged.push((w, a));
                }
            }
        }
        Ok(Lottery { entries: merged })
    }

    /// Point mass on one allocation.
    pub fn certain(allocation: IntegralAllocation) -> Self {
        Lottery {
            entries: vec![(one(), allocation)],
        }
    }

    pub fn support(&self) -> &[(Rational, IntegralAllocation)] {
        &self.entries
    }

    pub fn into_support(self) -> Vec<(Rational, IntegralAllocation)> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn agents(&self) -> usize {
        self.entries[0].1.agents()
    }

    pub fn items(&self) -> usize {
        self.entries[0].1.items()
    }

    /// Same lottery with support sorted by allocation matrix.
    pub fn sorted(&self) -> Lottery {
        let mut entries = self.entries.clone();
        entries.sort_by(|a, b| a.1.cmp(&b.1));
        Lottery { entries }
    }

    /// `Σ_k w_k A^k`.
    pub fn marginal(&self) -> FractionalAllocation {
        let (n, m) = (self.agents(), self.items());
        let mut rows = vec![vec![zero(); m]; n];
        for (w, a) in &self.entries {
            for (j, owner) in a.owners().iter().enumerate() {
                if let Some(i) = owner {
                    rows[*i][j] += w;
                }
            }
        }
        FractionalAllocation::new(rows).expect("a convex combination of allocations is an allocation")
    }

    /// Expected value agent `agent` assigns to agent `holder`'s bundle.
    pub fn expected_value(&self, inst: &Instance, agent: usize, holder: usize) -> Rational {
        self.entries.iter().fold(zero(), |acc, (w, a)| {
            acc + w * inst.set_value(agent, &a.bundle(holder))
        })
    }
}
