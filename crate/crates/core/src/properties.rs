//! Exact fairness and efficiency checks with violation witnesses.
//!
//! A failed verdict always carries a witness naming the agents (and items,
//! sets or dominating allocations) on which the defining inequality fails.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, Relation, Status};
use crate::model::{FractionalAllocation, Instance, IntegralAllocation, Kind, Lottery, OrdinalPrefs};
use crate::oracle;
use crate::rational::{int, one, zero, Rational};

/// Every notion the checker knows, with goods and bads variants spelled
/// out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Prop,
    Prop1Goods,
    Prop1Bads,
    Ef,
    SdEf,
    Ef1,
    SdEf1,
    /// Envy-free up to removing `k` bads from one's own bundle.
    Efk(usize),
    Ef11Goods,
    Ef11Bads,
    WEf1,
    Po,
    Fpo,
    Gf,
    GfForLess,
}

impl Property {
    pub fn name(self) -> String {
        match self {
            Property::Prop => "prop".into(),
            Property::Prop1Goods => "prop1".into(),
            Property::Prop1Bads => "prop1-bads".into(),
            Property::Ef => "ef".into(),
            Property::SdEf => "sdef".into(),
            Property::Ef1 => "ef1".into(),
            Property::SdEf1 => "sdef1".into(),
            Property::Efk(k) => format!("ef{k}-bads"),
            Property::Ef11Goods => "ef11".into(),
            Property::Ef11Bads => "ef11-bads".into(),
            Property::WEf1 => "wef1".into(),
            Property::Po => "po".into(),
            Property::Fpo => "fpo".into(),
            Property::Gf => "gf".into(),
            Property::GfForLess => "gfless".into(),
        }
    }

    /// Maps a short name to the variant that fits the instance kind:
    /// `prop1`, `ef1` and `ef11` pick their bads forms on bads instances.
    pub fn resolve(name: &str, kind: Kind) -> Result<Property> {
        let mismatch = |expected: &'static str| Error::KindMismatch {
            expected,
            found: kind.name(),
        };
        let p = match (name, kind) {
            ("prop", _) => Property::Prop,
            ("prop1", Kind::Goods) => Property::Prop1Goods,
            ("prop1", Kind::Bads) => Property::Prop1Bads,
            ("prop1", Kind::Mixed) => return Err(mismatch("goods or bads")),
            ("ef", _) => Property::Ef,
            ("sdef", _) => Property::SdEf,
            ("ef1", Kind::Goods) => Property::Ef1,
            ("ef1", Kind::Bads) => Property::Efk(1),
            ("ef1", Kind::Mixed) => return Err(mismatch("goods or bads")),
            ("sdef1", Kind::Mixed) => return Err(mismatch("goods or bads")),
            ("sdef1", _) => Property::SdEf1,
            ("ef2", Kind::Bads) => Property::Efk(2),
            ("ef2", _) => return Err(mismatch("bads")),
            ("ef11", Kind::Goods) => Property::Ef11Goods,
            ("ef11", Kind::Bads) => Property::Ef11Bads,
            ("ef11", Kind::Mixed) => return Err(mismatch("goods or bads")),
            ("wef1", _) => Property::WEf1,
            ("po", _) => Property::Po,
            ("fpo", _) => Property::Fpo,
            ("gf", _) => Property::Gf,
            ("gfless", _) => Property::GfForLess,
            _ => return Err(Error::Parse(format!("unknown property `{name}`"))),
        };
        Ok(p)
    }

    /// Whether the notion is defined for fractional allocations.
    pub fn accepts_fractional(self) -> bool {
        matches!(
            self,
            Property::Prop
                | Property::Ef
                | Property::SdEf
                | Property::Fpo
                | Property::Gf
                | Property::GfForLess
        )
    }

    fn required_kind(self) -> Option<Kind> {
        match self {
            Property::Prop1Goods | Property::Ef1 | Property::Ef11Goods => Some(Kind::Goods),
            Property::Prop1Bads | Property::Efk(_) | Property::Ef11Bads => Some(Kind::Bads),
            _ => None,
        }
    }
}

/// Structured evidence of a violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The agent's value stays below her share even after the best
    /// single-item adjustment (`item`, if any exists).
    Share {
        agent: usize,
        value: Rational,
        share: Rational,
        item: Option<usize>,
    },
    /// `agent` envies `other` even after the best adjustments: removing
    /// `own_item` from her own bundle (or adding it, for the goods form of
    /// more-and-less) and removing `other_item` from the other bundle (or
    /// adding it, for the bads form).
    Envy {
        agent: usize,
        other: usize,
        own_value: Rational,
        other_value: Rational,
        own_item: Option<usize>,
        other_item: Option<usize>,
    },
    /// Stochastic-dominance envy; `prefix` is the first prefix of the
    /// agent's order where the comparison fails when no item is removed.
    SdEnvy {
        agent: usize,
        other: usize,
        prefix: usize,
    },
    /// Removing the `removed` bads still leaves envy.
    Removal {
        agent: usize,
        other: usize,
        removed: Vec<usize>,
        own_value: Rational,
        other_value: Rational,
    },
    DominatingIntegral(IntegralAllocation),
    DominatingFractional(FractionalAllocation),
    /// Group `s` can share the bundles of group `t` as `y` (rows in the
    /// order of `s`) so that every member gains `delta[k] ≥ 0` and the total
    /// gain is positive.
    Group {
        s: Vec<usize>,
        t: Vec<usize>,
        y: Vec<Vec<Rational>>,
        delta: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyVerdict {
    fn pass(property: Property) -> Self {
        PropertyVerdict {
            property,
            holds: true,
            witness: None,
        }
    }

    fn fail(property: Property, witness: Witness) -> Self {
        PropertyVerdict {
            property,
            holds: false,
            witness: Some(witness),
        }
    }
}

/// An allocation of either flavour.
#[derive(Debug, Clone, Copy)]
pub enum AllocationRef<'a> {
    Fractional(&'a FractionalAllocation),
    Integral(&'a IntegralAllocation),
}

fn shape_check(inst: &Instance, n: usize, m: usize) -> Result<()> {
    if n != inst.agents() || m != inst.items() {
        return Err(Error::Dimension(format!(
            "allocation is {n}×{m}, instance is {}×{}",
            inst.agents(),
            inst.items()
        )));
    }
    Ok(())
}

fn kind_check(inst: &Instance, property: Property) -> Result<()> {
    match property.required_kind() {
        Some(k) if k != inst.kind() => Err(Error::KindMismatch {
            expected: k.name(),
            found: inst.kind().name(),
        }),
        _ => Ok(()),
    }
}

/// Dispatches any property on any allocation.
pub fn check(inst: &Instance, alloc: AllocationRef<'_>, property: Property) -> Result<PropertyVerdict> {
    kind_check(inst, property)?;
    match alloc {
        AllocationRef::Fractional(x) => {
            shape_check(inst, x.agents(), x.items())?;
            if !property.accepts_fractional() {
                if let Some(a) = x.to_integral() {
                    return check(inst, AllocationRef::Integral(&a), property);
                }
                return Err(Error::NotApplicable {
                    property: "integral-only notion",
                    reason: format!("`{}` needs an integral allocation", property.name()),
                });
            }
            match property {
                Property::Prop => Ok(check_prop(inst, x)),
                Property::Ef => Ok(check_ef(inst, x)),
                Property::SdEf => Ok(check_sd_ef(inst, x)),
                Property::Fpo => check_fpo(inst, x),
                Property::Gf => check_gf(inst, x, GroupScope::Full),
                Property::GfForLess => check_gf(inst, x, GroupScope::ForLess),
                _ => unreachable!(),
            }
        }
        AllocationRef::Integral(a) => {
            shape_check(inst, a.agents(), a.items())?;
            match property {
                p if p.accepts_fractional() => check(inst, AllocationRef::Fractional(&a.to_fractional()), p),
                Property::Prop1Goods | Property::Prop1Bads => check_share(inst, a, property),
                Property::Po => check_po(inst, a),
                _ => check_envy(inst, a, property),
            }
        }
    }
}

/// `v_i(1^m)/n`.
pub fn proportional_share(inst: &Instance, agent: usize) -> Rational {
    inst.total_value(agent) / int(inst.agents() as i64)
}

pub fn check_prop(inst: &Instance, x: &FractionalAllocation) -> PropertyVerdict {
    for i in 0..inst.agents() {
        let value = inst.utility_unchecked(i, x.row(i));
        let share = proportional_share(inst, i);
        if value < share {
            return PropertyVerdict::fail(
                Property::Prop,
                Witness::Share {
                    agent: i,
                    value,
                    share,
                    item: None,
                },
            );
        }
    }
    PropertyVerdict::pass(Property::Prop)
}

/// Prop1 for goods (add one missing good) or bads (drop one held bad).
pub fn check_share(inst: &Instance, a: &IntegralAllocation, notion: Property) -> Result<PropertyVerdict> {
    kind_check(inst, notion)?;
    for i in 0..inst.agents() {
        let value = inst.set_value(i, &a.bundle(i));
        let share = proportional_share(inst, i);
        if value >= share {
            continue;
        }
        let row = inst.row(i);
        let item = match notion {
            Property::Prop1Goods => (0..inst.items())
                .filter(|&j| !a.holds(i, j))
                .max_by(|&p, &q| row[p].cmp(&row[q]).then(q.cmp(&p))),
            Property::Prop1Bads => a
                .bundle(i)
                .into_iter()
                .min_by(|&p, &q| row[p].cmp(&row[q]).then(p.cmp(&q))),
            Property::Prop => None,
            _ => {
                return Err(Error::NotApplicable {
                    property: "share",
                    reason: format!("`{}` is not a share notion", notion.name()),
                })
            }
        };
        let adjusted = match (notion, item) {
            (Property::Prop1Goods, Some(j)) => &value + &row[j],
            (Property::Prop1Bads, Some(j)) => &value - &row[j],
            _ => value.clone(),
        };
        if adjusted < share {
            return Ok(PropertyVerdict::fail(
                notion,
                Witness::Share {
                    agent: i,
                    value,
                    share,
                    item,
                },
            ));
        }
    }
    Ok(PropertyVerdict::pass(notion))
}

pub fn check_ef(inst: &Instance, x: &FractionalAllocation) -> PropertyVerdict {
    let n = inst.agents();
    for i in 0..n {
        let own = inst.utility_unchecked(i, x.row(i));
        for h in 0..n {
            let other = inst.utility_unchecked(i, x.row(h));
            if own < other {
                return PropertyVerdict::fail(
                    Property::Ef,
                    Witness::Envy {
                        agent: i,
                        other: h,
                        own_value: own,
                        other_value: other,
                        own_item: None,
                        other_item: None,
                    },
                );
            }
        }
    }
    PropertyVerdict::pass(Property::Ef)
}

/// First failing position of the stochastic-dominance comparison of `p`
/// over `q` for the agent, or `None` if `p` dominates.
///
/// Goods instances compare prefix masses along the agent's whole order.
/// Bads and mixed instances compare prefix masses over positively valued
/// items and suffix masses over negatively valued ones (less of the worst
/// items is better); items valued zero are neutral.
pub fn sd_failure(
    inst: &Instance,
    prefs: &OrdinalPrefs,
    agent: usize,
    p: &[Rational],
    q: &[Rational],
) -> Option<usize> {
    let order = prefs.order(agent);
    let row = inst.row(agent);
    let prefix_part = |items: &[usize]| -> Option<usize> {
        let (mut a, mut b) = (zero(), zero());
        for (pos, &j) in items.iter().enumerate() {
            a += &p[j];
            b += &q[j];
            if a < b {
                return Some(pos);
            }
        }
        None
    };
    let suffix_part = |items: &[usize]| -> Option<usize> {
        let (mut a, mut b) = (zero(), zero());
        for (pos, &j) in items.iter().enumerate().rev() {
            a += &p[j];
            b += &q[j];
            if a > b {
                return Some(pos);
            }
        }
        None
    };
    match inst.kind() {
        Kind::Goods => prefix_part(order),
        Kind::Bads | Kind::Mixed => {
            let pos: Vec<usize> = order.iter().copied().filter(|&j| row[j].is_positive()).collect();
            let neg_start = order.iter().position(|&j| row[j].is_negative()).unwrap_or(order.len());
            let neg: Vec<usize> = order.iter().copied().filter(|&j| row[j].is_negative()).collect();
            prefix_part(&pos).or_else(|| suffix_part(&neg).map(|k| neg_start + k))
        }
    }
}

pub fn check_sd_ef(inst: &Instance, x: &FractionalAllocation) -> PropertyVerdict {
    let prefs = inst.ordinal_prefs();
    let n = inst.agents();
    for i in 0..n {
        for h in 0..n {
            if let Some(prefix) = sd_failure(inst, &prefs, i, x.row(i), x.row(h)) {
                return PropertyVerdict::fail(
                    Property::SdEf,
                    Witness::SdEnvy {
                        agent: i,
                        other: h,
                        prefix,
                    },
                );
            }
        }
    }
    PropertyVerdict::pass(Property::SdEf)
}

fn best_by<F: Fn(usize) -> Rational>(items: impl Iterator<Item = usize>, key: F) -> Option<usize> {
    let mut best: Option<(Rational, usize)> = None;
    for j in items {
        let k = key(j);
        if best.as_ref().is_none_or(|(b, _)| k > *b) {
            best = Some((k, j));
        }
    }
    best.map(|(_, j)| j)
}

/// Integral envy notions: EF1, SD-EF1, EFk, both more-and-less forms, and
/// w-EF1. EF and SD-EF are also accepted.
pub fn check_envy(inst: &Instance, a: &IntegralAllocation, notion: Property) -> Result<PropertyVerdict> {
    kind_check(inst, notion)?;
    shape_check(inst, a.agents(), a.items())?;
    let n = inst.agents();
    let m = inst.items();
    let bundles = a.bundles();
    let prefs = inst.ordinal_prefs();
    for i in 0..n {
        let row = inst.row(i);
        let value = |items: &[usize]| inst.set_value(i, items);
        for h in 0..n {
            if h == i {
                continue;
            }
            let own = value(&bundles[i]);
            let other = value(&bundles[h]);
            if own >= other && notion != Property::SdEf1 && notion != Property::SdEf {
                continue;
            }
            let envy = |own_value: Rational, other_value: Rational, own_item, other_item| Witness::Envy {
                agent: i,
                other: h,
                own_value,
                other_value,
                own_item,
                other_item,
            };
            let failure = match notion {
                Property::Ef | Property::SdEf => {
                    let x = a.to_fractional();
                    let v = if notion == Property::Ef { check_ef(inst, &x) } else { check_sd_ef(inst, &x) };
                    return Ok(v);
                }
                Property::Ef1 => {
                    if bundles[h].is_empty() {
                        None
                    } else {
                        let j = best_by(bundles[h].iter().copied(), |j| row[j].clone()).unwrap();
                        let after = &other - &row[j];
                        (own < after).then(|| envy(own.clone(), after, None, Some(j)))
                    }
                }
                Property::SdEf1 => sd_ef1_failure(inst, &prefs, a, i, h),
                Property::Efk(k) => {
                    let mut held: Vec<usize> = bundles[i].clone();
                    held.sort_by(|&p, &q| row[p].cmp(&row[q]).then(p.cmp(&q)));
                    let removed: Vec<usize> = held
                        .into_iter()
                        .take(k)
                        .filter(|&j| row[j].is_negative())
                        .collect();
                    let after = removed.iter().fold(own.clone(), |acc, &j| acc - &row[j]);
                    (after < other).then(|| Witness::Removal {
                        agent: i,
                        other: h,
                        removed,
                        own_value: after,
                        other_value: other.clone(),
                    })
                }
                Property::Ef11Goods => {
                    if bundles[h].is_empty() {
                        None
                    } else {
                        let jh = best_by(bundles[h].iter().copied(), |j| row[j].clone()).unwrap();
                        let ji = best_by((0..m).filter(|&j| !a.holds(i, j)), |j| row[j].clone());
                        let own_after = ji.map_or(own.clone(), |j| &own + &row[j]);
                        let other_after = &other - &row[jh];
                        (own_after < other_after).then(|| envy(own_after, other_after, ji, Some(jh)))
                    }
                }
                Property::Ef11Bads => {
                    if bundles[i].is_empty() {
                        None
                    } else {
                        let ji = best_by(bundles[i].iter().copied(), |j| -row[j].clone()).unwrap();
                        let jh = best_by((0..m).filter(|&j| !a.holds(h, j)), |j| -row[j].clone());
                        let own_after = &own - &row[ji];
                        let other_after = jh.map_or(other.clone(), |j| &other + &row[j]);
                        (own_after < other_after).then(|| envy(own_after, other_after, Some(ji), jh))
                    }
                }
                Property::WEf1 => {
                    let mut best: Option<(Rational, Option<usize>, Option<usize>)> = None;
                    let own_opts: Vec<Option<usize>> =
                        core::iter::once(None).chain(bundles[i].iter().map(|&j| Some(j))).collect();
                    let other_opts: Vec<Option<usize>> =
                        core::iter::once(None).chain(bundles[h].iter().map(|&j| Some(j))).collect();
                    for oi in &own_opts {
                        if oi.is_some_and(|j| !row[j].is_negative()) {
                            continue;
                        }
                        for oh in &other_opts {
                            if oh.is_some_and(|j| !row[j].is_positive()) {
                                continue;
                            }
                            let l = oi.map_or(own.clone(), |j| &own - &row[j]);
                            let r = oh.map_or(other.clone(), |j| &other - &row[j]);
                            let gap = l - r;
                            if best.as_ref().is_none_or(|(g, _, _)| gap > *g) {
                                best = Some((gap, *oi, *oh));
                            }
                        }
                    }
                    let (gap, oi, oh) = best.unwrap();
                    gap.is_negative().then(|| {
                        let l = oi.map_or(own.clone(), |j| &own - &row[j]);
                        let r = oh.map_or(other.clone(), |j| &other - &row[j]);
                        envy(l, r, oi, oh)
                    })
                }
                _ => {
                    return Err(Error::NotApplicable {
                        property: "envy",
                        reason: format!("`{}` is not an envy notion", notion.name()),
                    })
                }
            };
            if let Some(w) = failure {
                return Ok(PropertyVerdict::fail(notion, w));
            }
        }
    }
    Ok(PropertyVerdict::pass(notion))
}

/// SD-EF1 for one ordered pair: goods remove an item from the other
/// bundle, bads remove one from the own bundle.
fn sd_ef1_failure(
    inst: &Instance,
    prefs: &OrdinalPrefs,
    a: &IntegralAllocation,
    i: usize,
    h: usize,
) -> Option<Witness> {
    let own = a.indicator(i);
    let other = a.indicator(h);
    let plain = sd_failure(inst, prefs, i, &own, &other)?;
    let removable: Vec<usize> = match inst.kind() {
        Kind::Bads => a.bundle(i),
        _ => a.bundle(h),
    };
    if removable.is_empty() && inst.kind() != Kind::Bads {
        return None;
    }
    for j in removable {
        let (mut p, mut q) = (own.clone(), other.clone());
        if inst.kind() == Kind::Bads {
            p[j] = zero();
        } else {
            q[j] = zero();
        }
        if sd_failure(inst, prefs, i, &p, &q).is_none() {
            return None;
        }
    }
    Some(Witness::SdEnvy {
        agent: i,
        other: h,
        prefix: plain,
    })
}

/// Brute-force Pareto optimality among complete integral allocations.
pub fn check_po(inst: &Instance, a: &IntegralAllocation) -> Result<PropertyVerdict> {
    let n = inst.agents();
    let current: Vec<Rational> = (0..n).map(|i| inst.set_value(i, &a.bundle(i))).collect();
    let mut found = None;
    oracle::for_each_allocation(n, inst.items(), |b| {
        let vals: Vec<Rational> = (0..n).map(|i| inst.set_value(i, &b.bundle(i))).collect();
        let weakly = vals.iter().zip(&current).all(|(x, y)| x >= y);
        let strictly = vals.iter().zip(&current).any(|(x, y)| x > y);
        if weakly && strictly {
            found = Some(b.clone());
            false
        } else {
            true
        }
    })?;
    Ok(match found {
        Some(b) => PropertyVerdict::fail(Property::Po, Witness::DominatingIntegral(b)),
        None => PropertyVerdict::pass(Property::Po),
    })
}

/// Fractional Pareto optimality via `max Σ v_i(Y_i)` subject to
/// `v_i(Y_i) ≥ v_i(X_i)` over complete `Y`.
pub fn check_fpo(inst: &Instance, x: &FractionalAllocation) -> Result<PropertyVerdict> {
    let (n, m) = (inst.agents(), inst.items());
    let var = |i: usize, j: usize| i * m + j;
    let mut objective = vec![zero(); n * m];
    for i in 0..n {
        for j in 0..m {
            objective[var(i, j)] = inst.value(i, j).clone();
        }
    }
    let mut lp = LinearProgram::maximize(objective);
    for i in 0..n {
        let mut row = vec![zero(); n * m];
        for j in 0..m {
            row[var(i, j)] = inst.value(i, j).clone();
        }
        lp.add(row, Relation::Ge, inst.utility_unchecked(i, x.row(i)));
    }
    for j in 0..m {
        let mut row = vec![zero(); n * m];
        for i in 0..n {
            row[var(i, j)] = one();
        }
        lp.add(row, Relation::Eq, one());
    }
    let sol = lp::solve(&lp);
    if sol.status != Status::Optimal {
        return Err(Error::Lp(format!("welfare program ended as {:?}", sol.status)));
    }
    let welfare = (0..n).fold(zero(), |acc, i| acc + inst.utility_unchecked(i, x.row(i)));
    if sol.objective_value > welfare {
        let y = FractionalAllocation::new(
            (0..n).map(|i| sol.values[i * m..(i + 1) * m].to_vec()).collect(),
        )?;
        return Ok(PropertyVerdict::fail(Property::Fpo, Witness::DominatingFractional(y)));
    }
    Ok(PropertyVerdict::pass(Property::Fpo))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupScope {
    /// Every pair of non-empty groups.
    Full,
    /// Only pairs with `|S| ≤ |T|`.
    ForLess,
}

/// Largest agent count accepted by [`check_gf`].
pub const GF_MAX_AGENTS: usize = 12;

/// Group fairness over all non-empty `(S, T)` pairs, one exact program per
/// pair.
pub fn check_gf(inst: &Instance, x: &FractionalAllocation, scope: GroupScope) -> Result<PropertyVerdict> {
    let n = inst.agents();
    if n > GF_MAX_AGENTS {
        return Err(Error::SizeLimit(format!(
            "group fairness checks at most {GF_MAX_AGENTS} agents, got {n}"
        )));
    }
    let property = match scope {
        GroupScope::Full => Property::Gf,
        GroupScope::ForLess => Property::GfForLess,
    };
    let own: Vec<Rational> = (0..n).map(|i| inst.utility_unchecked(i, x.row(i))).collect();
    let members = |mask: usize| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<usize>>();
    for s_mask in 1usize..(1 << n) {
        let s = members(s_mask);
        for t_mask in 1usize..(1 << n) {
            let t = members(t_mask);
            if scope == GroupScope::ForLess && s.len() > t.len() {
                continue;
            }
            if let Some(w) = group_violation(inst, x, &own, &s, &t)? {
                return Ok(PropertyVerdict::fail(property, w));
            }
        }
    }
    Ok(PropertyVerdict::pass(property))
}

fn group_violation(
    inst: &Instance,
    x: &FractionalAllocation,
    own: &[Rational],
    s: &[usize],
    t: &[usize],
) -> Result<Option<Witness>> {
    let m = inst.items();
    let k = s.len();
    let scale = Rational::new(s.len().into(), t.len().into());
    let pool: Vec<Rational> = (0..m)
        .map(|j| t.iter().fold(zero(), |acc, &i| acc + x.get(i, j)))
        .collect();
    // Variables: Y (k × m) then δ (k).
    let vars = k * m + k;
    let mut objective = vec![zero(); vars];
    for d in objective.iter_mut().skip(k * m) {
        *d = one();
    }
    let mut lp = LinearProgram::maximize(objective);
    for (j, mass) in pool.iter().enumerate() {
        let mut row = vec![zero(); vars];
        for r in 0..k {
            row[r * m + j] = one();
        }
        lp.add(row, Relation::Eq, mass.clone());
    }
    for (r, &i) in s.iter().enumerate() {
        let mut row = vec![zero(); vars];
        for j in 0..m {
            row[r * m + j] = &scale * inst.value(i, j);
        }
        row[k * m + r] = -one();
        lp.add(row, Relation::Ge, own[i].clone());
    }
    let sol = lp::solve(&lp);
    match sol.status {
        Status::Infeasible => Ok(None),
        Status::Unbounded => Err(Error::Lp("group program is unbounded".into())),
        Status::Optimal if sol.objective_value.is_positive() => Ok(Some(Witness::Group {
            s: s.to_vec(),
            t: t.to_vec(),
            y: (0..k).map(|r| sol.values[r * m..(r + 1) * m].to_vec()).collect(),
            delta: sol.values[k * m..].to_vec(),
        })),
        Status::Optimal => Ok(None),
    }
}

/// Verdicts for a lottery: ex-ante notions on the marginal, ex-post
/// notions on every support allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Audit {
    pub ex_ante: Vec<PropertyVerdict>,
    pub ex_post: Vec<ExPostVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExPostVerdict {
    pub property: Property,
    pub holds: bool,
    /// Support index and verdict of each failing part.
    pub failures: Vec<(usize, PropertyVerdict)>,
}

impl Audit {
    pub fn all_hold(&self) -> bool {
        self.ex_ante.iter().all(|v| v.holds) && self.ex_post.iter().all(|v| v.holds)
    }
}

pub fn audit_lottery(
    inst: &Instance,
    lottery: &Lottery,
    ex_ante: &[Property],
    ex_post: &[Property],
) -> Result<Audit> {
    let x = lottery.marginal();
    let ex_ante = ex_ante
        .iter()
        .map(|&p| check(inst, AllocationRef::Fractional(&x), p))
        .collect::<Result<Vec<_>>>()?;
    let mut post = Vec::with_capacity(ex_post.len());
    for &p in ex_post {
        let mut failures = Vec::new();
        for (k, (_, a)) in lottery.support().iter().enumerate() {
            let v = check(inst, AllocationRef::Integral(a), p)?;
            if !v.holds {
                failures.push((k, v));
            }
        }
        post.push(ExPostVerdict {
            property: p,
            holds: failures.is_empty(),
            failures,
        });
    }
    Ok(Audit {
        ex_ante,
        ex_post: post,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn alloc(m: usize, bundles: &[&[usize]]) -> IntegralAllocation {
        let b: Vec<Vec<usize>> = bundles.iter().map(|x| x.to_vec()).collect();
        IntegralAllocation::from_bundles(m, &b).unwrap()
    }

    fn two_goods() -> Instance {
        Instance::from_ints(&[[1, 2], [1, 3]]).unwrap()
    }

    fn holds(inst: &Instance, a: &IntegralAllocation, p: Property) -> bool {
        check(inst, AllocationRef::Integral(a), p).unwrap().holds
    }

    #[test]
    fn proportionality_on_the_impossibility_instance() {
        let inst = two_goods();
        let a = alloc(2, &[&[0], &[1]]);
        let v = check(&inst, AllocationRef::Integral(&a), Property::Prop).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::Share {
                agent: 0,
                value: int(1),
                share: rat(3, 2),
                item: None
            })
        );
    }

    #[test]
    fn split_pair_part_is_prop1() {
        let inst = Instance::from_ints(&[[10, 6, 4, 2], [2, 10, 6, 4]]).unwrap();
        let a = alloc(4, &[&[1, 3], &[0, 2]]);
        assert!(holds(&inst, &a, Property::Prop1Goods));
    }

    #[test]
    fn equal_split_is_exactly_proportional() {
        let inst = two_goods();
        let x = FractionalAllocation::new(vec![vec![rat(1, 2); 2]; 2]).unwrap();
        assert!(check_prop(&inst, &x).holds);
        assert!(check_ef(&inst, &x).holds);
    }

    #[test]
    fn bads_example_is_ef2_not_ef1() {
        let inst = Instance::from_ints(&[[-1, -2, -3], [-1, -2, -3]]).unwrap();
        let a = alloc(3, &[&[0], &[1, 2]]);
        let v = check(&inst, AllocationRef::Integral(&a), Property::Efk(1)).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.witness, Some(Witness::Removal { agent: 1, other: 0, .. })));
        assert!(holds(&inst, &a, Property::Efk(2)));
        assert_eq!(Property::resolve("ef1", Kind::Bads).unwrap(), Property::Efk(1));
    }

    #[test]
    fn more_and_less_rescues_an_empty_bundle() {
        let inst = two_goods();
        let a = alloc(2, &[&[0, 1], &[]]);
        let v = check(&inst, AllocationRef::Integral(&a), Property::Ef1).unwrap();
        assert!(!v.holds);
        assert!(holds(&inst, &a, Property::Ef11Goods));
    }

    #[test]
    fn efficiency_on_the_impossibility_instance() {
        let inst = two_goods();
        let a = alloc(2, &[&[0], &[1]]);
        let b = alloc(2, &[&[1], &[0]]);
        assert!(holds(&inst, &a, Property::Fpo));
        let v = check(&inst, AllocationRef::Integral(&b), Property::Fpo).unwrap();
        assert!(!v.holds);
        let Some(Witness::DominatingFractional(y)) = v.witness else {
            panic!("missing witness")
        };
        assert!(y.is_complete());
        assert!(inst.utility(0, y.row(0)).unwrap() >= int(2));
        assert!(inst.utility(1, y.row(1)).unwrap() >= int(1));
        assert!(holds(&inst, &a, Property::Po));
        let single = Instance::from_ints(&[[1, 2]]).unwrap();
        let all = alloc(2, &[&[0, 1]]);
        assert!(holds(&single, &all, Property::Po));
        assert!(holds(&single, &all, Property::Fpo));
    }

    #[test]
    fn group_fairness_of_the_nash_allocation() {
        let inst = two_goods();
        let x = FractionalAllocation::new(vec![
            vec![one(), rat(1, 4)],
            vec![zero(), rat(3, 4)],
        ])
        .unwrap();
        assert!(check_gf(&inst, &x, GroupScope::Full).unwrap().holds);
        let a = alloc(2, &[&[0], &[1]]).to_fractional();
        let v = check_gf(&inst, &a, GroupScope::Full).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn kind_mismatches_are_errors() {
        let inst = Instance::from_ints(&[[2, -1], [-1, 2]]).unwrap();
        let a = alloc(2, &[&[0], &[1]]);
        assert!(matches!(
            check(&inst, AllocationRef::Integral(&a), Property::Ef1),
            Err(Error::KindMismatch { .. })
        ));
        assert!(Property::resolve("ef1", Kind::Mixed).is_err());
        assert!(holds(&inst, &a, Property::WEf1));
    }

    #[test]
    fn sd_envy_for_bads_uses_worst_items() {
        let inst = Instance::from_ints(&[[-1, -2]]).unwrap();
        let prefs = inst.ordinal_prefs();
        let nothing = [zero(), zero()];
        let worst = [zero(), one()];
        assert!(sd_failure(&inst, &prefs, 0, &nothing, &worst).is_none());
        assert!(sd_failure(&inst, &prefs, 0, &worst, &nothing).is_some());
    }

    #[test]
    fn lottery_audit_on_round_robin_example() {
        let inst = two_goods();
        let a = alloc(2, &[&[0], &[1]]);
        let l = Lottery::certain(a);
        let audit = audit_lottery(&inst, &l, &[Property::Prop], &[Property::Ef1, Property::Fpo]).unwrap();
        assert!(!audit.ex_ante[0].holds);
        assert!(audit.ex_post.iter().all(|v| v.holds));
        assert!(!audit.all_hold());
    }
}
