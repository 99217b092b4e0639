//! Implementing a fractional allocation over integral allocations that stay
//! within one item of it for every agent.
//!
//! The lottery comes from decomposing `X` under the prefix quotas: for each
//! agent and each prefix of her order, every part receives the floor or the
//! ceiling of what `X` gives her from that prefix. Any such part loses at
//! most one lost item's worth of utility and gains at most one gained
//! item's worth.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::decomp::{bihierarchy_decompose, prefix_constraints};
use crate::error::{Error, Result};
use crate::mnw::solve_mnw;
use crate::model::{FractionalAllocation, Instance, IntegralAllocation, Kind, Lottery};
use crate::properties::{check_prop, proportional_share, Witness};
use crate::rational::{one, Rational};

fn require(inst: &Instance, kind: Kind) -> Result<()> {
    if inst.kind() != kind {
        return Err(Error::KindMismatch {
            expected: kind.name(),
            found: inst.kind().name(),
        });
    }
    Ok(())
}

fn validate(inst: &Instance, x: &FractionalAllocation) -> Result<()> {
    if x.agents() != inst.agents() || x.items() != inst.items() {
        return Err(Error::Dimension(alloc::format!(
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
    Ok(())
}

/// Lottery with marginal `x` whose parts meet every prefix quota of
/// `inst`'s ordinal preferences.
pub fn implement_with_utility_guarantee(inst: &Instance, x: &FractionalAllocation) -> Result<Lottery> {
    validate(inst, x)?;
    let h = prefix_constraints(&inst.ordinal_prefs(), x)?;
    bihierarchy_decompose(x, &h)
}

/// How one part relates to `X` for one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    Equal,
    /// Utility dropped; adding `item` (lost, with `X_ig > 0`) overshoots.
    Deficit { item: usize },
    /// Utility rose; removing `item` (gained, with `X_ig < 1`) undershoots.
    Surplus { item: usize },
    /// Neither bound can be certified.
    Broken,
}

impl Guarantee {
    pub fn holds(self) -> bool {
        self != Guarantee::Broken
    }
}

/// Certifies the per-agent bound for part `a`, picking the first qualifying
/// item in the agent's order.
pub fn utility_guarantee(inst: &Instance, x: &FractionalAllocation, a: &IntegralAllocation, agent: usize) -> Guarantee {
    let target = inst.utility_unchecked(agent, x.row(agent));
    let value = inst.set_value(agent, &a.bundle(agent));
    let prefs = inst.ordinal_prefs();
    let order = prefs.order(agent);
    if value < target {
        order
            .iter()
            .copied()
            .find(|&g| !a.holds(agent, g) && x.get(agent, g).is_positive() && &value + inst.value(agent, g) > target)
            .map_or(Guarantee::Broken, |item| Guarantee::Deficit { item })
    } else if value > target {
        order
            .iter()
            .copied()
            .find(|&g| a.holds(agent, g) && *x.get(agent, g) < one() && &value - inst.value(agent, g) < target)
            .map_or(Guarantee::Broken, |item| Guarantee::Surplus { item })
    } else {
        Guarantee::Equal
    }
}

/// First `(part index, agent)` whose bound fails, if any.
pub fn guarantee_failure(inst: &Instance, x: &FractionalAllocation, lottery: &Lottery) -> Option<(usize, usize)> {
    lottery.support().iter().enumerate().find_map(|(k, (_, a))| {
        (0..inst.agents())
            .find(|&i| !utility_guarantee(inst, x, a, i).holds())
            .map(|i| (k, i))
    })
}

/// Implementation of a proportional goods allocation over Prop1 parts.
pub fn prop1_lottery(inst: &Instance, x: &FractionalAllocation) -> Result<Lottery> {
    require(inst, Kind::Goods)?;
    validate(inst, x)?;
    let verdict = check_prop(inst, x);
    if let Some(Witness::Share { agent, .. }) = verdict.witness {
        return Err(Error::NotProportional { agent });
    }
    implement_with_utility_guarantee(inst, x)
}

/// Maximum Nash welfare, implemented with the utility guarantee.
pub fn gf_lottery(inst: &Instance, tol: f64) -> Result<Lottery> {
    require(inst, Kind::Goods)?;
    let sol = solve_mnw(inst, tol)?;
    implement_with_utility_guarantee(inst, &sol.x)
}

/// Implementation of a bads allocation: decomposition runs on the negated
/// values, so each part is within one bad of `x` for every agent.
pub fn prop1_ef11_lottery_bads(inst: &Instance, x: &FractionalAllocation) -> Result<Lottery> {
    require(inst, Kind::Bads)?;
    implement_with_utility_guarantee(&inst.negated(), x)
}

/// First agent for whom Prop1 fails in its strict form: below the share,
/// and no single added good (goods) or removed bad (bads) lifts her
/// strictly above it.
pub fn strict_prop1_failure(inst: &Instance, a: &IntegralAllocation) -> Option<usize> {
    (0..inst.agents()).find(|&i| {
        let share = proportional_share(inst, i);
        let value = inst.set_value(i, &a.bundle(i));
        if value >= share {
            return false;
        }
        let fixed = (0..inst.items()).any(|g| match inst.kind() {
            Kind::Bads => a.holds(i, g) && &value - inst.value(i, g) > share,
            _ => !a.holds(i, g) && &value + inst.value(i, g) > share,
        });
        !fixed
    })
}

/// The more-and-less envy chain for a part `a` of an MNW implementation:
/// for every ordered pair `(i, h)` some `g⁺` and `g⁻` give
/// `v_h(A_i \ g⁺) < v_h(X_h) < v_h(A_h ∪ g⁻)`. A missing item is a dummy of
/// value zero, allowed when the agent is already on the right side of
/// `X`; dummy sides are checked weakly. Agents who value nothing cannot
/// envy and are skipped. Returns the first failing pair.
pub fn ef11_chain_failure(inst: &Instance, x: &FractionalAllocation, a: &IntegralAllocation) -> Option<(usize, usize)> {
    let n = inst.agents();
    let fractional: Vec<Rational> = (0..n).map(|i| inst.utility_unchecked(i, x.row(i))).collect();
    let integral: Vec<Rational> = (0..n).map(|i| inst.set_value(i, &a.bundle(i))).collect();
    let one = one();
    for i in 0..n {
        // candidates for g⁺ of agent i, None for the dummy
        let mut plus: Vec<Option<usize>> = (0..inst.items())
            .filter(|&g| {
                a.holds(i, g) && *x.get(i, g) < one && &integral[i] - inst.value(i, g) < fractional[i]
            })
            .map(Some)
            .collect();
        if integral[i] <= fractional[i] {
            plus.push(None);
        }
        for h in (0..n).filter(|&h| h != i && !inst.is_degenerate(h)) {
            let mut minus: Vec<Option<usize>> = (0..inst.items())
                .filter(|&g| {
                    !a.holds(h, g) && x.get(h, g).is_positive() && &integral[h] + inst.value(h, g) > fractional[h]
                })
                .map(Some)
                .collect();
            if integral[h] >= fractional[h] {
                minus.push(None);
            }
            let other = inst.set_value(h, &a.bundle(i));
            let left = plus.iter().any(|p| match p {
                Some(g) => &other - inst.value(h, *g) < fractional[h],
                None => other <= fractional[h],
            });
            let right = minus.iter().any(|q| match q {
                Some(g) => &integral[h] + inst.value(h, *g) > fractional[h],
                None => integral[h] >= fractional[h],
            });
            if !(left && right) {
                return Some((h, i));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mnw::DEFAULT_TOL;
    use crate::properties::{check, AllocationRef, Property};
    use crate::rational::{int, rat};

    fn split_pair() -> (Instance, FractionalAllocation) {
        let inst = Instance::from_ints(&[[10, 6, 4, 2], [2, 10, 6, 4]]).unwrap();
        let (a, b) = (rat(3, 5), rat(2, 5));
        let x = FractionalAllocation::new(vec![
            vec![a.clone(), b.clone(), b.clone(), a.clone()],
            vec![b.clone(), a.clone(), a, b],
        ]);
        (inst, x.unwrap())
    }

    #[test]
    fn two_by_two_mnw_lottery() {
        let inst = Instance::from_ints(&[[1, 2], [1, 3]]).unwrap();
        let l = gf_lottery(&inst, DEFAULT_TOL).unwrap().sorted();
        let a = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        let b = IntegralAllocation::from_bundles(2, &[vec![0, 1], vec![]]).unwrap();
        let mut expect = vec![(rat(3, 4), a), (rat(1, 4), b)];
        expect.sort_by(|p, q| p.1.cmp(&q.1));
        assert_eq!(l.support(), expect.as_slice());
        let x = l.marginal();
        assert_eq!(guarantee_failure(&inst, &x, &l), None);
        for (_, part) in l.support() {
            assert_eq!(strict_prop1_failure(&inst, part), None);
            assert_eq!(ef11_chain_failure(&inst, &x, part), None);
        }
    }

    #[test]
    fn integral_input_is_returned() {
        let inst = Instance::from_ints(&[[1, 2], [1, 3]]).unwrap();
        let a = IntegralAllocation::from_bundles(2, &[vec![1], vec![0]]).unwrap();
        let l = implement_with_utility_guarantee(&inst, &a.to_fractional()).unwrap();
        assert_eq!(l.support(), &[(one(), a)]);
    }

    #[test]
    fn equal_split_is_prop1() {
        let inst = Instance::from_ints(&[[5, 1, 2], [1, 1, 7], [3, 3, 3]]).unwrap();
        let third = rat(1, 3);
        let x = FractionalAllocation::new(vec![vec![third.clone(); 3]; 3]).unwrap();
        let l = prop1_lottery(&inst, &x).unwrap();
        assert_eq!(l.marginal(), x);
        for (_, a) in l.support() {
            assert_eq!(strict_prop1_failure(&inst, a), None);
        }
        let unfair = IntegralAllocation::from_bundles(3, &[vec![0, 1, 2], vec![], vec![]]).unwrap();
        assert_eq!(
            prop1_lottery(&inst, &unfair.to_fractional()),
            Err(Error::NotProportional { agent: 1 })
        );
    }

    #[test]
    fn split_pair_parts_are_prop1() {
        let (inst, x) = split_pair();
        let l = prop1_lottery(&inst, &x).unwrap();
        assert_eq!(l.marginal(), x);
        for (_, a) in l.support() {
            assert!(check(&inst, AllocationRef::Integral(a), Property::Prop1Goods).unwrap().holds);
        }
    }

    #[test]
    fn bads_lottery() {
        let inst = Instance::from_ints(&[[-1, -2], [-2, -1]]).unwrap();
        let x = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap().to_fractional();
        let l = prop1_ef11_lottery_bads(&inst, &x).unwrap();
        assert_eq!(l.len(), 1);
        let a = &l.support()[0].1;
        assert!(check(&inst, AllocationRef::Integral(a), Property::Ef).unwrap().holds);
        let sym = Instance::from_ints(&[[-1, -1, -2, -2], [-1, -1, -2, -2]]).unwrap();
        let half = rat(1, 2);
        let x = FractionalAllocation::new(vec![vec![half.clone(); 4], vec![half; 4]]).unwrap();
        let l = prop1_ef11_lottery_bads(&sym, &x).unwrap();
        for (_, a) in l.support() {
            assert_eq!(strict_prop1_failure(&sym, a), None);
            assert!(check(&sym, AllocationRef::Integral(a), Property::Ef11Bads).unwrap().holds);
        }
        assert_eq!(sym.set_value(0, &[0, 2]), int(-3));
    }
}
