//! Exhaustive enumerations over complete integral allocations, for small
//! instances and tests.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Instance, IntegralAllocation};
use crate::properties::{check_envy, Property};
use crate::rational::{one, Rational};

/// Largest `n^m` the enumerators accept.
pub const ENUMERATION_LIMIT: u128 = 2_000_000;

fn guard(n: usize, m: usize) -> Result<()> {
    let count = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit(format!(
            "{n}^{m} allocations exceed the enumeration limit of {ENUMERATION_LIMIT}"
        )));
    }
    Ok(())
}

/// Calls `visit` on every complete allocation in lexicographic owner
/// order until it returns `false`.
pub fn for_each_allocation<F>(n: usize, m: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&IntegralAllocation) -> bool,
{
    guard(n, m)?;
    let mut owners = vec![0usize; m];
    let mut a = IntegralAllocation::from_owners(n, vec![Some(0); m])?;
    loop {
        if !visit(&a) {
            return Ok(());
        }
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            owners[k] += 1;
            if owners[k] < n {
                a.assign(k, Some(owners[k]));
                break;
            }
            owners[k] = 0;
            a.assign(k, Some(0));
        }
    }
}

pub fn all_allocations(n: usize, m: usize) -> Result<Vec<IntegralAllocation>> {
    let mut out = Vec::new();
    for_each_allocation(n, m, |a| {
        out.push(a.clone());
        true
    })?;
    Ok(out)
}

/// Allocation with the largest Nash product (first found on ties).
pub fn nash_argmax(inst: &Instance) -> Result<(IntegralAllocation, Rational)> {
    let mut best: Option<(IntegralAllocation, Rational)> = None;
    for_each_allocation(inst.agents(), inst.items(), |a| {
        let product = (0..inst.agents()).fold(one(), |acc, i| acc * inst.set_value(i, &a.bundle(i)));
        if best.as_ref().is_none_or(|(_, p)| product > *p) {
            best = Some((a.clone(), product));
        }
        true
    })?;
    Ok(best.expect("at least one allocation"))
}

/// Every complete EF1 allocation (goods form).
pub fn ef1_allocations(inst: &Instance) -> Result<Vec<IntegralAllocation>> {
    let mut out = Vec::new();
    let mut err = None;
    for_each_allocation(inst.agents(), inst.items(), |a| match check_envy(inst, a, Property::Ef1) {
        Ok(v) => {
            if v.holds {
                out.push(a.clone());
            }
            true
        }
        Err(e) => {
            err = Some(e);
            false
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn counts_and_limits() {
        assert_eq!(all_allocations(2, 3).unwrap().len(), 8);
        assert_eq!(all_allocations(1, 4).unwrap().len(), 1);
        assert!(matches!(all_allocations(10, 7), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn impossibility_instance_has_two_ef1_allocations() {
        let inst = Instance::from_ints(&[[1, 2], [1, 3]]).unwrap();
        let ef1 = ef1_allocations(&inst).unwrap();
        let a = IntegralAllocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        let b = IntegralAllocation::from_bundles(2, &[vec![1], vec![0]]).unwrap();
        assert_eq!(ef1.len(), 2);
        assert!(ef1.contains(&a) && ef1.contains(&b));
    }

    #[test]
    fn nash_argmax_small() {
        let inst = Instance::from_ints(&[[1, 2], [1, 3]]).unwrap();
        let (_, p) = nash_argmax(&inst).unwrap();
        assert_eq!(p, int(3));
    }
}
