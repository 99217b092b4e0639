//! The simultaneous eating protocol in exact event-driven time.
//!
//! Every agent eats at unit speed from her highest-ranked item that still
//! has mass left. Time advances from one exhaustion event to the next, so
//! the simulation is exact.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::model::{FractionalAllocation, OrdinalPrefs};
use crate::rational::{sum, zero, Rational};

/// Snapshot of the protocol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EatingState {
    /// Mass left per item.
    pub remaining: Vec<Rational>,
    /// `eaten[i][j]`: how much of item `j` agent `i` has consumed.
    pub eaten: Vec<Vec<Rational>>,
    /// Time elapsed.
    pub clock: Rational,
}

/// Runs the protocol for `duration` time units or until nothing is left,
/// whichever comes first.
pub fn run(prefs: &OrdinalPrefs, available: &[Rational], duration: &Rational) -> EatingState {
    let n = prefs.agents();
    let m = available.len();
    let mut state = EatingState {
        remaining: available.to_vec(),
        eaten: vec![vec![zero(); m]; n],
        clock: zero(),
    };
    let mut eaters = vec![0usize; m];
    let mut target: Vec<Option<usize>> = vec![None; n];
    while state.clock < *duration {
        eaters.iter_mut().for_each(|c| *c = 0);
        for (i, t) in target.iter_mut().enumerate() {
            *t = prefs
                .order(i)
                .iter()
                .copied()
                .find(|&j| state.remaining[j].is_positive());
            if let Some(j) = *t {
                eaters[j] += 1;
            }
        }
        let mut dt = duration - &state.clock;
        let mut anyone = false;
        for j in 0..m {
            if eaters[j] > 0 {
                anyone = true;
                let until_empty = &state.remaining[j] / Rational::from_integer(eaters[j].into());
                if until_empty < dt {
                    dt = until_empty;
                }
            }
        }
        if !anyone {
            break;
        }
        for (i, t) in target.iter().enumerate() {
            if let Some(j) = *t {
                state.eaten[i][j] += &dt;
                state.remaining[j] -= &dt;
            }
        }
        state.clock += dt;
    }
    state
}

/// Eaten matrix after running for `duration`.
pub fn eat(prefs: &OrdinalPrefs, available: &[Rational], duration: &Rational) -> FractionalAllocation {
    FractionalAllocation::new(run(prefs, available, duration).eaten)
        .expect("eaten mass never exceeds the available mass")
}

/// Runs for `⌈total mass / n⌉` time units; on a full instance this is the
/// probabilistic serial outcome.
pub fn eat_full(prefs: &OrdinalPrefs, available: &[Rational]) -> FractionalAllocation {
    let n = Rational::from_integer(prefs.agents().into());
    let horizon = (sum(available) / n).ceil();
    if horizon.is_zero() {
        return FractionalAllocation::zeros(prefs.agents(), available.len());
    }
    eat(prefs, available, &horizon)
}
