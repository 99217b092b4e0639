//! Seeded, portable sampling against exact weights.

use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{zero, Rational};

/// ChaCha8 stream; the same seed gives the same draws on every platform.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw `k / 2^63` with `0 ≤ k < 2^63`.
    pub fn uniform(&mut self) -> Rational {
        let k = self.rng.next_u64() >> 1;
        Rational::new(BigInt::from(k), BigInt::from(1u64 << 63))
    }

    /// Index `k` with probability `weights[k]`, for weights summing to one.
    pub fn pick(&mut self, weights: &[Rational]) -> usize {
        let u = self.uniform();
        let mut acc = zero();
        for (k, w) in weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return k;
            }
        }
        weights.len() - 1
    }

    /// Uniform index below `len`.
    pub fn below(&mut self, len: usize) -> usize {
        let u = self.uniform() * Rational::from_integer(len.into());
        num_traits::ToPrimitive::to_usize(&u.floor().to_integer()).unwrap_or(0).min(len - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat};

    #[test]
    fn same_seed_same_stream() {
        let w = [rat(1, 3), rat(1, 3), rat(1, 3)];
        let a: Vec<usize> = {
            let mut s = Sampler::new(7);
            (0..50).map(|_| s.pick(&w)).collect()
        };
        let mut s = Sampler::new(7);
        let b: Vec<usize> = (0..50).map(|_| s.pick(&w)).collect();
        assert_eq!(a, b);
        assert!(a.contains(&0) && a.contains(&1) && a.contains(&2));
    }

    #[test]
    fn point_mass_is_always_picked() {
        let mut s = Sampler::new(1);
        for _ in 0..20 {
            assert_eq!(s.pick(&[zero(), one()]), 1);
            assert!(s.below(3) < 3);
        }
    }
}
