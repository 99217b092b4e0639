//! Randomized allocation of indivisible items: lotteries that are exactly
//! fair in expectation and approximately fair after the draw.
//!
//! All arithmetic is exact (see [`rational`]); floating point appears only
//! inside the Nash-welfare solver's inner loop and in diagnostic fields.
//! The crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decomp;
pub mod eating;
pub mod error;
pub mod lp;
mod linalg;
pub mod mnw;
pub mod model;
pub mod oracle;
pub mod properties;
pub mod rational;
pub mod rng;
pub mod rounding;
pub mod rps;

pub use error::{Error, Result};
pub use model::{
    sd_dominates, FractionalAllocation, Instance, IntegralAllocation, Kind, Lottery, OrdinalPrefs,
};
pub use rational::Rational;
