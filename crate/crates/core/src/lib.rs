//! Exact zero-localization: Z-stability moduli as data, certified uniform
//! bounds, a certified interval-halving root finder and a falsifier for
//! tolerance-based stopping rules.
//!
//! Every quantity is an exact rational. Range enclosures, distances to zero
//! sets and stopping decisions are computed without rounding, so every
//! certificate and every refutation produced here can be re-checked by
//! plain rational evaluation.
//!
//! The crate is `no_std` and only needs `alloc`. IO, serialization and the
//! command-line runner live in the `zstab` companion crate.

#![no_std]
#![allow(clippy::result_large_err)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod error;
pub mod func;
pub mod isolation;
pub mod num;
pub mod poly;
pub mod rootfind;
pub mod uniform;
pub mod zstability;

pub use error::{Error, Result};
pub use func::{Derivative, InfBracket, PiecewiseLinear, RealFunc, Spike, SpikeTerm};
pub use num::{ComplexRational, RatInterval, Rational};
pub use poly::Poly;
pub use zstability::{LocatedZeroSet, Modulus, ZeroEnumeration};
