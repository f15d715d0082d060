//! Power of F-tests at fixed alternatives and confidence intervals for that
//! power, built by mapping confidence intervals for the normal scale
//! parameter σ through the (strictly decreasing) power function.
//!
//! The crate is `no_std` and allocation free. Monte Carlo drivers, file
//! formats and the command-line tool live in the `fpower` crate.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod dist;
pub mod interval;
pub mod power;
pub mod quad;
pub mod rng;
pub mod roots;
pub mod specfun;

pub use error::{Error, Result};
