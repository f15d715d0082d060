//! Monte Carlo experiments, file formats and the `fpower` command-line tool
//! on top of the `fpower-core` numerics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod format;
pub mod mcsim;
