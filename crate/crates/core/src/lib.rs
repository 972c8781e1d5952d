//! Covering fractional-repetition codes with zero skip cost.
//!
//! Covering designs are read from block lists and turned into storage
//! arrays whose columns are the blocks. Repairing an erased column copies
//! values from at most `ℓ` helper columns, and the skip cost counts the
//! rows a helper passes over while reading. This crate builds arrays with
//! zero skip cost and verifies that claim exactly.

pub mod cli;
pub mod constructions;
pub mod designs;
pub mod randomizer;
pub mod rational;
pub mod skipcost;

pub use designs::{CoveringDesign, DesignParams};
pub use rational::Rational;
pub use skipcost::CfrArray;
