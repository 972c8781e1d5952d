//! The three array constructions: duplication, combination with a design of
//! strength `t - 1`, and the recursive `q`-fold lift.

mod recursive;
mod simple;

use std::fmt;

use thiserror::Error;

use crate::skipcost::ArrayError;

pub use recursive::{
    asymptotic_expansion, construct_recursive, predict_recursive_size, recursive_families, RecursiveBuild,
    RecursiveFamilies, SizePrediction,
};
pub use simple::{combination_size, construct_combination, construct_duplicate};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("construction needs t >= 2 (got t={t})")]
    StrengthTooSmall { t: u32 },
    #[error("need t <= k (got t={t}, k={k})")]
    StrengthAboveBlockSize { t: u32, k: u32 },
    #[error("design parameters do not fit: expected {expected}, found {found}")]
    ParamMismatch { expected: String, found: String },
    #[error("the base design repeats a block; remove duplicates first")]
    RepeatedBlocks,
    #[error("the lifted point set would have {v} points, above the supported {max}")]
    TooManyPoints { v: u32, max: u32 },
    #[error("generated {generated} distinct blocks but the size formula predicts {predicted}")]
    SizeMismatch { predicted: i128, generated: usize },
    #[error("block families {first} and {second} share a block")]
    FamiliesOverlap { first: &'static str, second: &'static str },
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// `a mod̄ b`: the representative of `a` modulo `b` in `[1, b]`.
pub fn mod_bar(a: u64, b: u64) -> u64 {
    assert!(a >= 1 && b >= 1, "mod_bar needs positive arguments");
    (a - 1) % b + 1
}

/// Which branch of the recursive construction applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecursiveCase {
    /// `r = t - 1`
    REqTm1,
    /// `floor(t/q) <= r <= t - 2`
    Mid,
    /// `1 <= r <= floor(t/q) - 1`; the extra families B2 and B4 appear
    Low,
}

impl fmt::Display for RecursiveCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecursiveCase::REqTm1 => "R_EQ_TM1",
            RecursiveCase::Mid => "MID",
            RecursiveCase::Low => "LOW",
        })
    }
}

/// `q = ceil(k/(t-1))`, `r = k mod̄ (t-1)`, so `k = (q-1)(t-1) + r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RecursiveParams {
    pub t: u32,
    pub k: u32,
    pub q: u32,
    pub r: u32,
    pub case: RecursiveCase,
}

impl RecursiveParams {
    pub fn new(t: u32, k: u32) -> Result<Self, ConstructionError> {
        if t < 2 {
            return Err(ConstructionError::StrengthTooSmall { t });
        }
        if t > k {
            return Err(ConstructionError::StrengthAboveBlockSize { t, k });
        }
        let q = k.div_ceil(t - 1);
        let r = mod_bar(k as u64, (t - 1) as u64) as u32;
        let case = if r == t - 1 {
            RecursiveCase::REqTm1
        } else if r >= t / q {
            RecursiveCase::Mid
        } else {
            RecursiveCase::Low
        };
        Ok(RecursiveParams { t, k, q, r, case })
    }

    /// The values of `m` indexing B2 and B4: `r+1 ..= floor(t/q)`, empty
    /// outside the LOW case.
    pub fn m_range(&self) -> std::ops::RangeInclusive<u32> {
        self.r + 1..=self.t / self.q
    }
}
