//! Covering designs: parameters, blocks, the plain-text block-list format and
//! exact checks of the covering property and the classical counting bounds.
//!
//! A `(t, k, v)` covering design is a multiset of `k`-subsets (blocks) of the
//! point set `[v] = {1, ..., v}` such that every `t`-subset of points lies in
//! at least one block. Blocks are kept sorted; repeated blocks are legal.

use std::fmt;
use std::fs;
use std::path::Path;

use itertools::Itertools;
use thiserror::Error;

use crate::rational::{binomial, Rational};

/// Largest supported point count. Point sets are stored as 128-bit masks.
pub const MAX_POINTS: u32 = 128;

/// Above this many `t`-subsets, [`CoveringDesign::verify_covering`] stops
/// using a rank bitmap and tests each subset against the blocks directly.
const BITMAP_LIMIT: u128 = 1 << 28;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("invalid design parameters (t={t}, k={k}, v={v}): need 1 <= t <= k <= v <= {MAX_POINTS}")]
    InvalidParams { t: u32, k: u32, v: u32 },
    #[error("line {line}: malformed token {token:?}")]
    Parse { line: usize, token: String },
    #[error("line {line}: point {value} is outside [1, {v}]")]
    Range { line: usize, value: u64, v: u32 },
    #[error("line {line}: block has {found} points, expected k={k}")]
    Arity { line: usize, found: usize, k: u32 },
    #[error("line {line}: point {value} appears twice in one block")]
    RepeatedPoint { line: usize, value: u32 },
    #[error("block #{index}: {reason}")]
    InvalidBlock { index: usize, reason: String },
    #[error("s={s} is outside [1, t={t}]")]
    StrengthOutOfRange { s: u32, t: u32 },
    #[error("the locality test needs t >= 2 (got t={t})")]
    StrengthTooSmall { t: u32 },
    #[error("multiplier must be at least 1")]
    ZeroMultiplier,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// The `(t, k, v)` triple of a covering design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DesignParams {
    t: u32,
    k: u32,
    v: u32,
}

impl DesignParams {
    pub fn new(t: u32, k: u32, v: u32) -> Result<Self, DesignError> {
        if t == 0 || t > k || k > v || v > MAX_POINTS {
            return Err(DesignError::InvalidParams { t, k, v });
        }
        Ok(DesignParams { t, k, v })
    }

    /// Strength: every `t`-subset must be covered.
    pub fn t(&self) -> u32 {
        self.t
    }

    /// Block size.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of points.
    pub fn v(&self) -> u32 {
        self.v
    }

    /// Default repair locality `ceil(k / (t - 1))`; `None` when `t = 1`.
    pub fn default_locality(&self) -> Option<usize> {
        (self.t >= 2).then(|| self.k.div_ceil(self.t - 1) as usize)
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.t, self.k, self.v)
    }
}

/// A set of points in canonical (ascending) order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(Vec<u32>);

impl Block {
    /// Sorts the points. Rejects zero, points above [`MAX_POINTS`] and repeats.
    pub fn new(mut elements: Vec<u32>) -> Result<Self, String> {
        elements.sort_unstable();
        if let Some(&first) = elements.first() {
            if first == 0 {
                return Err("point 0 is not in [1, v]".into());
            }
        }
        if let Some(&last) = elements.last() {
            if last > MAX_POINTS {
                return Err(format!("point {last} exceeds {MAX_POINTS}"));
            }
        }
        if let Some((a, _)) = elements.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(format!("point {a} repeated"));
        }
        Ok(Block(elements))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, point: u32) -> bool {
        self.0.binary_search(&point).is_ok()
    }

    /// Bit `p - 1` is set for every point `p`.
    pub fn mask(&self) -> u128 {
        point_mask(&self.0)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Bit `p - 1` is set for every point `p` in `points`.
pub fn point_mask(points: &[u32]) -> u128 {
    points.iter().fold(0u128, |m, &p| m | 1u128 << (p - 1))
}

/// Points of a mask, ascending.
pub fn mask_points(mut mask: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

/// A multiset of `k`-blocks over `[v]`, in file order.
///
/// Construction checks block sizes and ranges only; the covering property is
/// checked separately by [`CoveringDesign::verify_covering`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringDesign {
    params: DesignParams,
    blocks: Vec<Block>,
}

impl CoveringDesign {
    pub fn new(params: DesignParams, blocks: Vec<Block>) -> Result<Self, DesignError> {
        for (index, block) in blocks.iter().enumerate() {
            if block.len() != params.k as usize {
                return Err(DesignError::InvalidBlock {
                    index,
                    reason: format!("{} points, expected k={}", block.len(), params.k),
                });
            }
            if block.elements().last().is_some_and(|&p| p > params.v) {
                return Err(DesignError::InvalidBlock {
                    index,
                    reason: format!("point outside [1, {}]", params.v),
                });
            }
        }
        Ok(CoveringDesign { params, blocks })
    }

    /// Parses a block list: one block per line, whitespace-separated 1-based
    /// points. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, params: DesignParams) -> Result<Self, DesignError> {
        let mut blocks = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut points = Vec::with_capacity(params.k as usize);
            for token in trimmed.split_whitespace() {
                let value: u64 = token.parse().map_err(|_| DesignError::Parse {
                    line,
                    token: token.to_string(),
                })?;
                if value == 0 || value > params.v as u64 {
                    return Err(DesignError::Range { line, value, v: params.v });
                }
                points.push(value as u32);
            }
            if points.len() != params.k as usize {
                return Err(DesignError::Arity { line, found: points.len(), k: params.k });
            }
            points.sort_unstable();
            if let Some((&a, _)) = points.iter().tuple_windows().find(|(a, b)| a == b) {
                return Err(DesignError::RepeatedPoint { line, value: a });
            }
            blocks.push(Block(points));
        }
        Ok(CoveringDesign { params, blocks })
    }

    pub fn from_path(path: impl AsRef<Path>, params: DesignParams) -> Result<Self, DesignError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| DesignError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, params)
    }

    /// One block per line, ascending, space-separated, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for block in &self.blocks {
            out.push_str(&block.elements().iter().join(" "));
            out.push('\n');
        }
        out
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True when some block occurs more than once.
    pub fn has_repeated_blocks(&self) -> bool {
        let mut sorted: Vec<&Block> = self.blocks.iter().collect();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    /// The design with repeated blocks removed, keeping first occurrences in
    /// file order.
    pub fn distinct(&self) -> CoveringDesign {
        let mut seen = std::collections::HashSet::new();
        let blocks = self
            .blocks
            .iter()
            .filter(|b| seen.insert(b.mask()))
            .cloned()
            .collect();
        CoveringDesign { params: self.params, blocks }
    }

    /// Number of blocks that contain every point of `mask`.
    pub fn blocks_containing(&self, mask: u128) -> usize {
        self.blocks.iter().filter(|b| b.mask() & mask == mask).count()
    }

    /// The `t`-subsets of `[v]` contained in no block, in lexicographic order.
    /// An empty result means the design covers.
    pub fn verify_covering(&self) -> Vec<Vec<u32>> {
        let DesignParams { t, v, .. } = self.params;
        let total = binomial(v as u64, t as u64) as u128;
        if total <= BITMAP_LIMIT {
            let ranks = ColexRanker::new(v, t);
            let mut covered = vec![0u64; (total as usize).div_ceil(64)];
            for block in &self.blocks {
                for sub in block.elements().iter().copied().combinations(t as usize) {
                    let r = ranks.rank(&sub);
                    covered[r / 64] |= 1 << (r % 64);
                }
            }
            (1..=v)
                .combinations(t as usize)
                .filter(|sub| {
                    let r = ranks.rank(sub);
                    covered[r / 64] >> (r % 64) & 1 == 0
                })
                .collect()
        } else {
            let masks: Vec<u128> = self.blocks.iter().map(Block::mask).collect();
            (1..=v)
                .combinations(t as usize)
                .filter(|sub| {
                    let m = point_mask(sub);
                    !masks.iter().any(|b| b & m == m)
                })
                .collect()
        }
    }

    pub fn is_covering(&self) -> bool {
        self.verify_covering().is_empty()
    }
}

/// Colexicographic ranks of `t`-subsets of `[v]`.
struct ColexRanker {
    t: usize,
    // table[i][n] = C(n, i + 1)
    table: Vec<Vec<usize>>,
}

impl ColexRanker {
    fn new(v: u32, t: u32) -> Self {
        let table = (1..=t as u64)
            .map(|i| (0..v as u64).map(|n| binomial(n, i) as usize).collect())
            .collect();
        ColexRanker { t: t as usize, table }
    }

    /// `sorted` holds 1-based points in ascending order.
    fn rank(&self, sorted: &[u32]) -> usize {
        debug_assert_eq!(sorted.len(), self.t);
        sorted
            .iter()
            .enumerate()
            .map(|(i, &p)| self.table[i][(p - 1) as usize])
            .sum()
    }
}

/// `r_s = C(v-s, t-s) / C(k-s, t-s)`: the minimum number of blocks through
/// any `s`-subset of points.
pub fn replication_bound(params: DesignParams, s: u32) -> Result<Rational, DesignError> {
    let DesignParams { t, k, v } = params;
    if s == 0 || s > t {
        return Err(DesignError::StrengthOutOfRange { s, t });
    }
    let num = binomial((v - s) as u64, (t - s) as u64);
    let den = binomial((k - s) as u64, (t - s) as u64);
    Ok(Rational::new(num, den))
}

/// Both sides of the properly-local inequality
/// `ceil((v-t+1)/(k-t+1)) >= ceil(k/(t-1)) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalityCheck {
    /// `ceil((v-t+1)/(k-t+1))`, a lower bound on blocks through a `(t-1)`-subset.
    pub blocks_per_subset: u64,
    /// `q = ceil(k/(t-1))`.
    pub locality: u64,
}

impl LocalityCheck {
    /// The full properly-local condition.
    pub fn properly_local(&self) -> bool {
        self.blocks_per_subset > self.locality
    }

    /// The weaker `blocks_per_subset >= q`, which is what the recursive
    /// construction's zero skip-cost argument consumes.
    pub fn weakly_local(&self) -> bool {
        self.blocks_per_subset >= self.locality
    }

    /// Right-hand side of the properly-local inequality.
    pub fn required(&self) -> u64 {
        self.locality + 1
    }
}

pub fn is_properly_local(params: DesignParams) -> Result<LocalityCheck, DesignError> {
    let DesignParams { t, k, v } = params;
    if t < 2 {
        return Err(DesignError::StrengthTooSmall { t });
    }
    Ok(LocalityCheck {
        blocks_per_subset: ((v - t + 1) as u64).div_ceil((k - t + 1) as u64),
        locality: (k as u64).div_ceil((t - 1) as u64),
    })
}

/// `C(v, t) / C(k, t)`: no covering design has fewer blocks.
pub fn min_blocks_bound(params: DesignParams) -> Rational {
    let DesignParams { t, k, v } = params;
    Rational::new(binomial(v as u64, t as u64), binomial(k as u64, t as u64))
}

/// `n` copies of the block list, concatenated.
pub fn multiply_design(design: &CoveringDesign, n: usize) -> Result<CoveringDesign, DesignError> {
    if n == 0 {
        return Err(DesignError::ZeroMultiplier);
    }
    let blocks = std::iter::repeat_n(design.blocks(), n)
        .flatten()
        .cloned()
        .collect();
    Ok(CoveringDesign { params: design.params, blocks })
}
