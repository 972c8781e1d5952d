//! The `q`-fold lift of a `(t, k, v)` covering design to a `(t, k, qv)` one.
//!
//! Point `x` of layer `i` (0-based here) becomes `x + i v`. Blocks come in
//! four families:
//!
//! * B1: `q - 1` layers carry the same `(t-1)`-set `U`, the last carries an
//!   `r`-subset of `U`.
//! * B2 (LOW case only): `q - 2` layers carry `U`, the other two carry
//!   subsets of `U` of sizes `m` and `t-1+r-m`.
//! * B3: a base block spread over the layers by an index vector whose layer
//!   counts are `{r, t-1, ..., t-1}` or `{0, t-1+r, t-1, ..., t-1}`.
//! * B4 (LOW case only): the same with counts `{m, t-1+r-m, t-1, ...}`.

use std::collections::HashSet;

use itertools::Itertools;

use super::{ConstructionError, RecursiveCase, RecursiveParams};
use crate::designs::{is_properly_local, mask_points, CoveringDesign, DesignParams, LocalityCheck, MAX_POINTS};
use crate::rational::{binomial, multinomial, Rational};
use crate::skipcost::CfrArray;

/// The closed-form block count of the lifted design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizePrediction {
    pub params: RecursiveParams,
    pub base_blocks: usize,
    /// `c1`, `c2` or `c3` according to the case
    pub coefficient: i128,
    /// the part that does not depend on the base design: the B1 and B2 counts
    pub layered_term: i128,
    pub predicted_blocks: i128,
}

/// `k! / prod(parts!)` for `parts` summing to `k`.
fn profile_count(parts: &[u32]) -> i128 {
    let parts: Vec<u64> = parts.iter().map(|&p| p as u64).collect();
    multinomial(&parts).expect("multinomial fits in i128")
}

fn repeat_tm1(p: &RecursiveParams, n: u32) -> Vec<u32> {
    vec![p.t - 1; n as usize]
}

/// `c_j(t, k)` for the case of `p`.
fn coefficient(p: &RecursiveParams) -> i128 {
    let (t, q, r) = (p.t, p.q, p.r);
    let qq = (q * (q - 1)) as i128;
    let with = |head: &[u32], tail: u32| {
        let mut parts = head.to_vec();
        parts.extend(repeat_tm1(p, tail));
        profile_count(&parts)
    };
    match p.case {
        RecursiveCase::REqTm1 => with(&[], q) + qq * with(&[2 * t - 2], q - 2),
        RecursiveCase::Mid | RecursiveCase::Low => {
            let c2 = q as i128 * with(&[r], q - 1) + qq * with(&[t - 1 + r], q - 2);
            let extra: i128 = p.m_range().map(|m| with(&[m, t - 1 + r - m], q - 2)).sum();
            c2 + qq * extra
        }
    }
}

/// Block count of the lifted design for a base design with `base_blocks`
/// blocks, by the closed-form case split. Only `t`, `k` and `v` of `params`
/// are used.
pub fn predict_recursive_size(params: DesignParams, base_blocks: usize) -> Result<SizePrediction, ConstructionError> {
    let p = RecursiveParams::new(params.t(), params.k())?;
    let (t, q, r) = (p.t as u64, p.q as i128, p.r as u64);
    let subsets = binomial(params.v() as u64, t - 1);
    let layered_term = match p.case {
        RecursiveCase::REqTm1 => subsets,
        RecursiveCase::Mid | RecursiveCase::Low => {
            let b1 = q * binomial(t - 1, r) * subsets;
            let b2: i128 = p
                .m_range()
                .map(|m| q * (q - 1) * binomial(t - 1, m as u64) * binomial(t - 1, t - 1 + r - m as u64) * subsets)
                .sum();
            b1 + b2
        }
    };
    let coefficient = coefficient(&p);
    Ok(SizePrediction {
        params: p,
        base_blocks,
        coefficient,
        layered_term,
        predicted_blocks: coefficient * base_blocks as i128 + layered_term,
    })
}

/// `c_j(t, k) / q^t`, the expansion factor the lift approaches for base
/// designs of nearly optimal size.
pub fn asymptotic_expansion(t: u32, k: u32) -> Result<Rational, ConstructionError> {
    let p = RecursiveParams::new(t, k)?;
    Ok(Rational::new(coefficient(&p), (p.q as i128).pow(t)))
}

/// The four block families, each deduplicated and sorted
/// lexicographically. B3 is split by the index profile it came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursiveFamilies {
    pub b1: Vec<Vec<u32>>,
    pub b2: Vec<Vec<u32>>,
    pub b3_i1: Vec<Vec<u32>>,
    pub b3_i2: Vec<Vec<u32>>,
    pub b4: Vec<Vec<u32>>,
}

impl RecursiveFamilies {
    pub fn len(&self) -> usize {
        self.b1.len() + self.b2.len() + self.b3_i1.len() + self.b3_i2.len() + self.b4.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// B3 as one family, in lexicographic order.
    pub fn b3(&self) -> Vec<Vec<u32>> {
        self.b3_i1.iter().chain(&self.b3_i2).cloned().sorted_unstable().collect()
    }

    /// Columns of the lifted array: B1, B2, B3, B4, each group in
    /// lexicographic order.
    pub fn columns(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.len());
        out.extend(self.b1.iter().cloned());
        out.extend(self.b2.iter().cloned());
        out.extend(self.b3());
        out.extend(self.b4.iter().cloned());
        out
    }
}

/// Distinct permutations of `profile` as per-layer counts.
fn layer_counts(profile: &[u32]) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = profile.iter().copied().permutations(profile.len()).collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// Calls `f` with every index vector of length `sum(counts)` that uses
/// layer `i` exactly `counts[i]` times.
fn for_each_index_vector(counts: &mut [u32], prefix: &mut Vec<u32>, len: usize, f: &mut impl FnMut(&[u32])) {
    if prefix.len() == len {
        f(prefix);
        return;
    }
    for layer in 0..counts.len() {
        if counts[layer] > 0 {
            counts[layer] -= 1;
            prefix.push(layer as u32);
            for_each_index_vector(counts, prefix, len, f);
            prefix.pop();
            counts[layer] += 1;
        }
    }
}

struct Lift {
    v: u32,
}

impl Lift {
    /// Mask of `points` translated to layer `layer`.
    fn layer(&self, points: &[u32], layer: u32) -> u128 {
        points.iter().fold(0, |m, &x| m | 1u128 << (x + layer * self.v - 1))
    }
}

fn sorted_blocks(masks: HashSet<u128>) -> Vec<Vec<u32>> {
    masks.into_iter().map(mask_points).sorted_unstable().collect()
}

/// Generates the block families of the lift without checking the size
/// formula. Duplicate blocks inside a family collapse.
pub fn recursive_families(design: &CoveringDesign) -> Result<RecursiveFamilies, ConstructionError> {
    let params = design.params();
    let p = RecursiveParams::new(params.t(), params.k())?;
    let v = params.v();
    let lifted = p.q * v;
    if lifted > MAX_POINTS {
        return Err(ConstructionError::TooManyPoints { v: lifted, max: MAX_POINTS });
    }
    let lift = Lift { v };
    let (t, q, r) = (p.t, p.q, p.r);

    let mut b1 = HashSet::new();
    let mut b2 = HashSet::new();
    for u in (1..=v).combinations((t - 1) as usize) {
        let full: Vec<u128> = (0..q).map(|i| lift.layer(&u, i)).collect();
        let all = full.iter().fold(0, |m, &x| m | x);
        for sub in u.iter().copied().combinations(r as usize) {
            for a in 0..q {
                b1.insert(all & !full[a as usize] | lift.layer(&sub, a));
            }
        }
        for m in p.m_range() {
            for sv in u.iter().copied().combinations(m as usize) {
                for sw in u.iter().copied().combinations((t - 1 + r - m) as usize) {
                    for (a, b) in (0..q).cartesian_product(0..q).filter(|(a, b)| a != b) {
                        let rest = all & !full[a as usize] & !full[b as usize];
                        b2.insert(rest | lift.layer(&sv, a) | lift.layer(&sw, b));
                    }
                }
            }
        }
    }

    let spread = |profiles: &[Vec<u32>]| {
        let mut out = HashSet::new();
        let k = p.k as usize;
        for profile in profiles {
            for mut counts in layer_counts(profile) {
                for block in design.blocks() {
                    let x = block.elements();
                    for_each_index_vector(&mut counts, &mut Vec::with_capacity(k), k, &mut |iv| {
                        let mask = x.iter().zip(iv).fold(0u128, |m, (&x, &i)| m | 1u128 << (x + i * v - 1));
                        out.insert(mask);
                    });
                }
            }
        }
        out
    };
    let tail = |head: &[u32]| {
        let mut profile = head.to_vec();
        profile.resize(q as usize, t - 1);
        profile
    };
    let i1 = spread(&[tail(&[r])]);
    let i2 = spread(&[tail(&[0, t - 1 + r])]);
    let i3 = spread(&p.m_range().map(|m| tail(&[m, t - 1 + r - m])).collect::<Vec<_>>());

    let named = [("B1", &b1), ("B2", &b2), ("B3 (I1)", &i1), ("B3 (I2)", &i2), ("B4", &i3)];
    for (i, (first, a)) in named.iter().enumerate() {
        for (second, b) in &named[i + 1..] {
            if !a.is_disjoint(b) {
                return Err(ConstructionError::FamiliesOverlap { first, second });
            }
        }
    }
    Ok(RecursiveFamilies {
        b1: sorted_blocks(b1),
        b2: sorted_blocks(b2),
        b3_i1: sorted_blocks(i1),
        b3_i2: sorted_blocks(i2),
        b4: sorted_blocks(i3),
    })
}

/// Output of [`construct_recursive`].
#[derive(Clone, Debug)]
pub struct RecursiveBuild {
    pub array: CfrArray,
    /// `(t, k, qv)`
    pub params: DesignParams,
    pub prediction: SizePrediction,
    pub families: RecursiveFamilies,
    /// the locality test on the base design
    pub locality: LocalityCheck,
    /// conditions the zero skip-cost argument wants but the base design lacks
    pub warnings: Vec<String>,
}

/// Lifts `design` to a `(t, k, qv)` covering design and writes its blocks
/// as ascending columns, grouped B1, B2, B3, B4.
///
/// The base design must not repeat blocks. The generated block count must
/// equal [`predict_recursive_size`]; a difference is an error. The base
/// design's locality is reported, not enforced: `warnings` says when
/// `ceil((v-t+1)/(k-t+1))` falls below `q` (the zero skip-cost argument
/// needs at least `q`) or below `q + 1`.
pub fn construct_recursive(design: &CoveringDesign) -> Result<RecursiveBuild, ConstructionError> {
    let params = design.params();
    if params.t() < 2 {
        return Err(ConstructionError::StrengthTooSmall { t: params.t() });
    }
    if design.has_repeated_blocks() {
        return Err(ConstructionError::RepeatedBlocks);
    }
    let locality = is_properly_local(params).expect("t >= 2 was checked");
    let mut warnings = Vec::new();
    if !locality.weakly_local() {
        warnings.push(format!(
            "base design {params} has ceil((v-t+1)/(k-t+1)) = {} < q = {}: zero skip cost is not guaranteed",
            locality.blocks_per_subset, locality.locality
        ));
    } else if !locality.properly_local() {
        warnings.push(format!(
            "base design {params} is not properly local ({} < {})",
            locality.blocks_per_subset,
            locality.required()
        ));
    }
    let families = recursive_families(design)?;
    let prediction = predict_recursive_size(params, design.len())?;
    if prediction.predicted_blocks != families.len() as i128 {
        return Err(ConstructionError::SizeMismatch {
            predicted: prediction.predicted_blocks,
            generated: families.len(),
        });
    }
    let lifted = DesignParams::new(params.t(), params.k(), prediction.params.q * params.v())
        .expect("lifted parameters are valid");
    let array = CfrArray::from_columns(params.k() as usize, lifted.v(), &families.columns())?;
    Ok(RecursiveBuild { array, params: lifted, prediction, families, locality, warnings })
}
