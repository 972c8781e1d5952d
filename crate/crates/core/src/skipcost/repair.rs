//! Exact repair planning for a single erased column.
//!
//! A repair splits the erased column's values into at most `ℓ` nonempty
//! parts and fetches each part from a distinct surviving column. A helper
//! that sends values sitting in rows `i_1 < ... < i_s` skips
//! `i_s - i_1 - (s - 1)` rows. The search enumerates set partitions of the
//! erased values in restricted-growth order and, for each, solves a
//! minimum-cost assignment of parts to helpers.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use super::array::CfrArray;
use super::matching::{lexmin_matching, min_cost_assignment};
use super::partitions::RestrictedGrowth;
use super::SkipCostError;
use crate::designs::mask_points;

/// Largest block size the exact search accepts (Bell(12) = 4,213,597).
pub const MAX_SEARCH_K: usize = 12;

/// What one helper sends: the rows it reads (0-based, ascending) and the
/// rows it skips over while doing so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub helper: usize,
    pub rows: Vec<usize>,
    pub cost: u32,
}

impl Transmission {
    /// The values sent, in row order.
    pub fn values(&self, array: &CfrArray) -> Vec<u32> {
        let col = array.column(self.helper);
        self.rows.iter().map(|&r| col[r]).collect()
    }
}

/// A full repair of one column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairPlan {
    pub erased: usize,
    pub transmissions: Vec<Transmission>,
    pub total_cost: u32,
}

impl RepairPlan {
    /// Checks the plan against the array: distinct helpers other than the
    /// erased column, at most `locality` of them, disjoint transmissions whose
    /// union is exactly the erased value set, and consistent costs.
    pub fn validate(&self, array: &CfrArray, locality: usize) -> Result<(), String> {
        if self.transmissions.len() > locality {
            return Err(format!("{} helpers exceed locality {locality}", self.transmissions.len()));
        }
        let mut helpers = Vec::new();
        let mut received = 0u128;
        let mut total = 0;
        for tx in &self.transmissions {
            if tx.helper == self.erased {
                return Err("the erased column cannot help".into());
            }
            if helpers.contains(&tx.helper) {
                return Err(format!("helper {} used twice", tx.helper));
            }
            helpers.push(tx.helper);
            if tx.rows.is_empty() || tx.rows.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("helper {} rows are not strictly increasing", tx.helper));
            }
            if tx.rows.iter().any(|&r| r >= array.k()) {
                return Err(format!("helper {} row out of range", tx.helper));
            }
            for value in tx.values(array) {
                let bit = 1u128 << (value - 1);
                if received & bit != 0 {
                    return Err(format!("value {value} transmitted twice"));
                }
                received |= bit;
            }
            let span = (tx.rows[tx.rows.len() - 1] - tx.rows[0] + 1 - tx.rows.len()) as u32;
            if span != tx.cost {
                return Err(format!("helper {} cost {} but skips {span}", tx.helper, tx.cost));
            }
            total += tx.cost;
        }
        if received != array.column_mask(self.erased) {
            return Err("transmissions do not cover the erased column exactly".into());
        }
        if total != self.total_cost {
            return Err(format!("total {} does not match sum {total}", self.total_cost));
        }
        Ok(())
    }

    /// `{1,2} from 6; {3,5} from 5` with 1-based columns.
    pub fn describe(&self, array: &CfrArray) -> String {
        self.transmissions
            .iter()
            .map(|tx| {
                let vals = tx.values(array).into_iter().sorted_unstable().join(",");
                format!("{{{vals}}} from {}", tx.helper + 1)
            })
            .join("; ")
    }
}

impl fmt::Display for RepairPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {} (cost {}):", self.erased + 1, self.total_cost)?;
        for tx in &self.transmissions {
            let rows = tx.rows.iter().map(|r| r + 1).join(",");
            write!(f, " [helper {} rows {rows} skip {}]", tx.helper + 1, tx.cost)?;
        }
        Ok(())
    }
}

/// Skip cost of reading `values` out of `column`.
pub fn transmission_cost(column: &[u32], values: &[u32]) -> Result<u32, SkipCostError> {
    if values.is_empty() {
        return Err(SkipCostError::EmptyTransmission);
    }
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let row = column
            .iter()
            .position(|&x| x == value)
            .ok_or(SkipCostError::ValueAbsent { value })?;
        rows.push(row);
    }
    rows.sort_unstable();
    rows.dedup();
    Ok((rows[rows.len() - 1] - rows[0] + 1 - rows.len()) as u32)
}

/// Rows of `part` inside `column`, ascending, plus the skip cost. Every
/// value of `part` must be present.
fn rows_of(column: &[u32], part: u128) -> (Vec<usize>, u32) {
    let rows: Vec<usize> = column
        .iter()
        .enumerate()
        .filter(|(_, &x)| part >> (x - 1) & 1 == 1)
        .map(|(r, _)| r)
        .collect();
    let cost = (rows[rows.len() - 1] - rows[0] + 1 - rows.len()) as u32;
    (rows, cost)
}

/// Indexes over one array, shared by every column search.
pub struct RepairSolver<'a> {
    array: &'a CfrArray,
    // value - 1 -> columns holding it, ascending
    by_value: Vec<Vec<usize>>,
    // value set of a contiguous row run -> columns having that run, ascending
    runs: HashMap<u128, Vec<usize>>,
}

impl<'a> RepairSolver<'a> {
    pub fn new(array: &'a CfrArray) -> Result<Self, SkipCostError> {
        if array.k() > MAX_SEARCH_K {
            return Err(SkipCostError::Capacity { k: array.k() });
        }
        let mut by_value = vec![Vec::new(); array.v() as usize];
        let mut runs: HashMap<u128, Vec<usize>> = HashMap::new();
        for (j, col) in array.columns().enumerate() {
            for &x in col {
                by_value[(x - 1) as usize].push(j);
            }
            for start in 0..col.len() {
                let mut mask = 0u128;
                for &x in &col[start..] {
                    mask |= 1u128 << (x - 1);
                    runs.entry(mask).or_default().push(j);
                }
            }
        }
        Ok(RepairSolver { array, by_value, runs })
    }

    pub fn array(&self) -> &CfrArray {
        self.array
    }

    fn check(&self, erased: usize, locality: usize) -> Result<(), SkipCostError> {
        if locality == 0 {
            return Err(SkipCostError::ZeroLocality);
        }
        if erased >= self.array.len() {
            return Err(SkipCostError::ColumnOutOfRange { column: erased, columns: self.array.len() });
        }
        Ok(())
    }

    /// The cheapest repair of column `erased` with at most `locality`
    /// helpers, or `None` when no repair exists.
    ///
    /// Ties go to the first partition in restricted-growth order (over the
    /// erased values sorted ascending), then to the lexicographically
    /// smallest helper sequence in part order.
    pub fn column_repair(&self, erased: usize, locality: usize) -> Result<Option<RepairPlan>, SkipCostError> {
        if let Some(plan) = self.zero_cost_repair(erased, locality)? {
            return Ok(Some(plan));
        }
        let values = self.array.column_set(erased);
        let max_parts = locality.min(values.len());
        let mut memo: HashMap<u128, Vec<(u32, usize)>> = HashMap::new();
        let mut best: Option<(u32, Vec<u128>, Vec<usize>)> = None;
        let mut rgs = RestrictedGrowth::new(values.len(), max_parts);
        loop {
            let parts = part_masks(&values, rgs.labels(), rgs.parts());
            if let Some((cost, helpers)) = self.assign_min_cost(erased, &parts, max_parts, &mut memo) {
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, parts, helpers));
                }
            }
            if !rgs.advance() {
                break;
            }
        }
        Ok(best.map(|(_, parts, helpers)| self.plan(erased, &parts, &helpers)))
    }

    /// A zero-cost repair if one exists: every part must occupy consecutive
    /// rows of its helper, so each partition reduces to a matching question.
    /// Uses the same tie-break as [`RepairSolver::column_repair`].
    pub fn zero_cost_repair(&self, erased: usize, locality: usize) -> Result<Option<RepairPlan>, SkipCostError> {
        self.check(erased, locality)?;
        let values = self.array.column_set(erased);
        let max_parts = locality.min(values.len());
        let mut rgs = RestrictedGrowth::new(values.len(), max_parts);
        loop {
            let parts = part_masks(&values, rgs.labels(), rgs.parts());
            let m = parts.len();
            let candidates: Option<Vec<Vec<usize>>> = parts
                .iter()
                .map(|p| {
                    let list: Vec<usize> = self
                        .runs
                        .get(p)
                        .into_iter()
                        .flatten()
                        .copied()
                        .filter(|&h| h != erased)
                        .take(m)
                        .collect();
                    (!list.is_empty()).then_some(list)
                })
                .collect();
            if let Some(helpers) = candidates.and_then(|c| lexmin_matching(&c)) {
                return Ok(Some(self.plan(erased, &parts, &helpers)));
            }
            if !rgs.advance() {
                return Ok(None);
            }
        }
    }

    /// Helpers holding every value of `part`, ranked by (cost, index), at
    /// most `keep` of them. A part never needs more than one candidate per
    /// part of its partition.
    fn candidates(&self, erased: usize, part: u128, keep: usize) -> Vec<(u32, usize)> {
        let rarest = mask_points(part)
            .into_iter()
            .map(|x| &self.by_value[(x - 1) as usize])
            .min_by_key(|cols| cols.len())
            .expect("parts are nonempty");
        let mut found: Vec<(u32, usize)> = rarest
            .iter()
            .copied()
            .filter(|&h| h != erased && self.array.column_mask(h) & part == part)
            .map(|h| (rows_of(self.array.column(h), part).1, h))
            .collect();
        if found.len() > keep {
            found.select_nth_unstable(keep);
            found.truncate(keep);
        }
        found.sort_unstable();
        found
    }

    fn assign_min_cost(
        &self,
        erased: usize,
        parts: &[u128],
        keep: usize,
        memo: &mut HashMap<u128, Vec<(u32, usize)>>,
    ) -> Option<(u32, Vec<usize>)> {
        let m = parts.len();
        let mut lists = Vec::with_capacity(m);
        for &p in parts {
            let list = memo.entry(p).or_insert_with(|| self.candidates(erased, p, keep));
            if list.is_empty() {
                return None;
            }
            lists.push(list[..list.len().min(m)].to_vec());
        }
        let union: Vec<usize> = lists.iter().flatten().map(|&(_, h)| h).sorted_unstable().dedup().collect();
        if union.len() < m {
            return None;
        }
        // cost first, then helper ranks compared lexicographically in part order
        let base = union.len() as i128;
        let scale = base.pow(m as u32);
        let weights: Vec<Vec<Option<i128>>> = lists
            .iter()
            .enumerate()
            .map(|(i, list)| {
                let place = base.pow((m - 1 - i) as u32);
                let mut row = vec![None; union.len()];
                for &(cost, h) in list {
                    let rank = union.binary_search(&h).unwrap() as i128;
                    row[rank as usize] = Some(cost as i128 * scale + rank * place);
                }
                row
            })
            .collect();
        let (total, assignment) = min_cost_assignment(&weights)?;
        Some(((total / scale) as u32, assignment.into_iter().map(|r| union[r]).collect()))
    }

    fn plan(&self, erased: usize, parts: &[u128], helpers: &[usize]) -> RepairPlan {
        let transmissions: Vec<Transmission> = parts
            .iter()
            .zip(helpers)
            .map(|(&p, &h)| {
                let (rows, cost) = rows_of(self.array.column(h), p);
                Transmission { helper: h, rows, cost }
            })
            .collect();
        let total_cost = transmissions.iter().map(|t| t.cost).sum();
        RepairPlan { erased, transmissions, total_cost }
    }
}

/// Part masks of a restricted growth string over `values`.
fn part_masks(values: &[u32], labels: &[u8], parts: usize) -> Vec<u128> {
    let mut masks = vec![0u128; parts];
    for (&x, &l) in values.iter().zip(labels) {
        masks[l as usize] |= 1u128 << (x - 1);
    }
    masks
}

/// Minimum skip-cost repair of one column; `Ok(None)` when the column cannot
/// be repaired within the locality.
pub fn column_repair_cost(
    array: &CfrArray,
    erased: usize,
    locality: usize,
) -> Result<Option<RepairPlan>, SkipCostError> {
    RepairSolver::new(array)?.column_repair(erased, locality)
}

/// Optimal plans for every column, in column order.
pub fn repair_all(array: &CfrArray, locality: usize) -> Result<Vec<Option<RepairPlan>>, SkipCostError> {
    let solver = RepairSolver::new(array)?;
    if locality == 0 {
        return Err(SkipCostError::ZeroLocality);
    }
    (0..array.len())
        .into_par_iter()
        .map(|j| solver.column_repair(j, locality))
        .collect()
}

/// `max_j cost(column j)`, or `None` if some column has no repair.
pub fn array_skip_cost(array: &CfrArray, locality: usize) -> Result<Option<u32>, SkipCostError> {
    let plans = repair_all(array, locality)?;
    Ok(plans
        .iter()
        .map(|p| p.as_ref().map(|p| p.total_cost))
        .collect::<Option<Vec<u32>>>()
        .map(|costs| costs.into_iter().max().unwrap_or(0)))
}

/// Per-column zero-cost plans (`None` where a column has none).
#[derive(Clone, Debug)]
pub struct ZeroSkipReport {
    pub plans: Vec<Option<RepairPlan>>,
}

impl ZeroSkipReport {
    pub fn is_zero_skip(&self) -> bool {
        self.plans.iter().all(Option::is_some)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.plans.iter().position(Option::is_none)
    }

    pub fn failing_columns(&self) -> Vec<usize> {
        self.plans.iter().positions(Option::is_none).collect()
    }
}

/// Checks every column for a zero skip-cost repair.
pub fn is_zero_skip(array: &CfrArray, locality: usize) -> Result<ZeroSkipReport, SkipCostError> {
    let solver = RepairSolver::new(array)?;
    zero_skip_with(&solver, 0..array.len(), locality).map(|plans| ZeroSkipReport { plans })
}

pub(crate) fn zero_skip_with(
    solver: &RepairSolver<'_>,
    columns: impl IntoParallelIterator<Item = usize>,
    locality: usize,
) -> Result<Vec<Option<RepairPlan>>, SkipCostError> {
    if locality == 0 {
        return Err(SkipCostError::ZeroLocality);
    }
    columns
        .into_par_iter()
        .map(|j| solver.zero_cost_repair(j, locality))
        .collect()
}
