//! Code-level parameters of an array: replication, expansion factor, and a
//! printable summary with per-column repair plans.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::array::CfrArray;
use super::repair::{repair_all, RepairPlan};
use super::SkipCostError;
use crate::designs::{replication_bound, DesignParams};
use crate::rational::{binomial, Rational};

/// How many columns hold each symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicationProfile {
    /// symbol -> number of columns containing it, for every symbol of `[v]`
    pub counts: BTreeMap<u32, u64>,
    /// minimum over all symbols
    pub rho: u64,
}

pub fn replication_profile(array: &CfrArray) -> ReplicationProfile {
    let mut counts: BTreeMap<u32, u64> = (1..=array.v()).map(|a| (a, 0)).collect();
    for col in array.columns() {
        for &x in col {
            *counts.get_mut(&x).expect("values lie in [v]") += 1;
        }
    }
    let total: u64 = counts.values().sum();
    assert_eq!(total, (array.k() * array.len()) as u64, "replication counts must sum to kN");
    let rho = counts.values().copied().min().unwrap_or(0);
    ReplicationProfile { counts, rho }
}

/// `ξ = N C(k,t) / C(v,t)`.
pub fn expansion_factor(n: usize, params: DesignParams) -> Rational {
    let (t, k, v) = (params.t() as u64, params.k() as u64, params.v() as u64);
    Rational::new(n as i128 * binomial(k, t), binomial(v, t))
}

/// Everything printed about a finished array.
#[derive(Clone, Debug)]
pub struct CodeReport {
    pub params: DesignParams,
    pub n: usize,
    /// `ceil(r_1)`, the replication any covering design with these
    /// parameters guarantees; this is the `ρ` of the `(N, k, ρ)_v` label
    pub rho: u64,
    pub profile: ReplicationProfile,
    pub locality: usize,
    /// `None` when some column cannot be repaired within the locality
    pub skip_cost: Option<u32>,
    pub expansion_factor: Rational,
    pub plans: Vec<Option<RepairPlan>>,
}

#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    k: u32,
    rho: u64,
    v: u32,
    t: u32,
    rho_min: u64,
    locality: usize,
    skip_cost: String,
    expansion_factor: String,
    expansion_factor_exact: String,
}

impl CodeReport {
    /// Runs the exact repair search on every column. `params` are the
    /// covering parameters of the array itself.
    pub fn new(array: &CfrArray, params: DesignParams, locality: usize) -> Result<Self, SkipCostError> {
        let plans = repair_all(array, locality)?;
        let skip_cost = plans
            .iter()
            .map(|p| p.as_ref().map(|p| p.total_cost))
            .collect::<Option<Vec<_>>>()
            .map(|c| c.into_iter().max().unwrap_or(0));
        let rho = replication_bound(params, 1).expect("s=1 is always in range").ceil() as u64;
        Ok(CodeReport {
            params,
            n: array.len(),
            rho,
            profile: replication_profile(array),
            locality,
            skip_cost,
            expansion_factor: expansion_factor(array.len(), params),
            plans,
        })
    }

    /// `(N, k, ρ)_v`.
    pub fn label(&self) -> String {
        format!("({}, {}, {})_{}", self.n, self.params.k(), self.rho, self.params.v())
    }

    /// Summary lines; with `plans` also one line per column.
    pub fn to_text(&self, array: &CfrArray, plans: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "code {}", self.label());
        let _ = writeln!(out, "covering parameters {}", self.params);
        let _ = writeln!(out, "replication: guaranteed {}, observed minimum {}", self.rho, self.profile.rho);
        let _ = writeln!(out, "locality {}", self.locality);
        match self.skip_cost {
            Some(c) => {
                let _ = writeln!(out, "skip cost {c}");
            }
            None => {
                let _ = writeln!(out, "skip cost: infeasible (some column has no repair)");
            }
        }
        let _ = writeln!(
            out,
            "expansion factor {} ({})",
            self.expansion_factor.to_decimal(2),
            self.expansion_factor
        );
        if plans {
            for (j, plan) in self.plans.iter().enumerate() {
                match plan {
                    Some(p) => {
                        let _ = writeln!(out, "  column {}: cost {}: {}", j + 1, p.total_cost, p.describe(array));
                    }
                    None => {
                        let _ = writeln!(out, "  column {}: no repair", j + 1);
                    }
                }
            }
        }
        out
    }

    /// One header row and one data row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(SummaryRow {
            n: self.n,
            k: self.params.k(),
            rho: self.rho,
            v: self.params.v(),
            t: self.params.t(),
            rho_min: self.profile.rho,
            locality: self.locality,
            skip_cost: self.skip_cost.map_or_else(|| "infeasible".into(), |c| c.to_string()),
            expansion_factor: self.expansion_factor.to_decimal(2),
            expansion_factor_exact: self.expansion_factor.to_string(),
        })
        .expect("writing to memory");
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv is utf-8")
    }
}
