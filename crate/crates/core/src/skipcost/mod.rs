//! Storage arrays, exact repair search, and code-level parameters.

pub mod array;
pub mod matching;
pub mod oracle;
pub mod partitions;
pub mod repair;
pub mod report;

use thiserror::Error;

pub use array::{ArrayError, CfrArray};
pub use repair::{
    array_skip_cost, column_repair_cost, is_zero_skip, repair_all, transmission_cost, RepairPlan, RepairSolver,
    Transmission, ZeroSkipReport, MAX_SEARCH_K,
};
pub use report::{expansion_factor, replication_profile, CodeReport, ReplicationProfile};

#[derive(Debug, Error)]
pub enum SkipCostError {
    #[error("column {column} is out of range (array has {columns} columns)")]
    ColumnOutOfRange { column: usize, columns: usize },
    #[error("locality must be at least 1")]
    ZeroLocality,
    #[error("k={k} exceeds the exact-search limit of {MAX_SEARCH_K} rows")]
    Capacity { k: usize },
    #[error("value {value} is not in the helper column")]
    ValueAbsent { value: u32 },
    #[error("a transmission must carry at least one value")]
    EmptyTransmission,
}
