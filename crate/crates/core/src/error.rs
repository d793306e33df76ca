use thiserror::Error;

use crate::table::DisplacementOutcome;

/// Invalid construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("number of choices d={d} must be in 1..={max}")]
    Choices { d: usize, max: usize },
    #[error("capacity n={n} must be at least d={d}")]
    Capacity { n: usize, d: usize },
    #[error("cuckoo tables need d >= 3 choices, got d={0}")]
    CuckooChoices(usize),
    #[error("max_kicks must be positive")]
    MaxKicks,
    #[error("invalid usage ratio {0:?}: expected a fraction like 1/6 or a decimal in (0, 1)")]
    Ratio(String),
    #[error("{0}")]
    Invalid(String),
}

/// Failure of a single insertion. The rejected item is handed back.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InsertError<V> {
    #[error("key {key} is already present")]
    DuplicateKey { key: u64, value: V },
    /// The displacement chain hit `max_kicks`. Every write performed along the
    /// chain is kept; `key`/`value` is the item left without a cell, which may
    /// be an older item rather than the one being inserted.
    #[error("insertion failed after {} displacements; key {key} left without a cell", outcome.chain_length)]
    InsertionFailed {
        key: u64,
        value: V,
        outcome: DisplacementOutcome,
    },
    #[error("table is full, cannot insert key {key}")]
    TableFull { key: u64, value: V },
}

impl<V> InsertError<V> {
    /// Key of the item that did not end up in the table.
    pub fn key(&self) -> u64 {
        match self {
            InsertError::DuplicateKey { key, .. }
            | InsertError::InsertionFailed { key, .. }
            | InsertError::TableFull { key, .. } => *key,
        }
    }

    /// Writes that were performed before the error, if any.
    pub fn writes_performed(&self) -> u64 {
        match self {
            InsertError::InsertionFailed { outcome, .. } => outcome.writes_performed,
            _ => 0,
        }
    }
}
