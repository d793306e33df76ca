//! Wear-leveling cuckoo hashing.
//!
//! [`WearTable`] stores each item in one of `d >= 3` cells and steers every
//! write toward the least-worn candidate cell, which keeps the maximum number
//! of writes any single cell receives close to the average. The crate also
//! ships the two comparison tables ([`StdCuckooTable`], [`LinearProbeTable`])
//! with identical wear accounting, a cell/item hypergraph analyzer, wear
//! metrics, and the experiment harness behind the `wearhash` binary.

pub mod baselines;
pub mod error;
pub mod harness;
pub mod hash_family;
pub mod hypergraph;
pub mod metrics;
pub mod table;
pub mod wear_cuckoo;

pub use baselines::{LinearProbeTable, StdCuckooOptions, StdCuckooTable};
pub use error::{ConfigError, InsertError};
pub use hash_family::{ChoiceSet, HashFamily, TableRng};
pub use table::{Cell, DisplacementOutcome, InsertRule, WearDictionary, DEFAULT_MAX_KICKS};
pub use wear_cuckoo::{WearOptions, WearTable};
