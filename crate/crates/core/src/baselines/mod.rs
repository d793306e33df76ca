//! Comparison tables with the same wear accounting as [`crate::WearTable`]:
//! random-walk cuckoo hashing and linear probing with eager deletion.

mod linear_probe;
mod std_cuckoo;

pub use linear_probe::LinearProbeTable;
pub use std_cuckoo::{StdCuckooOptions, StdCuckooTable};
