//! Types shared by every wear-tracking table.

use serde::{Deserialize, Serialize};

use crate::error::InsertError;

/// Default cap on displacement-chain length.
pub const DEFAULT_MAX_KICKS: usize = 500;

/// One slot: an optional `(key, value)` plus the number of value writes the
/// slot has received.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<V> {
    occupant: Option<(u64, V)>,
    wear: u32,
}

impl<V> Default for Cell<V> {
    fn default() -> Self {
        Cell {
            occupant: None,
            wear: 0,
        }
    }
}

impl<V> Cell<V> {
    pub fn wear(&self) -> u32 {
        self.wear
    }

    pub fn occupant(&self) -> Option<&(u64, V)> {
        self.occupant.as_ref()
    }

    pub fn key(&self) -> Option<u64> {
        self.occupant.as_ref().map(|(k, _)| *k)
    }

    pub fn is_empty(&self) -> bool {
        self.occupant.is_none()
    }

    /// Stores an item, counting one write, and returns the previous occupant.
    #[inline]
    pub(crate) fn write(&mut self, key: u64, value: V) -> Option<(u64, V)> {
        self.wear += 1;
        self.occupant.replace((key, value))
    }

    /// Puts an item back without counting a write.
    #[inline]
    pub(crate) fn restore(&mut self, item: (u64, V)) {
        debug_assert!(self.occupant.is_none());
        self.occupant = Some(item);
    }

    #[inline]
    pub(crate) fn take(&mut self) -> Option<(u64, V)> {
        self.occupant.take()
    }

    #[inline]
    pub(crate) fn occupant_mut(&mut self) -> &mut Option<(u64, V)> {
        &mut self.occupant
    }

    #[inline]
    pub(crate) fn add_wear(&mut self, amount: u32) {
        self.wear += amount;
    }
}

/// What one insertion did to the table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementOutcome {
    /// Logical value writes, including fast-forwarded ping-pong bounces.
    pub writes_performed: u64,
    /// Evictions along the chain.
    pub chain_length: u64,
    pub failed: bool,
}

/// Where a freshly inserted item goes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InsertRule {
    /// A uniformly random empty choice if one exists, otherwise displace the
    /// minimum-wear occupant.
    #[default]
    Sec3,
    /// Always the minimum-wear choice, empty or not.
    Sec2,
}

/// Behavior common to the three tables, so the harness and the C API can
/// drive any of them.
pub trait WearDictionary<V> {
    fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>>;
    /// Removes `key`, returning its value and the physical writes the
    /// removal caused (erase wear, rehash moves).
    fn remove_counted(&mut self, key: u64) -> Option<(V, u64)>;
    fn get(&self, key: u64) -> Option<&V>;
    fn len(&self) -> usize;
    fn capacity(&self) -> usize;
    fn cells(&self) -> &[Cell<V>];

    fn remove(&mut self, key: u64) -> Option<V> {
        self.remove_counted(key).map(|(v, _)| v)
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn contains_key(&self, key: u64) -> bool {
        self.get(key).is_some()
    }

    fn wear_snapshot(&self) -> Vec<u32> {
        self.cells().iter().map(Cell::wear).collect()
    }

    fn total_wear(&self) -> u64 {
        self.cells().iter().map(|c| u64::from(c.wear())).sum()
    }
}

impl<V, T: WearDictionary<V> + ?Sized> WearDictionary<V> for Box<T> {
    fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>> {
        (**self).insert(key, value)
    }

    fn remove_counted(&mut self, key: u64) -> Option<(V, u64)> {
        (**self).remove_counted(key)
    }

    fn get(&self, key: u64) -> Option<&V> {
        (**self).get(key)
    }

    fn len(&self) -> usize {
        (**self).len()
    }

    fn capacity(&self) -> usize {
        (**self).capacity()
    }

    fn cells(&self) -> &[Cell<V>] {
        (**self).cells()
    }
}
