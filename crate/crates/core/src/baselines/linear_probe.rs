use crate::error::{ConfigError, InsertError};
use crate::hash_family::HashFamily;
use crate::table::{Cell, DisplacementOutcome, WearDictionary};

/// Open addressing with linear probing and eager deletion.
///
/// Deleting a key rehashes every item between the freed slot and the next
/// empty slot by taking it out and running the ordinary insertion. An item
/// that lands back in its own slot costs no physical write.
pub struct LinearProbeTable<V> {
    cells: Vec<Cell<V>>,
    family: HashFamily,
    wear_on_delete: bool,
    live: usize,
}

impl<V> LinearProbeTable<V> {
    pub fn new(capacity: usize, seed: u64) -> Result<Self, ConfigError> {
        Self::with_options(capacity, seed, false)
    }

    pub fn with_options(
        capacity: usize,
        seed: u64,
        wear_on_delete: bool,
    ) -> Result<Self, ConfigError> {
        let family = HashFamily::new(seed, 1, capacity)?;
        let mut cells = Vec::with_capacity(capacity);
        cells.resize_with(capacity, Cell::default);
        Ok(LinearProbeTable {
            cells,
            family,
            wear_on_delete,
            live: 0,
        })
    }

    /// Home slot of `key`: the first function of the shared family.
    #[inline]
    pub fn home(&self, key: u64) -> usize {
        self.family.index(0, key)
    }

    #[inline]
    fn next(&self, slot: usize) -> usize {
        if slot + 1 == self.cells.len() {
            0
        } else {
            slot + 1
        }
    }

    fn find(&self, key: u64) -> Option<usize> {
        let mut slot = self.home(key);
        for _ in 0..self.cells.len() {
            match self.cells[slot].key() {
                None => return None,
                Some(k) if k == key => return Some(slot),
                Some(_) => slot = self.next(slot),
            }
        }
        None
    }

    fn first_empty_from(&self, start: usize) -> Option<usize> {
        let mut slot = start;
        for _ in 0..self.cells.len() {
            if self.cells[slot].is_empty() {
                return Some(slot);
            }
            slot = self.next(slot);
        }
        None
    }

    /// Inserts and returns the number of physical writes (always 1 here).
    pub fn lp_insert(&mut self, key: u64, value: V) -> Result<u64, InsertError<V>> {
        if self.find(key).is_some() {
            return Err(InsertError::DuplicateKey { key, value });
        }
        let Some(slot) = self.first_empty_from(self.home(key)) else {
            return Err(InsertError::TableFull { key, value });
        };
        self.cells[slot].write(key, value);
        self.live += 1;
        Ok(1)
    }

    pub fn get(&self, key: u64) -> Option<&V> {
        self.find(key)
            .and_then(|s| self.cells[s].occupant())
            .map(|(_, v)| v)
    }

    /// Removes `key`, then rehashes the rest of its cluster.
    pub fn lp_delete(&mut self, key: u64) -> Option<V> {
        self.lp_delete_counted(key).map(|(v, _)| v)
    }

    /// [`Self::lp_delete`] plus the number of physical writes it caused.
    pub fn lp_delete_counted(&mut self, key: u64) -> Option<(V, u64)> {
        let slot = self.find(key)?;
        let (_, value) = self.cells[slot].take()?;
        let mut writes = 0;
        if self.wear_on_delete {
            self.cells[slot].add_wear(1);
            writes += 1;
        }
        self.live -= 1;

        let mut cursor = self.next(slot);
        while let Some(item) = self.cells[cursor].take() {
            let dest = self
                .first_empty_from(self.home(item.0))
                .expect("a slot was just vacated");
            if dest == cursor {
                self.cells[cursor].restore(item);
            } else {
                self.cells[dest].write(item.0, item.1);
                writes += 1;
            }
            cursor = self.next(cursor);
        }
        Some((value, writes))
    }

    /// Checks probe-sequence integrity: every slot between an item's home
    /// and its position is occupied.
    pub fn validate(&self) -> Result<(), String> {
        let mut occupied = 0;
        for (pos, cell) in self.cells.iter().enumerate() {
            let Some(key) = cell.key() else { continue };
            occupied += 1;
            let mut slot = self.home(key);
            while slot != pos {
                if self.cells[slot].is_empty() {
                    return Err(format!("key {key} at {pos} unreachable: slot {slot} empty"));
                }
                slot = self.next(slot);
            }
        }
        if occupied != self.live {
            return Err(format!(
                "live count {} but {occupied} occupied slots",
                self.live
            ));
        }
        Ok(())
    }
}

impl<V> WearDictionary<V> for LinearProbeTable<V> {
    fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>> {
        self.lp_insert(key, value)
            .map(|writes| DisplacementOutcome {
                writes_performed: writes,
                ..Default::default()
            })
    }

    fn remove_counted(&mut self, key: u64) -> Option<(V, u64)> {
        self.lp_delete_counted(key)
    }

    fn get(&self, key: u64) -> Option<&V> {
        LinearProbeTable::get(self, key)
    }

    fn len(&self) -> usize {
        self.live
    }

    fn capacity(&self) -> usize {
        self.cells.len()
    }

    fn cells(&self) -> &[Cell<V>] {
        &self.cells
    }
}
