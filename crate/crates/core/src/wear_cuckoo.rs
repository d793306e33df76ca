//! Wear-aware cuckoo hashing with `d >= 3` choices.
//!
//! Every cell carries a wear counter. A fresh item goes to a random empty
//! choice when one exists and otherwise displaces the occupant of its
//! least-worn choice. A displaced item moves to the least-worn of its own
//! choices, counting the write that just evicted it, and the chain continues
//! until an empty cell absorbs an item or the kick budget runs out.
//!
//! Tie-breaks among equally worn cells: a displaced item avoids the cell it was
//! just evicted from, then picks uniformly with the table's RNG. The RNG is
//! only consulted when two or more candidates remain, so a run is reproducible
//! from `(seed, d, n)` and the operation script.
//!
//! Two items can evict each other from one cell several times in a row. With
//! fast-forward enabled that bounce sequence is collapsed into O(1)
//! arithmetic; the resulting state is identical to the step-by-step loop.

use std::collections::HashSet;

use crate::error::{ConfigError, InsertError};
use crate::hash_family::{ChoiceSet, HashFamily, TableRng, MAX_CHOICES};
use crate::table::{Cell, DisplacementOutcome, InsertRule, WearDictionary, DEFAULT_MAX_KICKS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WearOptions {
    pub max_kicks: usize,
    /// Count a write when an item is deleted (erase-counting devices).
    pub wear_on_delete: bool,
    pub rule: InsertRule,
    pub fast_forward: bool,
}

impl Default for WearOptions {
    fn default() -> Self {
        WearOptions {
            max_kicks: DEFAULT_MAX_KICKS,
            wear_on_delete: false,
            rule: InsertRule::Sec3,
            fast_forward: true,
        }
    }
}

pub struct WearTable<V> {
    cells: Vec<Cell<V>>,
    family: HashFamily,
    rng: TableRng,
    options: WearOptions,
    live: usize,
}

impl<V> WearTable<V> {
    pub fn new(capacity: usize, d: usize, seed: u64) -> Result<Self, ConfigError> {
        Self::with_options(capacity, d, seed, WearOptions::default())
    }

    pub fn with_options(
        capacity: usize,
        d: usize,
        seed: u64,
        options: WearOptions,
    ) -> Result<Self, ConfigError> {
        if d < 3 {
            return Err(ConfigError::CuckooChoices(d));
        }
        if options.max_kicks == 0 {
            return Err(ConfigError::MaxKicks);
        }
        let family = HashFamily::new(seed, d, capacity)?;
        let mut cells = Vec::with_capacity(capacity);
        cells.resize_with(capacity, Cell::default);
        Ok(WearTable {
            cells,
            family,
            rng: TableRng::for_family(&family),
            options,
            live: 0,
        })
    }

    pub fn family(&self) -> &HashFamily {
        &self.family
    }

    pub fn options(&self) -> &WearOptions {
        &self.options
    }

    pub fn set_fast_forward(&mut self, enabled: bool) {
        self.options.fast_forward = enabled;
    }

    pub fn cells(&self) -> &[Cell<V>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn capacity(&self) -> usize {
        self.cells.len()
    }

    pub fn wear_snapshot(&self) -> Vec<u32> {
        self.cells.iter().map(Cell::wear).collect()
    }

    /// `(cell, key)` for every stored item.
    pub fn placements(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.key().map(|k| (i, k)))
    }

    fn find(&self, key: u64, choices: &ChoiceSet) -> Option<usize> {
        choices
            .iter()
            .copied()
            .find(|&c| self.cells[c].key() == Some(key))
    }

    pub fn get(&self, key: u64) -> Option<&V> {
        let choices = self.family.derive_cells(key);
        self.find(key, &choices)
            .and_then(|c| self.cells[c].occupant())
            .map(|(_, v)| v)
    }

    pub fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>> {
        let choices = self.family.derive_cells(key);
        if self.find(key, &choices).is_some() {
            return Err(InsertError::DuplicateKey { key, value });
        }

        let target = match self.options.rule {
            InsertRule::Sec3 => match self.pick_empty(&choices) {
                Some(c) => c,
                None => self.pick_min_wear(&choices, None),
            },
            InsertRule::Sec2 => self.pick_min_wear(&choices, None),
        };

        let mut outcome = DisplacementOutcome {
            writes_performed: 1,
            ..Default::default()
        };
        match self.cells[target].write(key, value) {
            None => {
                self.live += 1;
                Ok(outcome)
            }
            Some(evicted) => {
                outcome.chain_length = 1;
                match self.resolve_displacement(evicted, target, &mut outcome) {
                    Ok(()) => Ok(outcome),
                    Err((key, value)) => Err(InsertError::InsertionFailed {
                        key,
                        value,
                        outcome,
                    }),
                }
            }
        }
    }

    /// Places an item that was just evicted from `from` (whose wear already
    /// includes the evicting write), continuing the chain under the shared
    /// kick budget. On budget exhaustion the homeless item is returned.
    pub(crate) fn resolve_displacement(
        &mut self,
        item: (u64, V),
        from: usize,
        outcome: &mut DisplacementOutcome,
    ) -> Result<(), (u64, V)> {
        let mut item = item;
        let mut prev = from;
        loop {
            if outcome.chain_length >= self.options.max_kicks as u64 {
                outcome.failed = true;
                return Err(item);
            }
            let choices = self.family.derive_cells(item.0);
            let target = self.pick_min_wear(&choices, Some(prev));
            if target == prev && self.options.fast_forward {
                self.fast_forward_pingpong(&mut item, prev, &choices, outcome);
                continue;
            }
            outcome.writes_performed += 1;
            let (key, value) = item;
            match self.cells[target].write(key, value) {
                None => {
                    self.live += 1;
                    return Ok(());
                }
                Some(evicted) => {
                    outcome.chain_length += 1;
                    item = evicted;
                    prev = target;
                }
            }
        }
    }

    /// Collapses a run of bounces in `contested`.
    ///
    /// Entry: `held` was just evicted from `contested`, which is its unique
    /// minimum-wear choice, so it is about to bounce straight back. Bounce `j`
    /// (counting from 0) is taken by `held` when `j` is even and by the
    /// current occupant when odd, and happens iff `wear + j` is still below
    /// the bouncing item's least-worn other cell. The first `j` where that
    /// fails ends the run; the budget may end it sooner. Afterwards the wear,
    /// occupant and held item equal those of the step-by-step loop.
    pub(crate) fn fast_forward_pingpong(
        &mut self,
        held: &mut (u64, V),
        contested: usize,
        held_choices: &ChoiceSet,
        outcome: &mut DisplacementOutcome,
    ) {
        let wear = u64::from(self.cells[contested].wear());
        let held_floor = self.min_other_wear(held_choices, contested);
        let partner = self.cells[contested]
            .key()
            .expect("contested cell holds the evicting item");
        let partner_choices = self.family.derive_cells(partner);
        let partner_floor = self.min_other_wear(&partner_choices, contested);

        let even_stop = round_up_even(held_floor.saturating_sub(wear));
        let odd_stop = round_up_odd(partner_floor.saturating_sub(wear).max(1));
        let budget = self.options.max_kicks as u64 - outcome.chain_length;
        let bounces = even_stop.min(odd_stop).min(budget);

        let cell = &mut self.cells[contested];
        cell.add_wear(bounces as u32);
        outcome.writes_performed += bounces;
        outcome.chain_length += bounces;
        if bounces % 2 == 1 {
            let occupant = cell
                .occupant_mut()
                .as_mut()
                .expect("contested cell occupied");
            std::mem::swap(occupant, held);
        }
    }

    fn min_other_wear(&self, choices: &ChoiceSet, skip: usize) -> u64 {
        choices
            .iter()
            .filter(|&&c| c != skip)
            .map(|&c| u64::from(self.cells[c].wear()))
            .min()
            .expect("d >= 2 leaves another choice")
    }

    fn pick_empty(&mut self, choices: &ChoiceSet) -> Option<usize> {
        let mut empties = [0usize; MAX_CHOICES];
        let mut len = 0;
        for &c in choices.iter() {
            if self.cells[c].is_empty() {
                empties[len] = c;
                len += 1;
            }
        }
        match len {
            0 => None,
            1 => Some(empties[0]),
            _ => Some(empties[self.rng.uniform_index(len)]),
        }
    }

    /// Least-worn choice. `avoid` loses every tie it is part of.
    fn pick_min_wear(&mut self, choices: &ChoiceSet, avoid: Option<usize>) -> usize {
        let min = choices
            .iter()
            .map(|&c| self.cells[c].wear())
            .min()
            .expect("non-empty choice set");
        let mut tied = [0usize; MAX_CHOICES];
        let mut len = 0;
        for &c in choices.iter() {
            if self.cells[c].wear() == min && Some(c) != avoid {
                tied[len] = c;
                len += 1;
            }
        }
        match len {
            0 => avoid.expect("avoided cell is the unique minimum"),
            1 => tied[0],
            _ => tied[self.rng.uniform_index(len)],
        }
    }

    pub fn remove(&mut self, key: u64) -> Option<V> {
        let choices = self.family.derive_cells(key);
        let idx = self.find(key, &choices)?;
        let cell = &mut self.cells[idx];
        let (_, value) = cell.take()?;
        if self.options.wear_on_delete {
            cell.add_wear(1);
        }
        self.live -= 1;
        Some(value)
    }

    /// Full scan of the placement invariants: every item sits in one of its
    /// choices, no key appears twice, and the live count matches.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = HashSet::with_capacity(self.live);
        let mut occupied = 0;
        for (i, key) in self.placements() {
            occupied += 1;
            if !self.family.derive_cells(key).contains(i) {
                return Err(format!("key {key} stored in cell {i} outside its choices"));
            }
            if !seen.insert(key) {
                return Err(format!("key {key} stored twice"));
            }
        }
        if occupied != self.live {
            return Err(format!(
                "live count {} but {occupied} occupied cells",
                self.live
            ));
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn force_cell(&mut self, idx: usize, occupant: Option<(u64, V)>, wear: u32) {
        let was = self.cells[idx].is_empty();
        let now = occupant.is_none();
        self.cells[idx] = Cell::default();
        if let Some(item) = occupant {
            self.cells[idx].restore(item);
        }
        self.cells[idx].add_wear(wear);
        match (was, now) {
            (true, false) => self.live += 1,
            (false, true) => self.live -= 1,
            _ => {}
        }
    }
}

#[inline]
fn round_up_even(x: u64) -> u64 {
    x + (x & 1)
}

#[inline]
fn round_up_odd(x: u64) -> u64 {
    x | 1
}

impl<V> WearDictionary<V> for WearTable<V> {
    fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>> {
        WearTable::insert(self, key, value)
    }

    fn remove_counted(&mut self, key: u64) -> Option<(V, u64)> {
        let erase = u64::from(self.options.wear_on_delete);
        WearTable::remove(self, key).map(|v| (v, erase))
    }

    fn get(&self, key: u64) -> Option<&V> {
        WearTable::get(self, key)
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
