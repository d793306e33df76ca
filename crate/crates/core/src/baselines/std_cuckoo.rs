use crate::error::{ConfigError, InsertError};
use crate::hash_family::{ChoiceSet, HashFamily, TableRng};
use crate::table::{Cell, DisplacementOutcome, WearDictionary, DEFAULT_MAX_KICKS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StdCuckooOptions {
    pub max_kicks: usize,
    pub wear_on_delete: bool,
}

impl Default for StdCuckooOptions {
    fn default() -> Self {
        StdCuckooOptions {
            max_kicks: DEFAULT_MAX_KICKS,
            wear_on_delete: false,
        }
    }
}

/// Random-walk cuckoo hashing: first empty choice in order, otherwise evict a
/// uniformly random choice (never the cell the item was just evicted from).
pub struct StdCuckooTable<V> {
    cells: Vec<Cell<V>>,
    family: HashFamily,
    rng: TableRng,
    options: StdCuckooOptions,
    live: usize,
}

impl<V> StdCuckooTable<V> {
    pub fn new(capacity: usize, d: usize, seed: u64) -> Result<Self, ConfigError> {
        Self::with_options(capacity, d, seed, StdCuckooOptions::default())
    }

    pub fn with_options(
        capacity: usize,
        d: usize,
        seed: u64,
        options: StdCuckooOptions,
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
        Ok(StdCuckooTable {
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

    fn find(&self, key: u64, choices: &ChoiceSet) -> Option<usize> {
        choices
            .iter()
            .copied()
            .find(|&c| self.cells[c].key() == Some(key))
    }

    fn first_empty(&self, choices: &ChoiceSet) -> Option<usize> {
        choices.iter().copied().find(|&c| self.cells[c].is_empty())
    }

    pub fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>> {
        let mut choices = self.family.derive_cells(key);
        if self.find(key, &choices).is_some() {
            return Err(InsertError::DuplicateKey { key, value });
        }
        let mut outcome = DisplacementOutcome::default();
        let mut item = (key, value);
        let mut prev: Option<usize> = None;
        loop {
            let target = match self.first_empty(&choices) {
                Some(c) => c,
                None => {
                    if outcome.chain_length >= self.options.max_kicks as u64 {
                        outcome.failed = true;
                        let (key, value) = item;
                        return Err(InsertError::InsertionFailed {
                            key,
                            value,
                            outcome,
                        });
                    }
                    self.random_victim(&choices, prev)
                }
            };
            outcome.writes_performed += 1;
            let (k, v) = item;
            match self.cells[target].write(k, v) {
                None => {
                    self.live += 1;
                    return Ok(outcome);
                }
                Some(evicted) => {
                    outcome.chain_length += 1;
                    choices = self.family.derive_cells(evicted.0);
                    item = evicted;
                    prev = Some(target);
                }
            }
        }
    }

    fn random_victim(&mut self, choices: &ChoiceSet, exclude: Option<usize>) -> usize {
        match exclude {
            None => choices[self.rng.uniform_index(choices.len())],
            Some(skip) => {
                // The excluded cell is always one of the item's choices.
                let pick = self.rng.uniform_index(choices.len() - 1);
                let mut others = choices.iter().copied().filter(|&c| c != skip);
                others.nth(pick).expect("pick within the remaining choices")
            }
        }
    }

    pub fn get(&self, key: u64) -> Option<&V> {
        let choices = self.family.derive_cells(key);
        self.find(key, &choices)
            .and_then(|c| self.cells[c].occupant())
            .map(|(_, v)| v)
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

    pub fn validate(&self) -> Result<(), String> {
        let mut occupied = 0;
        let mut seen = std::collections::HashSet::new();
        for (i, cell) in self.cells.iter().enumerate() {
            if let Some(key) = cell.key() {
                occupied += 1;
                if !self.family.derive_cells(key).contains(i) {
                    return Err(format!("key {key} stored in cell {i} outside its choices"));
                }
                if !seen.insert(key) {
                    return Err(format!("key {key} stored twice"));
                }
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
}

impl<V> WearDictionary<V> for StdCuckooTable<V> {
    fn insert(&mut self, key: u64, value: V) -> Result<DisplacementOutcome, InsertError<V>> {
        StdCuckooTable::insert(self, key, value)
    }

    fn remove_counted(&mut self, key: u64) -> Option<(V, u64)> {
        let erase = u64::from(self.options.wear_on_delete);
        StdCuckooTable::remove(self, key).map(|v| (v, erase))
    }

    fn get(&self, key: u64) -> Option<&V> {
        StdCuckooTable::get(self, key)
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
