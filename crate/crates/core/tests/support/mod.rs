//! Naive reference models shared by the integration tests.
//!
//! Each model stores plain `Vec`s, replays every displacement one write at a
//! time and draws from a `TableRng` in the same situations as the real
//! tables, so final states can be compared cell by cell.

#![allow(dead_code)]

use wearhash::{HashFamily, InsertRule, TableRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefInsert {
    Placed {
        writes: u64,
        chain: u64,
    },
    Duplicate,
    Failed {
        homeless: u64,
        writes: u64,
        chain: u64,
    },
}

/// Step-by-step wear-aware cuckoo table.
pub struct RefWear {
    pub slots: Vec<Option<u64>>,
    pub wear: Vec<u32>,
    family: HashFamily,
    rng: TableRng,
    max_kicks: u64,
    wear_on_delete: bool,
    rule: InsertRule,
}

impl RefWear {
    pub fn new(n: usize, d: usize, seed: u64, max_kicks: u64) -> Self {
        Self::with_policy(n, d, seed, max_kicks, false, InsertRule::Sec3)
    }

    pub fn with_policy(
        n: usize,
        d: usize,
        seed: u64,
        max_kicks: u64,
        wear_on_delete: bool,
        rule: InsertRule,
    ) -> Self {
        let family = HashFamily::new(seed, d, n).unwrap();
        RefWear {
            slots: vec![None; n],
            wear: vec![0; n],
            family,
            rng: TableRng::for_family(&family),
            max_kicks,
            wear_on_delete,
            rule,
        }
    }

    fn cells_of(&self, key: u64) -> Vec<usize> {
        self.family.derive_cells(key).to_vec()
    }

    fn pick(&mut self, pool: &[usize]) -> usize {
        if pool.len() == 1 {
            pool[0]
        } else {
            pool[self.rng.uniform_index(pool.len())]
        }
    }

    fn least_worn(&mut self, cells: &[usize], avoid: Option<usize>) -> usize {
        let min = cells.iter().map(|&c| self.wear[c]).min().unwrap();
        let tied: Vec<usize> = cells
            .iter()
            .copied()
            .filter(|&c| self.wear[c] == min && Some(c) != avoid)
            .collect();
        if tied.is_empty() {
            avoid.unwrap()
        } else {
            self.pick(&tied)
        }
    }

    pub fn insert(&mut self, key: u64) -> RefInsert {
        let cells = self.cells_of(key);
        if cells.iter().any(|&c| self.slots[c] == Some(key)) {
            return RefInsert::Duplicate;
        }
        let empties: Vec<usize> = cells
            .iter()
            .copied()
            .filter(|&c| self.slots[c].is_none())
            .collect();
        let mut target = match self.rule {
            InsertRule::Sec3 if !empties.is_empty() => self.pick(&empties),
            _ => self.least_worn(&cells, None),
        };
        let mut held = key;
        let mut writes = 0;
        let mut chain = 0;
        loop {
            self.wear[target] += 1;
            writes += 1;
            match self.slots[target].replace(held) {
                None => return RefInsert::Placed { writes, chain },
                Some(evicted) => {
                    chain += 1;
                    held = evicted;
                }
            }
            if chain >= self.max_kicks {
                return RefInsert::Failed {
                    homeless: held,
                    writes,
                    chain,
                };
            }
            let cells = self.cells_of(held);
            target = self.least_worn(&cells, Some(target));
        }
    }

    pub fn remove(&mut self, key: u64) -> bool {
        for c in self.cells_of(key) {
            if self.slots[c] == Some(key) {
                self.slots[c] = None;
                if self.wear_on_delete {
                    self.wear[c] += 1;
                }
                return true;
            }
        }
        false
    }

    pub fn contains(&self, key: u64) -> bool {
        self.cells_of(key)
            .iter()
            .any(|&c| self.slots[c] == Some(key))
    }
}

/// Step-by-step random-walk cuckoo table.
pub struct RefStd {
    pub slots: Vec<Option<u64>>,
    pub wear: Vec<u32>,
    family: HashFamily,
    rng: TableRng,
    max_kicks: u64,
}

impl RefStd {
    pub fn new(n: usize, d: usize, seed: u64, max_kicks: u64) -> Self {
        let family = HashFamily::new(seed, d, n).unwrap();
        RefStd {
            slots: vec![None; n],
            wear: vec![0; n],
            family,
            rng: TableRng::for_family(&family),
            max_kicks,
        }
    }

    pub fn insert(&mut self, key: u64) -> RefInsert {
        let cells = self.family.derive_cells(key).to_vec();
        if cells.iter().any(|&c| self.slots[c] == Some(key)) {
            return RefInsert::Duplicate;
        }
        let mut held = key;
        let mut cells = cells;
        let mut prev: Option<usize> = None;
        let mut writes = 0;
        let mut chain = 0;
        loop {
            let target = match cells.iter().copied().find(|&c| self.slots[c].is_none()) {
                Some(c) => c,
                None => {
                    if chain >= self.max_kicks {
                        return RefInsert::Failed {
                            homeless: held,
                            writes,
                            chain,
                        };
                    }
                    let others: Vec<usize> =
                        cells.iter().copied().filter(|&c| Some(c) != prev).collect();
                    others[self.rng.uniform_index(others.len())]
                }
            };
            self.wear[target] += 1;
            writes += 1;
            match self.slots[target].replace(held) {
                None => return RefInsert::Placed { writes, chain },
                Some(evicted) => {
                    chain += 1;
                    held = evicted;
                    cells = self.family.derive_cells(held).to_vec();
                    prev = Some(target);
                }
            }
        }
    }

    pub fn remove(&mut self, key: u64) -> bool {
        for &c in self.family.derive_cells(key).iter() {
            if self.slots[c] == Some(key) {
                self.slots[c] = None;
                return true;
            }
        }
        false
    }
}

/// Linear probing with eager deletion, re-simulated by brute force: after a
/// deletion the rest of the cluster is lifted out and reinserted one item at
/// a time, in slot order.
pub struct RefLinear {
    pub slots: Vec<Option<u64>>,
    pub wear: Vec<u32>,
    family: HashFamily,
}

impl RefLinear {
    pub fn new(n: usize, seed: u64) -> Self {
        RefLinear {
            slots: vec![None; n],
            wear: vec![0; n],
            family: HashFamily::new(seed, 1, n).unwrap(),
        }
    }

    pub fn home(&self, key: u64) -> usize {
        self.family.index(0, key)
    }

    fn probe_empty(&self, key: u64) -> usize {
        let n = self.slots.len();
        (0..n)
            .map(|i| (self.home(key) + i) % n)
            .find(|&s| self.slots[s].is_none())
            .expect("table not full")
    }

    pub fn position(&self, key: u64) -> Option<usize> {
        let n = self.slots.len();
        for i in 0..n {
            let s = (self.home(key) + i) % n;
            match self.slots[s] {
                None => return None,
                Some(k) if k == key => return Some(s),
                Some(_) => {}
            }
        }
        None
    }

    pub fn insert(&mut self, key: u64) -> bool {
        if self.position(key).is_some() || self.slots.iter().all(Option::is_some) {
            return false;
        }
        let s = self.probe_empty(key);
        self.slots[s] = Some(key);
        self.wear[s] += 1;
        true
    }

    /// Returns the physical writes caused by the deletion, or `None` if the
    /// key is absent.
    pub fn remove(&mut self, key: u64) -> Option<u64> {
        let n = self.slots.len();
        let pos = self.position(key)?;
        self.slots[pos] = None;
        let mut cluster = Vec::new();
        let mut s = (pos + 1) % n;
        while let Some(k) = self.slots[s] {
            cluster.push((s, k));
            s = (s + 1) % n;
        }
        let mut writes = 0;
        for (from, k) in cluster {
            self.slots[from] = None;
            let to = self.probe_empty(k);
            self.slots[to] = Some(k);
            if to != from {
                self.wear[to] += 1;
                writes += 1;
            }
        }
        Some(writes)
    }
}

/// Script step for mixed workloads.
#[derive(Clone, Copy, Debug)]
pub enum Op {
    Insert(u64),
    Remove(u64),
}

/// Random mixed script over a small key universe so deletes often hit.
pub fn random_script(rng: &mut TableRng, len: usize, universe: u64) -> Vec<Op> {
    (0..len)
        .map(|_| {
            let key = rng.uniform_index(universe as usize) as u64;
            if rng.uniform_index(3) == 0 {
                Op::Remove(key)
            } else {
                Op::Insert(key)
            }
        })
        .collect()
}

pub fn occupants<V>(cells: &[wearhash::Cell<V>]) -> Vec<Option<u64>> {
    cells.iter().map(|c| c.key()).collect()
}

pub fn wears<V>(cells: &[wearhash::Cell<V>]) -> Vec<u32> {
    cells.iter().map(|c| c.wear()).collect()
}
