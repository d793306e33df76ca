//! Seeded hash family producing `d` distinct cell choices per key, plus the
//! per-table random source used for tie-breaks and random empty-cell picks.

use std::fmt;
use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ConfigError;

/// Largest number of choices a [`ChoiceSet`] can hold.
pub const MAX_CHOICES: usize = 8;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer. Bijective on `u64` with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds an arbitrary byte string into a 64-bit key.
pub fn key_from_bytes(bytes: &[u8]) -> u64 {
    let mut acc = mix64(bytes.len() as u64 ^ GOLDEN);
    for chunk in bytes.chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        acc = mix64(acc ^ u64::from_le_bytes(word)).wrapping_add(GOLDEN);
    }
    mix64(acc)
}

/// Maps a uniform 64-bit hash onto `[0, n)` without a division.
#[inline]
fn reduce(hash: u64, n: usize) -> usize {
    ((u128::from(hash) * n as u128) >> 64) as usize
}

/// A deterministic family of `d` hash functions over a table of `n` cells.
///
/// The `i`-th function is `mix(key ^ mix(seed + (i + 1) * φ))` reduced onto
/// `[0, n)`. [`HashFamily::derive_cells`] walks `i = 0, 1, 2, ...` and keeps
/// the first `d` distinct indices.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct HashFamily {
    seed: u64,
    d: usize,
    n: usize,
}

impl fmt::Debug for HashFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HashFamily")
            .field("seed", &self.seed)
            .field("d", &self.d)
            .field("n", &self.n)
            .finish()
    }
}

impl HashFamily {
    /// Builds a family with `d` choices over `n` cells. Requires
    /// `1 <= d <= MAX_CHOICES` and `n >= d`.
    pub fn new(seed: u64, d: usize, n: usize) -> Result<Self, ConfigError> {
        if d == 0 || d > MAX_CHOICES {
            return Err(ConfigError::Choices {
                d,
                max: MAX_CHOICES,
            });
        }
        if n < d {
            return Err(ConfigError::Capacity { n, d });
        }
        Ok(HashFamily { seed, d, n })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The salted hash underlying every index draw.
    #[inline]
    pub fn salted_hash(&self, salt: u64, key: u64) -> u64 {
        let salt_key = mix64(
            self.seed
                .wrapping_add(salt.wrapping_add(1).wrapping_mul(GOLDEN)),
        );
        mix64(key ^ salt_key)
    }

    /// Index produced by the `salt`-th function, before duplicate removal.
    #[inline]
    pub fn index(&self, salt: u64, key: u64) -> usize {
        reduce(self.salted_hash(salt, key), self.n)
    }

    /// The `d` pairwise-distinct cells associated with `key`.
    pub fn derive_cells(&self, key: u64) -> ChoiceSet {
        let mut set = ChoiceSet::empty();
        let mut salt = 0u64;
        while (set.len as usize) < self.d {
            let idx = self.index(salt, key);
            if !set.contains(idx) {
                set.cells[set.len as usize] = idx;
                set.len += 1;
            }
            salt += 1;
        }
        set
    }

    pub fn derive_cells_bytes(&self, key: &[u8]) -> ChoiceSet {
        self.derive_cells(key_from_bytes(key))
    }
}

/// The ordered, pairwise-distinct cells of one key.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChoiceSet {
    cells: [usize; MAX_CHOICES],
    len: u8,
}

impl ChoiceSet {
    fn empty() -> Self {
        ChoiceSet {
            cells: [0; MAX_CHOICES],
            len: 0,
        }
    }

    /// Builds a choice set from explicit indices. Returns `None` if the slice
    /// is empty, too long, or contains a repeated index.
    pub fn from_slice(cells: &[usize]) -> Option<Self> {
        if cells.is_empty() || cells.len() > MAX_CHOICES {
            return None;
        }
        let mut set = ChoiceSet::empty();
        for &c in cells {
            if set.contains(c) {
                return None;
            }
            set.cells[set.len as usize] = c;
            set.len += 1;
        }
        Some(set)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.cells[..self.len as usize]
    }

    #[inline]
    pub fn contains(&self, cell: usize) -> bool {
        self.as_slice().contains(&cell)
    }
}

impl Deref for ChoiceSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        self.as_slice()
    }
}

impl fmt::Debug for ChoiceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// Seeded random source owned by a single table.
#[derive(Clone, Debug)]
pub struct TableRng(ChaCha8Rng);

impl TableRng {
    // Keeps the table stream decorrelated from the hash functions that share
    // the seed.
    const STREAM: u64 = 0x7461_626c_6572_6e67;

    pub fn new(seed: u64) -> Self {
        TableRng(ChaCha8Rng::seed_from_u64(mix64(seed ^ Self::STREAM)))
    }

    pub fn for_family(family: &HashFamily) -> Self {
        Self::new(family.seed())
    }

    /// Uniform draw from `[0, bound)`.
    ///
    /// # Panics
    /// Panics if `bound == 0`.
    #[inline]
    pub fn uniform_index(&mut self, bound: usize) -> usize {
        assert!(bound >= 1, "uniform_index bound must be positive");
        self.0.gen_range(0..bound)
    }
}
