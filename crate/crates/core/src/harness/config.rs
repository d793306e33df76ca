use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ConfigError;
use crate::table::{InsertRule, DEFAULT_MAX_KICKS};

#[derive(
    Clone,
    Copy,
    Debug,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    WearCuckoo,
    StdCuckoo,
    LinearProbing,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::WearCuckoo, Algo::StdCuckoo, Algo::LinearProbing];

    pub fn name(&self) -> &'static str {
        match self {
            Algo::WearCuckoo => "wear-cuckoo",
            Algo::StdCuckoo => "std-cuckoo",
            Algo::LinearProbing => "linear-probing",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Target fill ratio kept as an exact fraction so `floor(ratio * capacity)`
/// has no rounding surprises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UsageRatio {
    num: u64,
    den: u64,
}

impl UsageRatio {
    pub fn new(num: u64, den: u64) -> Result<Self, ConfigError> {
        if den == 0 || num == 0 || num >= den {
            return Err(ConfigError::Ratio(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(UsageRatio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `floor(ratio * capacity)`.
    pub fn items_for(&self, capacity: usize) -> u64 {
        (capacity as u128 * self.num as u128 / self.den as u128) as u64
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FromStr for UsageRatio {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::Ratio(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return UsageRatio::new(n, d).map_err(|_| bad());
        }
        // Decimal: "0.5", ".25"
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || (int.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        UsageRatio::new(num, den).map_err(|_| bad())
    }
}

impl fmt::Display for UsageRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for UsageRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UsageRatio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algo: Algo,
    pub capacity: usize,
    pub d: usize,
    pub ratio: UsageRatio,
    pub pairs: u64,
    pub seed: u64,
    /// Operations between checkpoints; `None` means 1% of the planned total.
    pub checkpoint_interval: Option<u64>,
    pub max_kicks: usize,
    pub wear_on_delete: bool,
    pub rule: InsertRule,
    pub fast_forward: bool,
    pub analyze: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algo: Algo::WearCuckoo,
            capacity: 300_000,
            d: 3,
            ratio: UsageRatio { num: 1, den: 2 },
            pairs: 1_000_000,
            seed: 1,
            checkpoint_interval: None,
            max_kicks: DEFAULT_MAX_KICKS,
            wear_on_delete: false,
            rule: InsertRule::Sec3,
            fast_forward: true,
            analyze: false,
        }
    }
}

impl ExperimentConfig {
    pub fn fill_items(&self) -> u64 {
        self.ratio.items_for(self.capacity)
    }

    pub fn planned_ops(&self) -> u64 {
        self.fill_items() + 2 * self.pairs
    }

    pub fn effective_checkpoint_interval(&self) -> u64 {
        self.checkpoint_interval
            .unwrap_or_else(|| self.planned_ops() / 100)
            .max(1)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.capacity == 0 {
            return Err(ConfigError::Invalid("capacity must be positive".into()));
        }
        if self.algo != Algo::LinearProbing && self.d < 3 {
            return Err(ConfigError::CuckooChoices(self.d));
        }
        if self.max_kicks == 0 {
            return Err(ConfigError::MaxKicks);
        }
        if self.checkpoint_interval == Some(0) {
            return Err(ConfigError::Invalid(
                "checkpoint interval must be positive".into(),
            ));
        }
        if self.pairs > 0 && self.fill_items() == 0 {
            return Err(ConfigError::Invalid(
                "operation pairs need at least one live item after the fill".into(),
            ));
        }
        if self.analyze && (self.algo != Algo::WearCuckoo || self.pairs != 0) {
            return Err(ConfigError::Invalid(
                "--analyze requires --algo wear-cuckoo and --pairs 0 (insert-only)".into(),
            ));
        }
        Ok(())
    }
}
