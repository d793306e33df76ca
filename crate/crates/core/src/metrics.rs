//! Wear statistics, checkpoint time series and their CSV forms.
//!
//! Series CSV: header `ops,max_wear,avg_wear`, one row per checkpoint,
//! `avg_wear` with four fractional digits. Histogram CSV: header
//! `wear,count`, rows in increasing wear order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub const SERIES_HEADER: &str = "ops,max_wear,avg_wear";
pub const HISTOGRAM_HEADER: &str = "wear,count";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WearStats {
    pub ops_elapsed: u64,
    pub max_wear: u32,
    /// Total wear divided by the number of cells, occupied or not.
    pub avg_wear: f64,
    pub total_wear: u64,
    pub cells: usize,
    /// wear value -> number of cells with that wear
    pub histogram: BTreeMap<u32, u64>,
}

/// Summarizes one wear vector.
pub fn snapshot(wear: &[u32], ops_elapsed: u64) -> WearStats {
    let mut histogram = BTreeMap::new();
    let mut total = 0u64;
    let mut max = 0u32;
    for &w in wear {
        *histogram.entry(w).or_insert(0u64) += 1;
        total += u64::from(w);
        max = max.max(w);
    }
    let avg = if wear.is_empty() {
        0.0
    } else {
        total as f64 / wear.len() as f64
    };
    WearStats {
        ops_elapsed,
        max_wear: max,
        avg_wear: avg,
        total_wear: total,
        cells: wear.len(),
        histogram,
    }
}

/// A checkpoint row as it appears in the series CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub ops: u64,
    pub max_wear: u32,
    pub avg_wear: f64,
}

impl From<&WearStats> for Checkpoint {
    fn from(s: &WearStats) -> Self {
        Checkpoint {
            ops: s.ops_elapsed,
            max_wear: s.max_wear,
            avg_wear: s.avg_wear,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("checkpoint at ops={got} does not follow ops={last}")]
    NotIncreasing { last: u64, got: u64 },
    #[error("max wear fell from {last} to {got}")]
    MaxWearDecreased { last: u32, got: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    checkpoints: Vec<Checkpoint>,
}

impl TimeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn push(&mut self, point: Checkpoint) -> Result<(), SeriesError> {
        if let Some(last) = self.checkpoints.last() {
            if point.ops <= last.ops {
                return Err(SeriesError::NotIncreasing {
                    last: last.ops,
                    got: point.ops,
                });
            }
            if point.max_wear < last.max_wear {
                return Err(SeriesError::MaxWearDecreased {
                    last: last.max_wear,
                    got: point.max_wear,
                });
            }
        }
        self.checkpoints.push(point);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{SERIES_HEADER}")?;
        for c in &self.checkpoints {
            writeln!(out, "{},{},{:.4}", c.ops, c.max_wear, c.avg_wear)?;
        }
        out.flush()
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self, SeriesError> {
        let mut lines = input.lines();
        match lines.next().transpose()? {
            Some(h) if h.trim_end() == SERIES_HEADER => {}
            other => {
                return Err(SeriesError::Parse {
                    line: 1,
                    msg: format!("expected header {SERIES_HEADER:?}, found {other:?}"),
                })
            }
        }
        let mut series = TimeSeries::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let lineno = i + 2;
            let parse_err = |msg: &str| SeriesError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            let mut fields = line.trim_end().split(',');
            let ops = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| parse_err("bad ops"))?;
            let max_wear = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| parse_err("bad max_wear"))?;
            let avg_wear = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| parse_err("bad avg_wear"))?;
            if fields.next().is_some() {
                return Err(parse_err("too many fields"));
            }
            series.push(Checkpoint {
                ops,
                max_wear,
                avg_wear,
            })?;
        }
        Ok(series)
    }
}

/// Writes the series CSV to `path`.
pub fn emit_csv(series: &TimeSeries, path: &Path) -> io::Result<()> {
    series.write_csv(BufWriter::new(File::create(path)?))
}

pub fn write_histogram_csv<W: Write>(stats: &WearStats, mut out: W) -> io::Result<()> {
    writeln!(out, "{HISTOGRAM_HEADER}")?;
    for (wear, count) in &stats.histogram {
        writeln!(out, "{wear},{count}")?;
    }
    out.flush()
}

pub fn emit_histogram_csv(stats: &WearStats, path: &Path) -> io::Result<()> {
    write_histogram_csv(stats, BufWriter::new(File::create(path)?))
}
