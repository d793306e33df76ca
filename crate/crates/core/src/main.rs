use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use wearhash::harness::{
    run_experiment, write_report_files, Algo, ExperimentConfig, ExperimentReport, HarnessError,
    UsageRatio,
};
use wearhash::InsertRule;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    /// Random empty choice first, else displace the least-worn occupant.
    Sec3,
    /// Always the least-worn choice.
    Sec2,
}

/// Inclusive seed range written `a..b` (exclusive end) or `a..=b`.
#[derive(Clone, Copy, Debug)]
struct SeedRange {
    start: u64,
    end_inclusive: u64,
}

impl FromStr for SeedRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected a..b or a..=b, got {s:?}");
        let (a, b, inclusive) = if let Some((a, b)) = s.split_once("..=") {
            (a, b, true)
        } else if let Some((a, b)) = s.split_once("..") {
            (a, b, false)
        } else {
            return Err(bad());
        };
        let start: u64 = a.trim().parse().map_err(|_| bad())?;
        let end: u64 = b.trim().parse().map_err(|_| bad())?;
        let end_inclusive = if inclusive {
            end
        } else {
            end.checked_sub(1).ok_or_else(bad)?
        };
        if end_inclusive < start {
            return Err(format!("empty seed range {s:?}"));
        }
        Ok(SeedRange {
            start,
            end_inclusive,
        })
    }
}

/// Wear experiments: fill a table to a usage ratio, then run delete/insert
/// operation pairs and record how often each cell gets rewritten.
#[derive(Debug, Parser)]
#[command(name = "wearhash", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Algo::WearCuckoo)]
    algo: Algo,
    /// Number of cells.
    #[arg(long, default_value_t = 300_000)]
    capacity: usize,
    /// Hash choices per key (cuckoo tables only).
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Target usage ratio, e.g. 1/6 or 0.5.
    #[arg(long, default_value = "1/2")]
    ratio: UsageRatio,
    /// Delete/insert operation pairs after the fill.
    #[arg(long, default_value_t = 1_000_000)]
    pairs: u64,
    #[arg(long, default_value_t = 1, conflicts_with = "seeds")]
    seed: u64,
    /// Run several seeds concurrently, e.g. 1..6.
    #[arg(long)]
    seeds: Option<SeedRange>,
    /// Operations between wear checkpoints (default: 1% of the run).
    #[arg(long)]
    checkpoint_interval: Option<u64>,
    #[arg(long, default_value_t = wearhash::DEFAULT_MAX_KICKS)]
    max_kicks: usize,
    /// Count a write when an item is deleted.
    #[arg(long)]
    wear_on_delete: bool,
    #[arg(long, value_enum, default_value_t = RuleArg::Sec3)]
    rule: RuleArg,
    /// Replay ping-pong displacements one bounce at a time.
    #[arg(long)]
    no_fast_forward: bool,
    /// Insert-only hypergraph analysis (wear-cuckoo, --pairs 0).
    #[arg(long)]
    analyze: bool,
    /// Output prefix: writes PREFIX.csv, PREFIX.hist.csv and PREFIX.json.
    /// Without it the JSON report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn config(&self, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            algo: self.algo,
            capacity: self.capacity,
            d: self.d,
            ratio: self.ratio,
            pairs: self.pairs,
            seed,
            checkpoint_interval: self.checkpoint_interval,
            max_kicks: self.max_kicks,
            wear_on_delete: self.wear_on_delete,
            rule: match self.rule {
                RuleArg::Sec3 => InsertRule::Sec3,
                RuleArg::Sec2 => InsertRule::Sec2,
            },
            fast_forward: !self.no_fast_forward,
            analyze: self.analyze,
        }
    }
}

fn seed_prefix(prefix: &Path, seed: u64) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!(".seed{seed}"));
    PathBuf::from(name)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let seeds: Vec<u64> = match cli.seeds {
        Some(r) => (r.start..=r.end_inclusive).collect(),
        None => vec![cli.seed],
    };
    for &seed in &seeds {
        if let Err(e) = cli.config(seed).validate() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let results: Vec<(u64, Result<ExperimentReport, HarnessError>)> = seeds
        .par_iter()
        .map(|&seed| (seed, run_experiment(&cli.config(seed))))
        .collect();

    let mut status = ExitCode::SUCCESS;
    let mut reports = Vec::with_capacity(results.len());
    for (seed, result) in results {
        let report = match result {
            Ok(r) => r,
            Err(HarnessError::FillAborted { reason, report }) => {
                eprintln!("error: seed {seed}: fill aborted: {reason}");
                status = ExitCode::FAILURE;
                *report
            }
            Err(e) => {
                eprintln!("error: seed {seed}: {e}");
                return ExitCode::from(2);
            }
        };
        reports.push((seed, report));
    }

    let multi = cli.seeds.is_some();
    let json = if multi {
        serde_json::Value::Array(reports.iter().map(|(_, r)| r.to_json_value()).collect())
    } else {
        reports[0].1.to_json_value()
    };

    match &cli.out {
        Some(prefix) => {
            for (seed, report) in &reports {
                let p = if multi {
                    seed_prefix(prefix, *seed)
                } else {
                    prefix.clone()
                };
                if let Err(e) = write_report_files(report, &p) {
                    eprintln!("error: writing outputs for {}: {e}", p.display());
                    return ExitCode::FAILURE;
                }
            }
            if multi {
                let mut path = prefix.as_os_str().to_owned();
                path.push(".json");
                let text = serde_json::to_string_pretty(&json).expect("json");
                if let Err(e) = std::fs::write(PathBuf::from(path), text + "\n") {
                    eprintln!("error: writing merged report: {e}");
                    return ExitCode::FAILURE;
                }
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&json).expect("json")),
    }
    status
}
