//! Experiment driver: fill a table to a usage ratio with consecutive integer
//! keys, then run delete/insert operation pairs at constant occupancy while
//! recording wear checkpoints.

mod config;
mod output;
mod run;

pub use config::{Algo, ExperimentConfig, UsageRatio};
pub use output::{output_paths, write_report_files};
pub use run::{
    analyze_table, build_table, run_analysis, run_experiment, run_fill, run_pairs, wear_table,
    AnalysisReport, Experiment, ExperimentReport, HarnessError, LiveKeySet,
};
