use std::io;
use std::path::{Path, PathBuf};

use super::run::ExperimentReport;
use crate::metrics::{emit_csv, emit_histogram_csv};

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

/// `(series csv, histogram csv, json)` paths for an output prefix.
pub fn output_paths(prefix: &Path) -> (PathBuf, PathBuf, PathBuf) {
    (
        with_suffix(prefix, ".csv"),
        with_suffix(prefix, ".hist.csv"),
        with_suffix(prefix, ".json"),
    )
}

/// Writes the series CSV, the final histogram CSV and the JSON report.
pub fn write_report_files(report: &ExperimentReport, prefix: &Path) -> io::Result<()> {
    let (csv, hist, json) = output_paths(prefix);
    emit_csv(&report.series, &csv)?;
    emit_histogram_csv(&report.final_stats, &hist)?;
    std::fs::write(json, report.to_json() + "\n")
}
