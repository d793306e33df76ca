use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{Algo, ExperimentConfig};
use crate::baselines::{LinearProbeTable, StdCuckooOptions, StdCuckooTable};
use crate::error::{ConfigError, InsertError};
use crate::hash_family::{mix64, TableRng};
use crate::hypergraph::{
    check_wear_tree, component_summary, wear_children_violations, CellItemHypergraph,
    ComponentSummary, WearLayout,
};
use crate::metrics::{snapshot, Checkpoint, TimeSeries, WearStats};
use crate::table::WearDictionary;
use crate::wear_cuckoo::{WearOptions, WearTable};

/// Keys currently stored, with O(1) uniform sampling and swap removal.
#[derive(Clone, Debug, Default)]
pub struct LiveKeySet {
    keys: Vec<u64>,
}

impl LiveKeySet {
    pub fn with_capacity(n: usize) -> Self {
        LiveKeySet {
            keys: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn push(&mut self, key: u64) {
        self.keys.push(key);
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    /// Removes and returns a uniformly chosen key.
    pub fn take_random(&mut self, rng: &mut TableRng) -> Option<u64> {
        if self.keys.is_empty() {
            return None;
        }
        let idx = rng.uniform_index(self.keys.len());
        Some(self.keys.swap_remove(idx))
    }

    /// Removes `key` if present. Linear scan; only needed after an insertion
    /// failure drops an older item.
    pub fn remove_key(&mut self, key: u64) -> bool {
        match self.keys.iter().rposition(|&k| k == key) {
            Some(i) => {
                self.keys.swap_remove(i);
                true
            }
            None => false,
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("fill aborted after {} insertions: {reason}", report.fill_items)]
    FillAborted {
        reason: String,
        report: Box<ExperimentReport>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub summary: ComponentSummary,
    pub max_wear: u32,
    /// `(d-1)^(max_wear-1) + 1`, the smallest component able to host the
    /// maximum wear when no component is complex.
    pub required_component_size: u64,
    /// `required_component_size <= max_r`, checked only when there are no
    /// complex components.
    pub wear_size_bound_holds: Option<bool>,
    pub wear_child_violations: usize,
    pub tree_violations: usize,
    pub size_violations: usize,
}

impl AnalysisReport {
    pub fn violations(&self) -> usize {
        self.wear_child_violations + self.tree_violations + self.size_violations
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub series: TimeSeries,
    pub final_stats: WearStats,
    pub failures: u64,
    /// Items inserted during the fill phase.
    pub fill_items: u64,
    pub live_items: usize,
    pub ops: u64,
    /// Physical writes reported by the table, summed over the run.
    pub writes: u64,
    pub components: Option<AnalysisReport>,
}

#[derive(Serialize)]
struct FinalJson {
    max_wear: u32,
    avg_wear: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    config: &'a ExperimentConfig,
    #[serde(rename = "final")]
    final_: FinalJson,
    failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<&'a AnalysisReport>,
}

impl ExperimentReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            config: &self.config,
            final_: FinalJson {
                max_wear: self.final_stats.max_wear,
                avg_wear: self.final_stats.avg_wear,
            },
            failures: self.failures,
            components: self.components.as_ref(),
        })
        .expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
    }
}

/// A table mid-experiment together with everything needed to continue it.
pub struct Experiment<T> {
    pub table: T,
    pub live: LiveKeySet,
    pub series: TimeSeries,
    config: ExperimentConfig,
    rng: TableRng,
    ops: u64,
    next_key: u64,
    next_checkpoint: u64,
    interval: u64,
    failures: u64,
    writes: u64,
    fill_items: u64,
}

impl<T: WearDictionary<()>> Experiment<T> {
    fn new(table: T, config: &ExperimentConfig) -> Self {
        let interval = config.effective_checkpoint_interval();
        Experiment {
            live: LiveKeySet::with_capacity(config.fill_items() as usize),
            table,
            series: TimeSeries::new(),
            config: config.clone(),
            rng: TableRng::new(mix64(config.seed) ^ 0x0068_6172_6e65_7373),
            ops: 0,
            next_key: 0,
            next_checkpoint: interval,
            interval,
            failures: 0,
            writes: 0,
            fill_items: 0,
        }
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    fn tick(&mut self) {
        self.ops += 1;
        if self.ops >= self.next_checkpoint {
            self.checkpoint();
            while self.next_checkpoint <= self.ops {
                self.next_checkpoint += self.interval;
            }
        }
    }

    fn checkpoint(&mut self) {
        if self.series.last().is_some_and(|c| c.ops == self.ops) {
            return;
        }
        let stats = snapshot(&self.table.wear_snapshot(), self.ops);
        self.series
            .push(Checkpoint::from(&stats))
            .expect("ops increase and wear never decreases");
    }

    /// Inserts the next fresh key. On failure the homeless item (possibly an
    /// older key) leaves the live set.
    fn insert_fresh(&mut self) -> Result<(), InsertError<()>> {
        let key = self.next_key;
        self.next_key += 1;
        let result = self.table.insert(key, ());
        self.tick();
        match result {
            Ok(outcome) => {
                self.writes += outcome.writes_performed;
                self.live.push(key);
                Ok(())
            }
            Err(err) => {
                self.writes += err.writes_performed();
                if err.key() != key {
                    self.live.remove_key(err.key());
                    self.live.push(key);
                }
                self.failures += 1;
                Err(err)
            }
        }
    }

    fn report(&mut self) -> ExperimentReport {
        if self.ops > 0 {
            self.checkpoint();
        }
        ExperimentReport {
            config: self.config.clone(),
            series: self.series.clone(),
            final_stats: snapshot(&self.table.wear_snapshot(), self.ops),
            failures: self.failures,
            fill_items: self.fill_items,
            live_items: self.table.len(),
            ops: self.ops,
            writes: self.writes,
            components: None,
        }
    }
}

/// Inserts `floor(ratio * capacity)` consecutive integer keys into `table`.
pub fn run_fill<T: WearDictionary<()>>(
    table: T,
    config: &ExperimentConfig,
) -> Result<Experiment<T>, HarnessError> {
    config.validate()?;
    let mut exp = Experiment::new(table, config);
    for _ in 0..config.fill_items() {
        if let Err(err) = exp.insert_fresh() {
            let report = exp.report();
            return Err(HarnessError::FillAborted {
                reason: err.to_string(),
                report: Box::new(report),
            });
        }
        exp.fill_items += 1;
    }
    Ok(exp)
}

/// Runs `config.pairs` rounds of (delete a uniformly random live key, insert
/// a fresh key) and assembles the report.
pub fn run_pairs<T: WearDictionary<()>>(exp: &mut Experiment<T>) -> ExperimentReport {
    for _ in 0..exp.config.pairs {
        let Some(victim) = exp.live.take_random(&mut exp.rng) else {
            break;
        };
        let (_, writes) = exp
            .table
            .remove_counted(victim)
            .expect("live keys are present in the table");
        exp.writes += writes;
        exp.tick();
        // Failures are counted in the experiment; the pair still completes.
        let _ = exp.insert_fresh();
    }
    exp.report()
}

/// The table selected by `config.algo`, configured from its policy flags.
pub fn build_table<V: Send + 'static>(
    config: &ExperimentConfig,
) -> Result<Box<dyn WearDictionary<V> + Send>, ConfigError> {
    Ok(match config.algo {
        Algo::WearCuckoo => Box::new(wear_table::<V>(config)?),
        Algo::StdCuckoo => {
            let options = StdCuckooOptions {
                max_kicks: config.max_kicks,
                wear_on_delete: config.wear_on_delete,
            };
            Box::new(StdCuckooTable::with_options(
                config.capacity,
                config.d,
                config.seed,
                options,
            )?)
        }
        Algo::LinearProbing => Box::new(LinearProbeTable::with_options(
            config.capacity,
            config.seed,
            config.wear_on_delete,
        )?),
    })
}

pub fn wear_table<V>(config: &ExperimentConfig) -> Result<WearTable<V>, ConfigError> {
    let options = WearOptions {
        max_kicks: config.max_kicks,
        wear_on_delete: config.wear_on_delete,
        rule: config.rule,
        fast_forward: config.fast_forward,
    };
    WearTable::with_options(config.capacity, config.d, config.seed, options)
}

/// Runs one experiment end to end.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    if config.analyze {
        return run_analysis(config);
    }
    let mut exp = run_fill(build_table::<()>(config)?, config)?;
    Ok(run_pairs(&mut exp))
}

/// Structural analysis of a wear-cuckoo table's cell/item hypergraph.
pub fn analyze_table<V>(table: &WearTable<V>) -> AnalysisReport {
    let h = CellItemHypergraph::from_table(table);
    let layout = WearLayout::from_table(table);
    let stats = h.components();
    let summary = component_summary(&stats, table.capacity());
    let tree = check_wear_tree(&h, &layout);
    let max_wear = layout.wear.iter().copied().max().unwrap_or(0);
    let base = (h.d() - 1) as u64;
    let required = if max_wear == 0 {
        0
    } else {
        base.saturating_pow(max_wear - 1) + 1
    };
    let holds = (summary.complex_count == 0 && !stats.is_empty())
        .then_some(required <= summary.max_r as u64);
    AnalysisReport {
        summary,
        max_wear,
        required_component_size: required,
        wear_size_bound_holds: holds,
        wear_child_violations: wear_children_violations(&layout),
        tree_violations: tree.tree_violations,
        size_violations: tree.size_violations,
    }
}

/// Insert-only fill of a wear-cuckoo table followed by hypergraph analysis.
pub fn run_analysis(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let mut exp = run_fill(wear_table::<()>(config)?, config)?;
    let mut report = exp.report();
    report.components = Some(analyze_table(&exp.table));
    Ok(report)
}
