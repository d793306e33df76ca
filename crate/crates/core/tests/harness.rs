use wearhash::harness::{run_experiment, Algo, ExperimentConfig, HarnessError, UsageRatio};

fn config(algo: Algo, ratio: &str, pairs: u64) -> ExperimentConfig {
    ExperimentConfig {
        algo,
        capacity: 6000,
        ratio: ratio.parse().unwrap(),
        pairs,
        seed: 5,
        ..Default::default()
    }
}

#[test]
fn runs_keep_occupancy_and_account_every_write() {
    for algo in Algo::ALL {
        for ratio in ["1/6", "1/2", "4/5"] {
            let r = run_experiment(&config(algo, ratio, 20_000)).unwrap();
            let fill = ratio.parse::<UsageRatio>().unwrap().items_for(6000);
            assert_eq!(r.fill_items, fill);
            assert_eq!(r.live_items as u64, fill, "{algo} {ratio}");
            assert_eq!(r.ops, fill + 40_000);
            assert_eq!(r.failures, 0);
            assert_eq!(r.writes, r.final_stats.total_wear);
            let points = r.series.checkpoints();
            assert!(points
                .windows(2)
                .all(|w| w[0].ops < w[1].ops && w[0].max_wear <= w[1].max_wear));
            assert_eq!(points.last().unwrap().ops, r.ops);
        }
    }
}

#[test]
fn linear_fill_has_unit_max_wear() {
    for ratio in ["1/6", "1/3", "1/2", "2/3", "4/5"] {
        let r = run_experiment(&config(Algo::LinearProbing, ratio, 0)).unwrap();
        assert_eq!(r.final_stats.max_wear, 1);
    }
}

#[test]
fn zero_item_fill_leaves_table_untouched() {
    let mut c = config(Algo::WearCuckoo, "1/7000", 0);
    let r = run_experiment(&c).unwrap();
    assert_eq!(r.final_stats.total_wear, 0);
    assert!(r.series.is_empty());
    c.pairs = 10;
    assert!(matches!(run_experiment(&c), Err(HarnessError::Config(_))));
}

#[test]
fn analysis_bound_holds_on_sparse_fill() {
    let c = ExperimentConfig {
        capacity: 1 << 14,
        ratio: "1/10".parse().unwrap(),
        pairs: 0,
        analyze: true,
        seed: 3,
        ..Default::default()
    };
    let r = run_experiment(&c).unwrap();
    let a = r.components.unwrap();
    assert_eq!(a.violations(), 0);
    if a.summary.complex_count == 0 {
        assert_eq!(a.wear_size_bound_holds, Some(true));
    }
}
