mod support;

use std::collections::HashMap;

use proptest::prelude::*;
use support::{occupants, random_script, wears, Op, RefInsert, RefWear};
use wearhash::{InsertError, InsertRule, TableRng, WearOptions, WearTable};

fn options(max_kicks: usize, fast_forward: bool) -> WearOptions {
    WearOptions {
        max_kicks,
        fast_forward,
        ..WearOptions::default()
    }
}

fn apply(table: &mut WearTable<u64>, model: &mut RefWear, op: Op) {
    match op {
        Op::Insert(k) => {
            let got = table.insert(k, k);
            let want = model.insert(k);
            match (got, want) {
                (Ok(o), RefInsert::Placed { writes, chain }) => {
                    assert_eq!((o.writes_performed, o.chain_length), (writes, chain));
                }
                (Err(InsertError::DuplicateKey { .. }), RefInsert::Duplicate) => {}
                (
                    Err(InsertError::InsertionFailed { key, outcome, .. }),
                    RefInsert::Failed {
                        homeless,
                        writes,
                        chain,
                    },
                ) => {
                    assert_eq!(key, homeless);
                    assert_eq!(
                        (outcome.writes_performed, outcome.chain_length),
                        (writes, chain)
                    );
                }
                (got, want) => panic!("insert {k}: table {got:?}, reference {want:?}"),
            }
        }
        Op::Remove(k) => {
            assert_eq!(table.remove(k).is_some(), model.remove(k));
        }
    }
}

#[test]
fn scripted_inserts_match_reference() {
    let mut table = WearTable::new(8, 3, 11).unwrap();
    let mut model = RefWear::new(8, 3, 11, 500);
    for k in [3, 14, 15, 92, 65, 35] {
        apply(&mut table, &mut model, Op::Insert(k));
    }
    assert_eq!(occupants(table.cells()), model.slots);
    assert_eq!(wears(table.cells()), model.wear);
    assert_eq!(table.wear_snapshot(), model.wear);
}

#[test]
fn dense_churn_matches_reference_both_paths() {
    for fast_forward in [false, true] {
        for seed in 0..20 {
            let mut table =
                WearTable::with_options(16, 3, seed, options(40, fast_forward)).unwrap();
            let mut model = RefWear::new(16, 3, seed, 40);
            let mut rng = TableRng::new(seed + 1000);
            for op in random_script(&mut rng, 2000, 24) {
                apply(&mut table, &mut model, op);
            }
            assert_eq!(occupants(table.cells()), model.slots);
            assert_eq!(wears(table.cells()), model.wear);
            table.validate().unwrap();
        }
    }
}

#[test]
fn sec2_rule_and_erase_wear_match_reference() {
    let opts = WearOptions {
        max_kicks: 60,
        wear_on_delete: true,
        rule: InsertRule::Sec2,
        fast_forward: true,
    };
    let mut table = WearTable::with_options(32, 4, 5, opts).unwrap();
    let mut model = RefWear::with_policy(32, 4, 5, 60, true, InsertRule::Sec2);
    let mut rng = TableRng::new(77);
    for op in random_script(&mut rng, 3000, 40) {
        apply(&mut table, &mut model, op);
    }
    assert_eq!(occupants(table.cells()), model.slots);
    assert_eq!(wears(table.cells()), model.wear);
}

#[test]
fn shadow_map_agreement() {
    let mut table = WearTable::new(4096, 3, 2024).unwrap();
    let mut shadow: HashMap<u64, u64> = HashMap::new();
    let mut rng = TableRng::new(9);
    for i in 0..10_000u64 {
        let key = rng.uniform_index(3000) as u64;
        match rng.uniform_index(3) {
            0 => assert_eq!(table.remove(key), shadow.remove(&key)),
            1 => assert_eq!(table.get(key), shadow.get(&key)),
            _ => match table.insert(key, i) {
                Ok(_) => assert!(shadow.insert(key, i).is_none()),
                Err(InsertError::DuplicateKey { .. }) => assert!(shadow.contains_key(&key)),
                Err(e) => panic!("unexpected {e}"),
            },
        }
        assert_eq!(table.len(), shadow.len());
    }
    for (k, v) in &shadow {
        assert_eq!(table.get(*k), Some(v));
    }
    table.validate().unwrap();
}

#[test]
fn wear_never_decreases_and_counts_every_write() {
    let mut table: WearTable<()> = WearTable::new(1024, 3, 8).unwrap();
    let mut rng = TableRng::new(8);
    let mut before = table.wear_snapshot();
    let mut writes = 0;
    for op in random_script(&mut rng, 20_000, 900) {
        match op {
            Op::Insert(k) => match table.insert(k, ()) {
                Ok(o) => writes += o.writes_performed,
                Err(e) => writes += e.writes_performed(),
            },
            Op::Remove(k) => {
                table.remove(k);
            }
        }
        let now = table.wear_snapshot();
        assert!(before.iter().zip(&now).all(|(a, b)| a <= b));
        before = now;
    }
    assert_eq!(before.iter().map(|&w| u64::from(w)).sum::<u64>(), writes);
}

#[test]
fn one_key_cycled_wears_its_cells_exactly_once_per_insert() {
    let mut table: WearTable<u8> = WearTable::new(64, 3, 1).unwrap();
    let cells = table.family().derive_cells(1234);
    for _ in 0..100 {
        table.insert(1234, 0).unwrap();
        assert_eq!(table.remove(1234), Some(0));
    }
    let on_key: u32 = cells.iter().map(|&c| table.cells()[c].wear()).sum();
    assert_eq!(on_key, 100);
    assert_eq!(table.wear_snapshot().iter().sum::<u32>(), 100);
}

#[test]
fn lookup_and_delete_basics() {
    let mut table = WearTable::new(32, 3, 0).unwrap();
    assert_eq!(table.get(5), None);
    assert_eq!(table.remove(5), None);
    assert!(table.wear_snapshot().iter().all(|&w| w == 0));
    table.insert(5, "v").unwrap();
    assert_eq!(table.wear_snapshot().iter().filter(|&&w| w == 1).count(), 1);
    assert_eq!(table.get(5), Some(&"v"));
    let before = table.wear_snapshot();
    assert_eq!(table.remove(5), Some("v"));
    assert_eq!(table.wear_snapshot(), before);
}

/// Every occupied cell of wear w has all of its item's other cells at wear
/// at least w - 1, as long as nothing is deleted.
#[test]
fn insert_only_sibling_wear_invariant() {
    for seed in 0..5 {
        let mut table: WearTable<()> = WearTable::new(1 << 12, 3, seed).unwrap();
        for k in 0..(1u64 << 12) * 7 / 10 {
            table.insert(k, ()).unwrap();
        }
        let wear = table.wear_snapshot();
        for (cell, key) in table.placements() {
            for &other in table.family().derive_cells(key).iter() {
                assert!(wear[other] + 1 >= wear[cell], "seed {seed} cell {cell}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_forward_equals_naive(
        seed in any::<u64>(),
        max_kicks in 1usize..80,
        n in 8usize..48,
        script in proptest::collection::vec((any::<bool>(), 0u64..60), 1..300),
    ) {
        let mut fast = WearTable::with_options(n, 3, seed, options(max_kicks, true)).unwrap();
        let mut slow = WearTable::with_options(n, 3, seed, options(max_kicks, false)).unwrap();
        for (insert, k) in script {
            if insert {
                let a = fast.insert(k, k).map_err(|e| (e.key(), e.writes_performed()));
                let b = slow.insert(k, k).map_err(|e| (e.key(), e.writes_performed()));
                prop_assert_eq!(a, b);
            } else {
                prop_assert_eq!(fast.remove(k), slow.remove(k));
            }
        }
        prop_assert_eq!(occupants(fast.cells()), occupants(slow.cells()));
        prop_assert_eq!(fast.wear_snapshot(), slow.wear_snapshot());
    }

    #[test]
    fn items_stay_in_their_choices(
        seed in any::<u64>(),
        keys in proptest::collection::vec(any::<u64>(), 1..200),
    ) {
        let mut table = WearTable::new(256, 3, seed).unwrap();
        for k in keys {
            let _ = table.insert(k, ());
        }
        prop_assert!(table.validate().is_ok());
    }
}
