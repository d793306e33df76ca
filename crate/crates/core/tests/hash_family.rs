use proptest::prelude::*;
use wearhash::{ChoiceSet, HashFamily, TableRng};

/// Per-cell hit counts for d=3 over 10^5 keys, each compared with the
/// binomial expectation, plus the overall chi-square statistic.
#[test]
fn cell_hits_are_uniform() {
    let (n, d, keys) = (1024usize, 3usize, 100_000u64);
    let family = HashFamily::new(42, d, n).unwrap();
    let mut hits = vec![0u64; n];
    for k in 0..keys {
        for &c in family.derive_cells(k).iter() {
            hits[c] += 1;
        }
    }
    let draws = (keys * d as u64) as f64;
    let p = 1.0 / n as f64;
    let expected = draws * p;
    let sigma = (draws * p * (1.0 - p)).sqrt();
    for (cell, &h) in hits.iter().enumerate() {
        assert!(
            (h as f64 - expected).abs() <= 5.0 * sigma,
            "cell {cell}: {h} vs {expected:.1}"
        );
    }
    let chi2: f64 = hits
        .iter()
        .map(|&h| (h as f64 - expected).powi(2) / expected)
        .sum();
    // n - 1 degrees of freedom; 5 standard deviations above the mean.
    let dof = (n - 1) as f64;
    assert!(chi2 < dof + 5.0 * (2.0 * dof).sqrt(), "chi2 {chi2:.1}");
}

#[test]
fn three_cells_three_choices_is_a_permutation() {
    let family = HashFamily::new(9, 3, 3).unwrap();
    for k in 0..1000 {
        let mut cells = family.derive_cells(k).to_vec();
        cells.sort_unstable();
        assert_eq!(cells, [0, 1, 2]);
    }
}

#[test]
fn draw_frequencies() {
    let mut rng = TableRng::new(2718);
    let mut counts = [0u32; 10];
    for _ in 0..1_000_000 {
        counts[rng.uniform_index(10)] += 1;
    }
    for c in counts {
        let f = f64::from(c) / 1e6;
        assert!((f - 0.1).abs() <= 0.005, "{counts:?}");
    }
}

#[test]
fn choice_set_rejects_bad_input() {
    assert!(ChoiceSet::from_slice(&[]).is_none());
    assert!(ChoiceSet::from_slice(&[1, 1]).is_none());
    assert!(ChoiceSet::from_slice(&[0; 9]).is_none());
    assert_eq!(ChoiceSet::from_slice(&[4, 2]).unwrap().as_slice(), &[4, 2]);
}

proptest! {
    #[test]
    fn choices_are_distinct_and_in_range(
        seed in any::<u64>(),
        d in 1usize..=8,
        extra in 0usize..100,
        key in any::<u64>(),
    ) {
        let n = d + extra;
        let family = HashFamily::new(seed, d, n).unwrap();
        let cells = family.derive_cells(key);
        prop_assert_eq!(cells.len(), d);
        for (i, &c) in cells.iter().enumerate() {
            prop_assert!(c < n);
            prop_assert!(!cells[..i].contains(&c));
        }
        prop_assert_eq!(family.derive_cells(key), cells);
        prop_assert_eq!(HashFamily::new(seed, d, n).unwrap().derive_cells(key), cells);
    }

    #[test]
    fn rng_streams_replay(seed in any::<u64>(), bounds in proptest::collection::vec(1usize..1000, 1..50)) {
        let mut a = TableRng::new(seed);
        let mut b = TableRng::new(seed);
        for &bound in &bounds {
            let x = a.uniform_index(bound);
            prop_assert!(x < bound);
            prop_assert_eq!(x, b.uniform_index(bound));
        }
    }
}
