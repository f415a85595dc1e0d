//! Distributional checks of the random samplers. All streams are seeded, so
//! each check is deterministic.

use std::collections::HashMap;

use frameproof::expurgate::{bad_events, draw_matrix, expected_bad_events, ExpurgationParams};
use frameproof::lll::sample_column;
use frameproof::rng::stream;
use frameproof::Symbol;

/// Pearson statistic of `counts` against a uniform law over `cells` outcomes.
fn chi_square(counts: &HashMap<Vec<Symbol>, u64>, cells: usize, draws: u64) -> f64 {
    let expected = draws as f64 / cells as f64;
    let seen: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    seen + (cells - counts.len()) as f64 * expected
}

fn column_counts(t: usize, w: usize, q: u32, draws: u64) -> HashMap<Vec<Symbol>, u64> {
    let mut rng = stream(2024, 0);
    let mut counts = HashMap::new();
    for _ in 0..draws {
        let col = sample_column(t, w, q, &mut rng).unwrap();
        assert_eq!(col.iter().filter(|&&s| s != 0).count(), w);
        *counts.entry(col).or_insert(0) += 1;
    }
    counts
}

#[test]
fn column_sampler_two_outcomes() {
    let counts = column_counts(2, 1, 2, 20_000);
    assert_eq!(counts.len(), 2);
    // 1 degree of freedom, 0.1% critical value.
    assert!(chi_square(&counts, 2, 20_000) < 10.83);
}

#[test]
fn column_sampler_is_uniform_over_supports_and_symbols() {
    // C(4,2) supports times 2^2 symbol choices.
    let counts = column_counts(4, 2, 3, 48_000);
    assert_eq!(counts.len(), 24);
    // 23 degrees of freedom, 0.1% critical value.
    assert!(chi_square(&counts, 24, 48_000) < 49.73);
}

fn mean_bad_events(q: u32, k: usize, n: usize, seeds: u64) -> (f64, f64) {
    let params = ExpurgationParams::derive(q, k, n, 0).unwrap();
    let total: usize = (0..seeds)
        .map(|s| {
            let m = draw_matrix(&params, &mut stream(s, 0)).unwrap();
            bad_events(&m, k, usize::MAX - 1).len()
        })
        .sum();
    (total as f64 / seeds as f64, expected_bad_events(q, k, n, params.t))
}

#[test]
fn uniform_draws_hit_the_expected_bad_event_count() {
    // q > k: symbols are uniform and the miss probability per row is exact.
    let (mean, expected) = mean_bad_events(3, 2, 10, 400);
    assert!((mean - expected).abs() < 0.2 * expected, "mean {mean}, expected {expected}");
}

#[test]
fn skewed_draws_stay_below_the_bad_event_bound() {
    // q <= k: the per-row miss probability is at most 1 - p.
    for (q, k, n) in [(2, 2, 6), (2, 3, 9)] {
        let (mean, bound) = mean_bad_events(q, k, n, 5000);
        assert!(mean <= 1.1 * bound, "q={q} k={k} n={n}: mean {mean}, bound {bound}");
    }
}
