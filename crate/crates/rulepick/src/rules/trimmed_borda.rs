//! Borda count after dropping each alternative's best and worst placement.

use crate::numeric::to_fixed;
use crate::{Profile, WeakRanking};

/// Sorted copy of `xs` without one minimum and one maximum.
///
/// Fewer than three values come back untouched.
pub fn trim_extremes<T: Ord + Copy>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    if v.len() >= 3 {
        v.pop();
        v.remove(0);
    }
    v
}

/// Borda weight of zero-based position `j` on a ballot of length `k`.
fn borda_weight(j: usize, k: usize) -> i64 {
    if k <= 1 {
        to_fixed(1.0)
    } else {
        to_fixed((k - 1 - j) as f64 / (k - 1) as f64)
    }
}

pub fn trimmed_borda(p: &Profile) -> WeakRanking {
    let mut placements: Vec<Vec<i64>> = vec![Vec::new(); p.m()];
    for r in p.rankings() {
        let k = r.len();
        for (j, a) in r.order().iter().enumerate() {
            placements[a.0].push(borda_weight(j, k));
        }
    }
    let totals: Vec<i128> = placements
        .iter()
        .enumerate()
        .map(|(a, w)| {
            if !w.is_empty() && w.len() < 3 {
                log::warn!("alternative {a} is ranked {} times; scored without trimming", w.len());
            }
            trim_extremes(w).into_iter().map(i128::from).sum()
        })
        .collect();
    WeakRanking::from_keys(&totals)
}
