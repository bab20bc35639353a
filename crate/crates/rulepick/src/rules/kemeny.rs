//! Kemeny rank aggregation.
//!
//! Exact subset dynamic programming up to a size threshold, local search
//! with insertion moves above it.

use std::time::{Duration, Instant};

use crate::{AlternativeId, Profile, StrictRanking, WeakRanking};

pub const DEFAULT_EXACT_THRESHOLD: usize = 10;

/// Total Kemeny cost of `order` given pairwise counts `n[a][b]` (a above b).
pub fn kemeny_cost(n: &[Vec<u64>], order: &[usize]) -> u64 {
    let mut cost = 0;
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            cost += n[b][a];
        }
    }
    cost
}

/// Kemeny ranking with the default exact threshold.
pub fn kemeny(p: &Profile, budget: Duration) -> WeakRanking {
    kemeny_with_threshold(p, budget, DEFAULT_EXACT_THRESHOLD)
}

pub fn kemeny_with_threshold(p: &Profile, budget: Duration, exact_threshold: usize) -> WeakRanking {
    let n = p.pairwise_counts();
    let order = if p.m() <= exact_threshold.min(20) {
        exact_order(&n)
    } else {
        local_search(&n, Instant::now() + budget)
    };
    let r = StrictRanking::new(order.into_iter().map(AlternativeId).collect()).expect("permutation");
    WeakRanking::from_strict(&r)
}

/// Lexicographically smallest optimal order by subset DP.
fn exact_order(n: &[Vec<u64>]) -> Vec<usize> {
    let m = n.len();
    if m == 0 {
        return Vec::new();
    }
    let full = (1usize << m) - 1;
    // Cost of putting x directly below the alternatives in `placed`.
    let place = |x: usize, placed: usize| -> u64 {
        (0..m)
            .filter(|&y| y != x && placed & (1 << y) == 0)
            .map(|y| n[y][x])
            .sum()
    };
    // rest[mask]: optimal cost of ordering the complement of `mask` below it.
    let mut rest = vec![u64::MAX; full + 1];
    rest[full] = 0;
    for mask in (0..full).rev() {
        let mut best = u64::MAX;
        for x in (0..m).filter(|&x| mask & (1 << x) == 0) {
            best = best.min(place(x, mask) + rest[mask | (1 << x)]);
        }
        rest[mask] = best;
    }
    let mut order = Vec::with_capacity(m);
    let mut mask = 0;
    while mask != full {
        let x = (0..m)
            .find(|&x| mask & (1 << x) == 0 && place(x, mask) + rest[mask | (1 << x)] == rest[mask])
            .expect("some move attains the optimum");
        order.push(x);
        mask |= 1 << x;
    }
    order
}

/// Improves a net-wins order by insertion moves until stuck or out of time.
fn local_search(n: &[Vec<u64>], deadline: Instant) -> Vec<usize> {
    let m = n.len();
    let net = |a: usize| -> i64 { (0..m).map(|b| n[a][b] as i64 - n[b][a] as i64).sum() };
    let scores: Vec<i64> = (0..m).map(net).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));

    loop {
        let mut improved = false;
        for i in 0..m {
            if Instant::now() >= deadline {
                return order;
            }
            let x = order[i];
            let (mut best_delta, mut best_j) = (0i64, i);
            let mut delta = 0i64;
            for j in i + 1..m {
                let y = order[j];
                delta += n[y][x] as i64 - n[x][y] as i64;
                if delta > best_delta {
                    (best_delta, best_j) = (delta, j);
                }
            }
            delta = 0;
            for j in (0..i).rev() {
                let y = order[j];
                delta += n[x][y] as i64 - n[y][x] as i64;
                if delta > best_delta {
                    (best_delta, best_j) = (delta, j);
                }
            }
            if best_j != i {
                let x = order.remove(i);
                order.insert(best_j, x);
                improved = true;
            }
        }
        if !improved {
            return order;
        }
    }
}
