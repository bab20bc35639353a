//! Small numeric helpers shared across modules.
//!
//! Scoring vectors live on a dyadic grid of step `2^-FIXED_BITS` so that
//! positional totals can be accumulated as exact integers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const FIXED_BITS: i32 = 40;
pub(crate) const FIXED_ONE: i64 = 1 << FIXED_BITS;

/// Rounds `x` to the nearest point of the fixed-point grid.
pub(crate) fn snap(x: f64) -> f64 {
    to_fixed(x) as f64 / FIXED_ONE as f64
}

pub(crate) fn to_fixed(x: f64) -> i64 {
    (x * FIXED_ONE as f64).round() as i64
}

#[cfg(test)]
pub(crate) fn from_fixed(x: i128) -> f64 {
    x as f64 / FIXED_ONE as f64
}

/// Correctly rounded sum of finite floats, independent of input order.
///
/// Shewchuk's partials algorithm with a final half-way correction.
pub fn exact_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in xs {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }

    let Some(mut n) = partials.len().checked_sub(1) else {
        return 0.0;
    };
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        n -= 1;
        let x = hi;
        let y = partials[n];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// Mean and standard error of the mean. The error is 0 for fewer than two values.
pub fn mean_sem(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = exact_sum(values.iter().copied()) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = exact_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, (ss / (n - 1.0)).sqrt() / n.sqrt())
}

/// Independent RNG stream `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives a child seed; used where a whole sub-computation needs its own seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    use rand::RngCore;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(index);
    rng.next_u64()
}

pub(crate) fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
