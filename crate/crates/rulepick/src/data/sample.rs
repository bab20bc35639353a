//! Synthetic profile generators.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;
use serde::{Deserialize, Serialize};

use crate::numeric::{derive_seed, stream_rng};
use crate::{AlternativeId, Error, Profile, Result, StrictRanking};

pub const DEFAULT_MALLOWS_PHI: f64 = 0.4;
pub const URN_GAMMA_SHAPE: f64 = 0.8;

/// Default Plackett-Luce strengths `exp(0.5 (m - i))` for `i = 1..=m`.
pub fn default_pl_strengths(m: usize) -> Vec<f64> {
    (1..=m).map(|i| (0.5 * (m - i) as f64).exp()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistributionKind {
    /// Repeated insertion around `center`, identity when absent.
    Mallows { phi: f64, center: Option<Vec<usize>> },
    /// Sequential sampling proportional to `alpha`, defaulting to
    /// [`default_pl_strengths`].
    PlackettLuce { alpha: Option<Vec<f64>> },
    ImpartialCulture,
    /// Polya urn; `alpha` is drawn from `Gamma(0.8, 1)` when absent.
    Urn { alpha: Option<f64> },
    /// Uniform over orders single-peaked on the axis `0, 1, ..., m-1`.
    SinglePeaked,
}

/// Ballot length and per-alternative coverage of a balanced partial profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSpec {
    pub ballot_length: usize,
    pub coverage: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub partial: Option<PartialSpec>,
}

impl DistributionSpec {
    pub fn new(kind: DistributionKind, m: usize, n: usize) -> Self {
        DistributionSpec { kind, m, n, partial: None }
    }

    pub fn with_partial(mut self, ballot_length: usize, coverage: usize) -> Self {
        self.partial = Some(PartialSpec { ballot_length, coverage });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("need at least one alternative".into()));
        }
        match &self.kind {
            DistributionKind::Mallows { phi, center } => {
                if !(*phi > 0.0 && *phi <= 1.0) {
                    return Err(Error::InvalidParameter(format!("Mallows phi {phi} outside (0, 1]")));
                }
                if let Some(c) = center {
                    let r = StrictRanking::from_indices(c)?;
                    if r.len() != self.m || c.iter().any(|&a| a >= self.m) {
                        return Err(Error::InvalidParameter("Mallows center must rank every alternative".into()));
                    }
                }
            }
            DistributionKind::PlackettLuce { alpha: Some(a) } => {
                if a.len() != self.m || a.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                    return Err(Error::InvalidParameter("Plackett-Luce strengths must be m positive numbers".into()));
                }
            }
            DistributionKind::Urn { alpha: Some(a) } if !(*a >= 0.0 && a.is_finite()) => {
                return Err(Error::InvalidParameter(format!("urn alpha {a} must be nonnegative")));
            }
            _ => {}
        }
        if let Some(ps) = self.partial {
            check_coverage(self.m, self.n, ps.ballot_length, ps.coverage)?;
        }
        Ok(())
    }
}

fn check_coverage(m: usize, n: usize, len: usize, coverage: usize) -> Result<()> {
    if len == 0 || len > m {
        return Err(Error::Infeasible(format!("ballot length {len} with {m} alternatives")));
    }
    if n * len != m * coverage {
        return Err(Error::Infeasible(format!("{n} voters x {len} positions != {m} alternatives x {coverage} coverage")));
    }
    Ok(())
}

/// Draws a profile; identical `(spec, seed)` give identical profiles.
pub fn sample_profile(spec: &DistributionSpec, seed: u64) -> Result<Profile> {
    spec.validate()?;
    let m = spec.m;
    let mut rng = stream_rng(seed, 0);
    let orders: Vec<Vec<usize>> = match &spec.kind {
        DistributionKind::Mallows { phi, center } => {
            let center = center.clone().unwrap_or_else(|| (0..m).collect());
            (0..spec.n).map(|_| mallows(&center, *phi, &mut rng)).collect()
        }
        DistributionKind::PlackettLuce { alpha } => {
            let alpha = alpha.clone().unwrap_or_else(|| default_pl_strengths(m));
            (0..spec.n).map(|_| plackett_luce(&alpha, &mut rng)).collect()
        }
        DistributionKind::ImpartialCulture => (0..spec.n).map(|_| uniform(m, &mut rng)).collect(),
        DistributionKind::Urn { alpha } => {
            let alpha = match alpha {
                Some(a) => *a,
                None => Gamma::new(URN_GAMMA_SHAPE, 1.0).expect("valid shape").sample(&mut rng),
            };
            urn(m, spec.n, alpha, &mut rng)
        }
        DistributionKind::SinglePeaked => (0..spec.n).map(|_| single_peaked(m, &mut rng)).collect(),
    };
    let full = Profile::from_orders(m, &orders)?;
    match spec.partial {
        Some(ps) => assign_partial(&full, ps.ballot_length, ps.coverage, derive_seed(seed, 1)),
        None => Ok(full),
    }
}

/// Inserts `center[i]` at position `j <= i` with weight `phi^(i - j)`.
fn mallows(center: &[usize], phi: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order = Vec::with_capacity(center.len());
    for (i, &a) in center.iter().enumerate() {
        let weights: Vec<f64> = (0..=i).map(|j| phi.powi((i - j) as i32)).collect();
        let j = WeightedIndex::new(&weights).expect("positive weights").sample(rng);
        order.insert(j, a);
    }
    order
}

fn plackett_luce(alpha: &[f64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut left: Vec<usize> = (0..alpha.len()).collect();
    let mut order = Vec::with_capacity(alpha.len());
    while !left.is_empty() {
        let w: Vec<f64> = left.iter().map(|&a| alpha[a]).collect();
        let i = WeightedIndex::new(&w).expect("positive weights").sample(rng);
        order.push(left.remove(i));
    }
    order
}

fn uniform(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut o: Vec<usize> = (0..m).collect();
    o.shuffle(rng);
    o
}

/// Draw `i` is a fresh uniform order with probability `1 / (1 + i alpha)`
/// and otherwise a copy of a uniformly chosen earlier draw.
fn urn(m: usize, n: usize, alpha: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let fresh = 1.0 / (1.0 + i as f64 * alpha);
        if i == 0 || rng.gen::<f64>() < fresh {
            out.push(uniform(m, rng));
        } else {
            let j = rng.gen_range(0..i);
            out.push(out[j].clone());
        }
    }
    out
}

/// Fills the ballot from the bottom with a uniformly chosen end of the
/// remaining axis interval.
fn single_peaked(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let (mut lo, mut hi) = (0usize, m);
    let mut bottom_up = Vec::with_capacity(m);
    while hi - lo > 1 {
        if rng.gen::<bool>() {
            bottom_up.push(lo);
            lo += 1;
        } else {
            hi -= 1;
            bottom_up.push(hi);
        }
    }
    if m > 0 {
        bottom_up.push(lo);
    }
    bottom_up.reverse();
    bottom_up
}

/// Restricts every ballot to a random subset so that each voter ranks
/// `ballot_length` alternatives and each alternative is ranked by exactly
/// `coverage` voters.
///
/// Stacks `coverage` random permutations into an `n x ballot_length` grid
/// and repairs repeated alternatives within a row by swaps across rows.
pub fn assign_partial(full: &Profile, ballot_length: usize, coverage: usize, seed: u64) -> Result<Profile> {
    if !full.is_full() {
        return Err(Error::RequiresFullProfile);
    }
    let (m, n) = (full.m(), full.n());
    check_coverage(m, n, ballot_length, coverage)?;
    let mut rng = stream_rng(seed, 0);
    let mut cells: Vec<usize> = Vec::with_capacity(n * ballot_length);
    for _ in 0..coverage {
        cells.extend(uniform(m, &mut rng));
    }
    let mut rows: Vec<Vec<usize>> = cells.chunks(ballot_length).map(<[usize]>::to_vec).collect();
    let budget = 100 * n * ballot_length + 1000;
    let mut steps = 0;
    while let Some((r, j)) = first_duplicate(&rows) {
        steps += 1;
        if steps > budget {
            return Err(Error::Infeasible("could not balance the partial assignment".into()));
        }
        let x = rows[r][j];
        let mut targets: Vec<(usize, usize)> = (0..n)
            .filter(|&r2| r2 != r && !rows[r2].contains(&x))
            .flat_map(|r2| (0..ballot_length).map(move |j2| (r2, j2)))
            .filter(|&(r2, j2)| !rows[r].contains(&rows[r2][j2]))
            .collect();
        if targets.is_empty() {
            // Fall back to any swap that moves the repeat elsewhere.
            targets = (0..n)
                .filter(|&r2| r2 != r)
                .flat_map(|r2| (0..ballot_length).map(move |j2| (r2, j2)))
                .collect();
        }
        let &(r2, j2) = targets.choose(&mut rng).ok_or_else(|| Error::Infeasible("single voter cannot repeat alternatives".into()))?;
        let y = rows[r2][j2];
        rows[r2][j2] = x;
        rows[r][j] = y;
    }
    let rankings = full
        .rankings()
        .iter()
        .zip(&rows)
        .map(|(ballot, row)| {
            let keep: Vec<AlternativeId> = ballot.order().iter().copied().filter(|a| row.contains(&a.0)).collect();
            StrictRanking::new(keep)
        })
        .collect::<Result<_>>()?;
    Profile::new(m, rankings)
}

fn first_duplicate(rows: &[Vec<usize>]) -> Option<(usize, usize)> {
    rows.iter()
        .enumerate()
        .find_map(|(r, row)| (1..row.len()).find(|&j| row[..j].contains(&row[j])).map(|j| (r, j)))
}
