//! Simulated annealing over positional scoring vectors.
//!
//! The objective is the mean split disagreement on a fixed set of splits.
//! Each chain starts from one vector, perturbs one interior entry per step
//! and keeps the best vector it has seen.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abc::{DisagreementConfig, PreparedSplits, Split};
use crate::numeric::{derive_seed, snap, stream_rng};
use crate::rules::{NamedVector, Rule, ScoringVector};
use crate::{Error, Profile, Result};

pub const DEFAULT_STEPS: usize = 500;
pub const DEFAULT_DELTA_RANGE: (f64, f64) = (0.05, 1.0);
const CALIBRATION_PROPOSALS: usize = 20;
const CALIBRATION_ATTEMPTS: usize = 1000;
const FALLBACK_TEMPERATURE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub steps: usize,
    pub delta_range: (f64, f64),
    /// One chain per start; all starts need the same length.
    pub starts: Vec<ScoringVector>,
    pub seed: u64,
}

impl AnnealConfig {
    pub fn new(starts: Vec<ScoringVector>, seed: u64) -> Self {
        AnnealConfig {
            steps: DEFAULT_STEPS,
            delta_range: DEFAULT_DELTA_RANGE,
            starts,
            seed,
        }
    }

    fn validate(&self, len: usize) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        let (lo, hi) = self.delta_range;
        if !(lo > 0.0 && lo < hi && hi <= 1.0) {
            return Err(Error::InvalidParameter(format!("delta range ({lo}, {hi}) must lie in (0, 1]")));
        }
        if self.starts.is_empty() {
            return Err(Error::InvalidParameter("at least one start vector is required".into()));
        }
        if let Some(s) = self.starts.iter().find(|s| s.len() != len) {
            return Err(Error::DomainMismatch(format!(
                "start vector has {} positions, expected {len}",
                s.len()
            )));
        }
        Ok(())
    }
}

/// Vector length annealed for `p`: `m` for full profiles, otherwise the
/// longest ballot.
pub fn vector_length(p: &Profile) -> usize {
    if p.is_full() {
        p.m()
    } else {
        p.max_ballot_len()
    }
}

/// Plurality, veto, Borda, two-approval and plurality-veto at length `len`.
pub fn default_starts(len: usize) -> Result<Vec<ScoringVector>> {
    [
        NamedVector::Plurality,
        NamedVector::Veto,
        NamedVector::Borda,
        NamedVector::TwoApproval,
        NamedVector::PluralityVeto,
    ]
    .into_iter()
    .map(|v| v.vector(len))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub chain: usize,
    pub step: usize,
    /// Objective change of the proposal; absent when the proposal broke
    /// monotonicity and was not evaluated.
    pub delta: Option<f64>,
    pub accepted: bool,
    /// Best objective seen by this chain so far.
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub start: ScoringVector,
    pub start_objective: f64,
    pub initial_temperature: f64,
    pub best: ScoringVector,
    pub best_objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealResult {
    pub vector: ScoringVector,
    pub objective: f64,
    pub chains: Vec<ChainSummary>,
    pub trace: Vec<TraceRow>,
}

struct Chain<'a> {
    splits: &'a PreparedSplits<'a>,
    cfg: &'a AnnealConfig,
}

impl Chain<'_> {
    fn objective(&self, s: &ScoringVector) -> Result<f64> {
        self.splits.mean(&Rule::vector(s.clone()))
    }

    /// Perturbs one interior entry; `None` if the result is not monotone.
    fn propose<R: Rng>(&self, s: &ScoringVector, rng: &mut R) -> Option<ScoringVector> {
        let v = s.values();
        let i = rng.gen_range(1..v.len() - 1);
        let (lo, hi) = self.cfg.delta_range;
        let delta = rng.gen_range(lo..hi);
        let mut next = v.to_vec();
        next[i] = snap(if rng.gen::<bool>() { v[i] + delta } else { v[i] - delta });
        if next[i] > next[i - 1] || next[i] < next[i + 1] {
            return None;
        }
        ScoringVector::new(next).ok()
    }

    /// Temperature at which the median calibration change is accepted
    /// with probability one half.
    fn calibrate<R: Rng>(&self, start: &ScoringVector, f0: f64, rng: &mut R) -> Result<f64> {
        let mut deltas = Vec::new();
        for _ in 0..CALIBRATION_ATTEMPTS {
            if deltas.len() == CALIBRATION_PROPOSALS {
                break;
            }
            if let Some(s) = self.propose(start, rng) {
                deltas.push((self.objective(&s)? - f0).abs());
            }
        }
        deltas.sort_by(f64::total_cmp);
        let median = match deltas.len() {
            0 => 0.0,
            n if n % 2 == 1 => deltas[n / 2],
            n => (deltas[n / 2 - 1] + deltas[n / 2]) / 2.0,
        };
        Ok(if median > 0.0 {
            median / std::f64::consts::LN_2
        } else {
            FALLBACK_TEMPERATURE
        })
    }

    fn run(&self, index: usize, start: &ScoringVector) -> Result<(ChainSummary, Vec<TraceRow>)> {
        let chain_seed = derive_seed(self.cfg.seed, index as u64);
        let mut rng = stream_rng(chain_seed, 0);
        let f0 = self.objective(start)?;
        let mut summary = ChainSummary {
            start: start.clone(),
            start_objective: f0,
            initial_temperature: 0.0,
            best: start.clone(),
            best_objective: f0,
        };
        if start.len() <= 2 {
            return Ok((summary, Vec::new()));
        }
        let t0 = self.calibrate(start, f0, &mut stream_rng(chain_seed, 1))?;
        summary.initial_temperature = t0;
        let steps = self.cfg.steps;
        let (mut cur, mut f_cur) = (start.clone(), f0);
        let mut trace = Vec::with_capacity(steps);
        for step in 0..steps {
            let temperature = t0 * (1.0 - step as f64 / steps as f64);
            let (delta, accepted) = match self.propose(&cur, &mut rng) {
                None => (None, false),
                Some(next) => {
                    let f_next = self.objective(&next)?;
                    let delta = f_next - f_cur;
                    let accepted = delta <= 0.0 || (temperature > 0.0 && rng.gen::<f64>() < (-delta / temperature).exp());
                    if accepted {
                        if f_next < summary.best_objective {
                            summary.best = next.clone();
                            summary.best_objective = f_next;
                        }
                        cur = next;
                        f_cur = f_next;
                    }
                    (Some(delta), accepted)
                }
            };
            trace.push(TraceRow {
                chain: index,
                step,
                delta,
                accepted,
                best: summary.best_objective,
            });
        }
        Ok((summary, trace))
    }
}

/// Anneals from every start on the given splits and returns the best
/// vector seen by any chain. Ties go to the earlier chain.
pub fn anneal(p: &Profile, splits: &[Split], cfg: &AnnealConfig, dcfg: &DisagreementConfig) -> Result<AnnealResult> {
    if splits.is_empty() {
        return Err(Error::InvalidParameter("at least one split is required".into()));
    }
    let len = vector_length(p);
    cfg.validate(len)?;
    let prepared = PreparedSplits::new(p, splits, dcfg)?;
    let chain = Chain {
        splits: &prepared,
        cfg,
    };
    let runs: Vec<(ChainSummary, Vec<TraceRow>)> = cfg
        .starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| chain.run(i, s))
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.best_objective.total_cmp(&b.0.best_objective).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one chain");
    let vector = runs[best].0.best.clone();
    let objective = runs[best].0.best_objective;
    let (chains, traces): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    Ok(AnnealResult {
        vector,
        objective,
        chains,
        trace: traces.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::{estimate_disagreement, sampled_splits};
    use crate::axioms::shuffle;
    use crate::fixtures::three_groups;
    use crate::rules::PositionalScheme;

    fn setup(p: &Profile, seed: u64) -> (Vec<Split>, AnnealConfig) {
        let splits = sampled_splits(p.n(), seed, 10);
        let mut cfg = AnnealConfig::new(default_starts(vector_length(p)).unwrap(), seed);
        cfg.steps = 120;
        (splits, cfg)
    }

    fn partial_profile() -> Profile {
        let orders: Vec<Vec<usize>> = (0..30)
            .map(|i| {
                let mut o: Vec<usize> = (0..6).map(|j| (i * 7 + j * 5) % 6).collect();
                o.truncate(3 + i % 2);
                o
            })
            .collect();
        Profile::from_orders(6, &orders).unwrap()
    }

    #[test]
    fn result_dominates_every_start() {
        let p = partial_profile();
        let (splits, cfg) = setup(&p, 3);
        let dcfg = DisagreementConfig::default();
        let res = anneal(&p, &splits, &cfg, &dcfg).unwrap();
        let prepared = PreparedSplits::new(&p, &splits, &dcfg).unwrap();
        for s in &cfg.starts {
            assert!(res.objective <= prepared.mean(&Rule::vector(s.clone())).unwrap());
        }
    }

    #[test]
    fn objective_matches_fresh_estimate() {
        let p = three_groups(4);
        let (splits, cfg) = setup(&p, 8);
        let dcfg = DisagreementConfig::default();
        let res = anneal(&p, &splits, &cfg, &dcfg).unwrap();
        let fresh = estimate_disagreement(&Rule::vector(res.vector.clone()), &p, 10, 8, &dcfg).unwrap();
        assert_eq!(res.objective, fresh.mean);
    }

    #[test]
    fn seeded_runs_repeat() {
        let p = partial_profile();
        let (splits, cfg) = setup(&p, 5);
        let dcfg = DisagreementConfig::default();
        assert_eq!(anneal(&p, &splits, &cfg, &dcfg).unwrap(), anneal(&p, &splits, &cfg, &dcfg).unwrap());
    }

    #[test]
    fn trace_best_never_increases_and_states_stay_valid() {
        let p = partial_profile();
        let (splits, cfg) = setup(&p, 6);
        let res = anneal(&p, &splits, &cfg, &DisagreementConfig::default()).unwrap();
        assert_eq!(res.trace.len(), cfg.steps * cfg.starts.len());
        for w in res.trace.windows(2).filter(|w| w[0].chain == w[1].chain) {
            assert!(w[1].best <= w[0].best);
        }
        for c in &res.chains {
            let v = c.best.values();
            assert!(v[0] == 1.0 && v[v.len() - 1] == 0.0 && v.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn shuffled_profile_collapses_to_plurality() {
        let base = Profile::from_orders(4, &[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![0, 2, 1, 3]]).unwrap();
        let p = shuffle(&base, &[2, 3, 4], 1).unwrap();
        let (splits, mut cfg) = setup(&p, 2);
        cfg.steps = 40;
        let res = anneal(&p, &splits, &cfg, &DisagreementConfig::default()).unwrap();
        let plurality = PositionalScheme::Named(NamedVector::Plurality).apply(&base).unwrap();
        assert_eq!(PositionalScheme::Custom(res.vector).apply(&p).unwrap(), plurality);
    }

    #[test]
    fn configuration_errors() {
        let p = three_groups(2);
        let splits = sampled_splits(p.n(), 0, 3);
        let dcfg = DisagreementConfig::default();
        let mut cfg = AnnealConfig::new(default_starts(4).unwrap(), 0);
        assert!(matches!(anneal(&p, &splits, &cfg, &dcfg), Err(Error::DomainMismatch(_))));
        cfg.starts = default_starts(3).unwrap();
        cfg.steps = 0;
        assert!(anneal(&p, &splits, &cfg, &dcfg).is_err());
        cfg.steps = 5;
        cfg.delta_range = (0.5, 0.1);
        assert!(anneal(&p, &splits, &cfg, &dcfg).is_err());
        cfg.delta_range = DEFAULT_DELTA_RANGE;
        assert!(anneal(&p, &[], &cfg, &dcfg).is_err());
    }
}
