//! Rule picking by split consistency.
//!
//! Voters are split uniformly at random into two sides, every candidate
//! rule is applied to both sides, and the disagreement between the two
//! outputs is averaged over splits. The rule with the smallest expected
//! disagreement is picked. Every candidate sees the same splits.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{jaccard_dissimilarity, kt_with_ties, normalized_disagreement, top_k, weighted_kt, AlternativeWeights};
use crate::numeric::{binomial, exact_sum, mean_sem, stream_rng};
use crate::rules::{aggregate_scores, scores_to_ranking, Rule, ScoreAggregator};
use crate::{Error, Profile, Result, StrictRanking, WeakRanking};

pub const DEFAULT_SPLITS: usize = 10;
pub const DEFAULT_GAMMA: f64 = 2.0;
pub const DEFAULT_TRIALS: usize = 1000;
/// Largest electorate whose splits are enumerated one by one.
pub const ENUMERATION_VOTER_LIMIT: usize = 20;
/// Default cap on grouped split states for exact expectations.
pub const DEFAULT_STATE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    One,
    Two,
}

/// Side assignment for every voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Split {
    sides: Vec<Side>,
}

impl Split {
    pub fn new(sides: Vec<Side>) -> Self {
        Split { sides }
    }

    /// Voter `i` goes to side two iff bit `i` of `mask` is set.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Split {
            sides: (0..n)
                .map(|i| if (mask >> i) & 1 == 1 { Side::Two } else { Side::One })
                .collect(),
        }
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn voters(&self, side: Side) -> Vec<usize> {
        (0..self.sides.len()).filter(|&i| self.sides[i] == side).collect()
    }

    fn sample<R: Rng>(n: usize, rng: &mut R) -> Self {
        Split {
            sides: (0..n).map(|_| if rng.gen::<bool>() { Side::Two } else { Side::One }).collect(),
        }
    }
}

/// Split number `index` of the sequence determined by `seed`.
pub fn split_at(n: usize, seed: u64, index: u64) -> Split {
    Split::sample(n, &mut stream_rng(seed, index))
}

/// The first split of the sequence determined by `seed`.
pub fn random_split(n: usize, seed: u64) -> Split {
    split_at(n, seed, 0)
}

pub fn sampled_splits(n: usize, seed: u64, count: usize) -> Vec<Split> {
    (0..count as u64).map(|i| split_at(n, seed, i)).collect()
}

/// The two sub-profiles induced by `split`.
pub fn side_profiles(p: &Profile, split: &Split) -> Result<(Profile, Profile)> {
    if split.len() != p.n() {
        return Err(Error::DomainMismatch(format!(
            "split covers {} voters, profile has {}",
            split.len(),
            p.n()
        )));
    }
    Ok((p.restrict(&split.voters(Side::One)), p.restrict(&split.voters(Side::Two))))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")))
    }
}

/// `(g^min - 1) / (g^(t/2) - 1)` written to stay finite for large counts.
fn weight_formula(gamma: f64, min_side: usize, total: usize) -> f64 {
    if min_side == 0 {
        return 0.0;
    }
    let ln = gamma.ln();
    let (lo, half) = (min_side as f64 * ln, total as f64 / 2.0 * ln);
    (lo - half).exp() * (-(-lo).exp_m1()) / (-(-half).exp_m1())
}

fn weights_from_sides(p1: &Profile, p2: &Profile, gamma: f64) -> AlternativeWeights {
    let (c1, c2) = (p1.appearances(), p2.appearances());
    let w = c1
        .iter()
        .zip(&c2)
        .map(|(&x, &y)| weight_formula(gamma, x.min(y), x + y))
        .collect();
    AlternativeWeights::new(w).expect("weights are finite and nonnegative")
}

/// Per-alternative split weights; zero for alternatives missing from a side.
pub fn alternative_weights(p: &Profile, split: &Split, gamma: f64) -> Result<AlternativeWeights> {
    check_gamma(gamma)?;
    let (p1, p2) = side_profiles(p, split)?;
    Ok(weights_from_sides(&p1, &p2, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// On for profiles with partial rankings, off for full ones.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Normalized,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Metric {
    #[default]
    KendallTau,
    /// Jaccard dissimilarity between the top-`k` sets.
    Jaccard { k: usize },
}

/// How a single split's disagreement is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisagreementConfig {
    pub weighting: Weighting,
    pub gamma: f64,
    pub scale: Scale,
    /// Leave out splits with an empty side instead of scoring them
    /// against the all-tied ranking.
    pub skip_empty_splits: bool,
    pub metric: Metric,
}

impl Default for DisagreementConfig {
    fn default() -> Self {
        DisagreementConfig {
            weighting: Weighting::Auto,
            gamma: DEFAULT_GAMMA,
            scale: Scale::Normalized,
            skip_empty_splits: false,
            metric: Metric::KendallTau,
        }
    }
}

impl DisagreementConfig {
    pub fn weighting_applies(&self, p: &Profile) -> bool {
        match self.weighting {
            Weighting::Auto => !p.is_full(),
            Weighting::On => true,
            Weighting::Off => false,
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        check_gamma(self.gamma)?;
        if let Metric::Jaccard { k } = self.metric {
            if k == 0 || k > m {
                return Err(Error::InvalidParameter(format!("top-k size {k} must lie in 1..={m}")));
            }
        }
        Ok(())
    }
}

/// Profile-level data shared by every split.
struct Evaluator<'a> {
    p: &'a Profile,
    cfg: DisagreementConfig,
    weighted: bool,
    unit: AlternativeWeights,
}

impl<'a> Evaluator<'a> {
    fn new(p: &'a Profile, cfg: DisagreementConfig) -> Result<Self> {
        cfg.validate(p.m())?;
        let unit = p
            .appearances()
            .iter()
            .map(|&c| if c > 0 { 1.0 } else { 0.0 })
            .collect();
        Ok(Evaluator {
            p,
            cfg,
            weighted: cfg.weighting_applies(p),
            unit: AlternativeWeights::new(unit)?,
        })
    }

    fn side(&self, p1: Profile, p2: Profile) -> SideData {
        let weights = self.weighted.then(|| weights_from_sides(&p1, &p2, self.cfg.gamma));
        SideData { p1, p2, weights }
    }

    fn side_for(&self, split: &Split) -> Result<SideData> {
        let (p1, p2) = side_profiles(self.p, split)?;
        Ok(self.side(p1, p2))
    }

    fn distance(&self, r1: &WeakRanking, r2: &WeakRanking, data: &SideData) -> Result<f64> {
        if let Metric::Jaccard { k } = self.cfg.metric {
            return jaccard_dissimilarity(&top_k(r1, k), &top_k(r2, k));
        }
        let w = data.weights.as_ref().unwrap_or(&self.unit);
        match self.cfg.scale {
            Scale::Normalized => normalized_disagreement(r1, r2, w),
            Scale::Raw => weighted_kt(r1, r2, w),
        }
    }

    /// `None` when the split is skipped.
    fn value(&self, rule: &Rule, data: &SideData) -> Result<Option<f64>> {
        if self.cfg.skip_empty_splits && data.has_empty_side() {
            return Ok(None);
        }
        let r1 = rule.apply(&data.p1)?;
        let r2 = rule.apply(&data.p2)?;
        self.distance(&r1, &r2, data).map(Some)
    }

    fn values(&self, rules: &[Rule], data: &SideData) -> Result<Vec<Option<f64>>> {
        rules.iter().map(|r| self.value(r, data)).collect()
    }
}

struct SideData {
    p1: Profile,
    p2: Profile,
    weights: Option<AlternativeWeights>,
}

impl SideData {
    fn has_empty_side(&self) -> bool {
        self.p1.n() == 0 || self.p2.n() == 0
    }
}

/// Disagreement of `rule` between the two sides of one split.
///
/// Empty sides are scored against the all-tied ranking regardless of
/// `skip_empty_splits`.
pub fn split_disagreement(rule: &Rule, p: &Profile, split: &Split, cfg: &DisagreementConfig) -> Result<f64> {
    let cfg = DisagreementConfig {
        skip_empty_splits: false,
        ..*cfg
    };
    let ev = Evaluator::new(p, cfg)?;
    let data = ev.side_for(split)?;
    Ok(ev.value(rule, &data)?.expect("not skipped"))
}

/// Which splits an expectation is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Estimation {
    /// `n_splits` seeded random splits.
    Sampled { n_splits: usize, seed: u64 },
    /// Every one of the `2^n` splits, evaluated individually.
    Enumerated,
    /// The exact expectation; grouped over identical ballots when the
    /// electorate is too large to enumerate.
    Exact,
}

impl Default for Estimation {
    fn default() -> Self {
        Estimation::Sampled {
            n_splits: DEFAULT_SPLITS,
            seed: 0,
        }
    }
}

/// One rule's disagreement estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleEstimate {
    pub rule: Rule,
    pub mean: f64,
    pub sem: f64,
    /// Per-split values in split order; empty for exact expectations.
    pub values: Vec<f64>,
    /// Splits (or enumeration states, for exact expectations) left out
    /// because a side was empty.
    pub skipped_splits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisagreementReport {
    pub version: String,
    pub estimation: Estimation,
    pub config: DisagreementConfig,
    pub weighting_applied: bool,
    pub m: usize,
    pub n: usize,
    /// Splits evaluated, or enumeration states for exact expectations.
    pub splits: u64,
    pub rules: Vec<RuleEstimate>,
}

/// Sampled or enumerated estimates: one row of values per split.
fn per_split_rows(ev: &Evaluator, rules: &[Rule], splits: u64, make: impl Fn(u64) -> Split + Sync) -> Result<Vec<RuleEstimate>> {
    let rows: Vec<Vec<Option<f64>>> = (0..splits)
        .into_par_iter()
        .map(|i| {
            let data = ev.side_for(&make(i))?;
            ev.values(rules, &data)
        })
        .collect::<Result<_>>()?;
    Ok(rules
        .iter()
        .enumerate()
        .map(|(j, rule)| {
            let values: Vec<f64> = rows.iter().filter_map(|row| row[j]).collect();
            let (mean, sem) = mean_sem(&values);
            RuleEstimate {
                rule: rule.clone(),
                mean,
                sem,
                skipped_splits: splits - values.len() as u64,
                values,
            }
        })
        .collect())
}

fn exact_rows(ev: &Evaluator, rules: &[Rule], state_limit: u128) -> Result<(u64, Vec<RuleEstimate>)> {
    let n = ev.p.n();
    // (probability weight, per-rule values) per evaluated state.
    let rows: Vec<(f64, Vec<Option<f64>>)> = if n <= ENUMERATION_VOTER_LIMIT {
        // A split and its complement have the same value, so voter 0 stays on side one.
        (0..1u64 << n.saturating_sub(1))
            .into_par_iter()
            .map(|mask| {
                let data = ev.side_for(&Split::from_mask(n, mask << 1))?;
                Ok((1.0, ev.values(rules, &data)?))
            })
            .collect::<Result<_>>()?
    } else {
        grouped_rows(ev, rules, state_limit)?
    };
    let estimates = rules
        .iter()
        .enumerate()
        .map(|(j, rule)| {
            let kept: Vec<(f64, f64)> = rows.iter().filter_map(|(w, v)| v[j].map(|x| (*w, x))).collect();
            let mean = if kept.is_empty() {
                0.0
            } else {
                exact_sum(kept.iter().map(|(w, x)| w * x)) / exact_sum(kept.iter().map(|(w, _)| *w))
            };
            RuleEstimate {
                rule: rule.clone(),
                mean,
                sem: 0.0,
                values: Vec::new(),
                skipped_splits: (rows.len() - kept.len()) as u64,
            }
        })
        .collect();
    Ok((rows.len() as u64, estimates))
}

/// Enumerates how many copies of each distinct ballot go to side one.
fn grouped_rows(ev: &Evaluator, rules: &[Rule], state_limit: u128) -> Result<Vec<(f64, Vec<Option<f64>>)>> {
    let mut groups: BTreeMap<&StrictRanking, usize> = BTreeMap::new();
    for r in ev.p.rankings() {
        *groups.entry(r).or_default() += 1;
    }
    let groups: Vec<(&StrictRanking, usize)> = groups.into_iter().collect();
    let states = groups.iter().try_fold(1u128, |acc, (_, c)| acc.checked_mul(*c as u128 + 1));
    let states = match states {
        Some(s) if s <= state_limit => s as u64,
        _ => {
            return Err(Error::TooManyStates {
                states: states.unwrap_or(u128::MAX),
                limit: state_limit,
            })
        }
    };
    let m = ev.p.m();
    (0..states)
        .into_par_iter()
        .map(|mut code| {
            let (mut one, mut two) = (Vec::new(), Vec::new());
            let mut weight = 1.0;
            for (ballot, count) in &groups {
                let radix = *count as u64 + 1;
                let x = (code % radix) as usize;
                code /= radix;
                weight *= binomial(*count as u64, x as u64);
                one.extend(std::iter::repeat((*ballot).clone()).take(x));
                two.extend(std::iter::repeat((*ballot).clone()).take(count - x));
            }
            let data = ev.side(Profile::new(m, one)?, Profile::new(m, two)?);
            Ok((weight, ev.values(rules, &data)?))
        })
        .collect()
}

/// Estimates every rule's expected disagreement on common splits.
pub fn evaluate_rules(rules: &[Rule], p: &Profile, estimation: Estimation, cfg: &DisagreementConfig) -> Result<DisagreementReport> {
    evaluate_rules_with_limit(rules, p, estimation, cfg, DEFAULT_STATE_LIMIT)
}

pub fn evaluate_rules_with_limit(
    rules: &[Rule],
    p: &Profile,
    estimation: Estimation,
    cfg: &DisagreementConfig,
    state_limit: u128,
) -> Result<DisagreementReport> {
    let ev = Evaluator::new(p, *cfg)?;
    let n = p.n();
    let (splits, estimates) = match estimation {
        Estimation::Sampled { n_splits, seed } => {
            if n_splits == 0 {
                return Err(Error::InvalidParameter("at least one split is required".into()));
            }
            let splits = n_splits as u64;
            (splits, per_split_rows(&ev, rules, splits, |i| split_at(n, seed, i))?)
        }
        Estimation::Enumerated => {
            if n > ENUMERATION_VOTER_LIMIT {
                return Err(Error::TooManyVoters {
                    n,
                    limit: ENUMERATION_VOTER_LIMIT,
                });
            }
            let splits = 1u64 << n;
            (splits, per_split_rows(&ev, rules, splits, |mask| Split::from_mask(n, mask))?)
        }
        Estimation::Exact => exact_rows(&ev, rules, state_limit)?,
    };
    Ok(DisagreementReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        estimation,
        config: *cfg,
        weighting_applied: ev.weighted,
        m: p.m(),
        n,
        splits,
        rules: estimates,
    })
}

/// Mean and standard error over seeded splits, plus the per-split values.
pub fn estimate_disagreement(rule: &Rule, p: &Profile, n_splits: usize, seed: u64, cfg: &DisagreementConfig) -> Result<RuleEstimate> {
    let report = evaluate_rules(std::slice::from_ref(rule), p, Estimation::Sampled { n_splits, seed }, cfg)?;
    Ok(report.rules.into_iter().next().expect("one rule"))
}

/// Exact expectation over all equiprobable splits.
pub fn exact_disagreement(rule: &Rule, p: &Profile, cfg: &DisagreementConfig) -> Result<f64> {
    let report = evaluate_rules(std::slice::from_ref(rule), p, Estimation::Exact, cfg)?;
    Ok(report.rules[0].mean)
}

/// Outcome of picking among candidate rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickResult {
    /// Candidate indices whose mean is within `tie_epsilon` of the minimum.
    pub argmin: Vec<usize>,
    pub chosen: usize,
    pub tie_epsilon: f64,
    pub report: DisagreementReport,
}

impl PickResult {
    pub fn chosen_rule(&self) -> &Rule {
        &self.report.rules[self.chosen].rule
    }

    pub fn argmin_rules(&self) -> Vec<&Rule> {
        self.argmin.iter().map(|&i| &self.report.rules[i].rule).collect()
    }

    pub fn argmin_labels(&self) -> Vec<&str> {
        self.argmin.iter().map(|&i| self.report.rules[i].rule.label.as_str()).collect()
    }
}

fn argmin_within(means: &[f64], tie_epsilon: f64) -> Vec<usize> {
    let best = means.iter().copied().fold(f64::INFINITY, f64::min);
    (0..means.len()).filter(|&i| means[i] <= best + tie_epsilon).collect()
}

fn check_pick_args(count: usize, tie_epsilon: f64) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidParameter("no candidates".into()));
    }
    if !(tie_epsilon >= 0.0) {
        return Err(Error::InvalidParameter("tie epsilon must be nonnegative".into()));
    }
    Ok(())
}

/// Picks the candidates with the least expected disagreement; the first
/// one in list order is chosen.
pub fn pick_rule(
    candidates: &[Rule],
    p: &Profile,
    estimation: Estimation,
    cfg: &DisagreementConfig,
    tie_epsilon: f64,
) -> Result<PickResult> {
    check_pick_args(candidates.len(), tie_epsilon)?;
    let report = evaluate_rules(candidates, p, estimation, cfg)?;
    Ok(pick_from_report(report, tie_epsilon))
}

pub(crate) fn pick_from_report(report: DisagreementReport, tie_epsilon: f64) -> PickResult {
    let means: Vec<f64> = report.rules.iter().map(|r| r.mean).collect();
    let argmin = argmin_within(&means, tie_epsilon);
    PickResult {
        chosen: argmin[0],
        argmin,
        tie_epsilon,
        report,
    }
}

/// Splits each item's scores into two equal halves, dropping one uniformly
/// chosen score when the count is odd.
pub fn score_split<R: Rng>(item_scores: &[Vec<f64>], rng: &mut R) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    item_scores
        .iter()
        .enumerate()
        .map(|(i, xs)| {
            if xs.len() < 2 {
                return Err(Error::Precondition(format!("item {i} has fewer than two scores")));
            }
            let mut v = xs.clone();
            v.shuffle(rng);
            if v.len() % 2 == 1 {
                v.pop();
            }
            let second = v.split_off(v.len() / 2);
            Ok((v, second))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatorEstimate {
    pub aggregator: ScoreAggregator,
    pub mean: f64,
    pub sem: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatorPick {
    pub version: String,
    pub seed: u64,
    pub trials: usize,
    pub items: usize,
    pub argmin: Vec<usize>,
    pub chosen: usize,
    pub tie_epsilon: f64,
    pub aggregators: Vec<AggregatorEstimate>,
}

impl AggregatorPick {
    pub fn chosen_aggregator(&self) -> ScoreAggregator {
        self.aggregators[self.chosen].aggregator
    }
}

/// Picks the score aggregator whose item rankings agree best across
/// random halves of every item's reviews.
pub fn pick_aggregator(
    aggs: &[ScoreAggregator],
    item_scores: &[Vec<f64>],
    n_trials: usize,
    seed: u64,
    tie_epsilon: f64,
) -> Result<AggregatorPick> {
    check_pick_args(aggs.len(), tie_epsilon)?;
    if n_trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let items = item_scores.len();
    let pairs = binomial(items as u64, 2);
    let rows: Vec<Vec<f64>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let halves = score_split(item_scores, &mut stream_rng(seed, t))?;
            aggs.iter()
                .map(|&agg| {
                    let side = |pick: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Result<WeakRanking> {
                        let s = halves.iter().map(|h| aggregate_scores(agg, pick(h))).collect::<Result<Vec<_>>>()?;
                        Ok(scores_to_ranking(&s))
                    };
                    let (r1, r2) = (side(|h| &h.0)?, side(|h| &h.1)?);
                    let kt = kt_with_ties(&r1, &r2)?;
                    Ok(if pairs > 0.0 { kt / pairs } else { 0.0 })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let aggregators: Vec<AggregatorEstimate> = aggs
        .iter()
        .enumerate()
        .map(|(j, &aggregator)| {
            let values: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let (mean, sem) = mean_sem(&values);
            AggregatorEstimate {
                aggregator,
                mean,
                sem,
                values,
            }
        })
        .collect();
    let means: Vec<f64> = aggregators.iter().map(|a| a.mean).collect();
    let argmin = argmin_within(&means, tie_epsilon);
    Ok(AggregatorPick {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        trials: n_trials,
        items,
        chosen: argmin[0],
        argmin,
        tie_epsilon,
        aggregators,
    })
}

/// Fixed splits with their side profiles prepared once, for repeated
/// evaluation of many rules on the same splits.
pub struct PreparedSplits<'a> {
    ev: Evaluator<'a>,
    sides: Vec<SideData>,
}

impl<'a> PreparedSplits<'a> {
    pub fn new(p: &'a Profile, splits: &[Split], cfg: &DisagreementConfig) -> Result<Self> {
        let ev = Evaluator::new(p, *cfg)?;
        let sides = splits.iter().map(|s| ev.side_for(s)).collect::<Result<_>>()?;
        Ok(PreparedSplits { ev, sides })
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// Per-split values of `rule`; skipped splits are left out.
    pub fn values(&self, rule: &Rule) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.sides.len());
        for data in &self.sides {
            if let Some(v) = self.ev.value(rule, data)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn mean(&self, rule: &Rule) -> Result<f64> {
        Ok(mean_sem(&self.values(rule)?).0)
    }
}
