//! Axiom audits for rule picking.
//!
//! Covers shuffled profiles, the social welfare function induced by a
//! picker, checks of picker-level axioms on single instances, sampled
//! violation rates, and predicates for axioms a picked rule inherits.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abc::{pick_rule, DisagreementConfig, Estimation, PickResult};
use crate::distance::kt_with_ties;
use crate::numeric::{derive_seed, exact_sum, stream_rng};
use crate::rules::{NamedVector, PositionalScheme, Rule, RuleKind};
use crate::{AlternativeId, Error, Profile, Result, StrictRanking, WeakRanking};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `k * m!` copies of every ballot, with the entries at the 1-based
/// `positions` permuted in every possible way, each permutation applied to
/// the same number of copies.
pub fn shuffle(p: &Profile, positions: &[usize], k: usize) -> Result<Profile> {
    if !p.is_full() {
        return Err(Error::RequiresFullProfile);
    }
    let m = p.m();
    let set: BTreeSet<usize> = positions.iter().copied().collect();
    if set.len() != positions.len() || set.is_empty() || set.iter().any(|&j| j == 0 || j > m) {
        return Err(Error::InvalidParameter(format!(
            "shuffle positions {positions:?} must be distinct values in 1..={m}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("shuffle multiplier must be positive".into()));
    }
    let slots: Vec<usize> = set.into_iter().map(|j| j - 1).collect();
    let perms: Vec<Vec<usize>> = (0..slots.len()).permutations(slots.len()).collect();
    let copies = k * factorial(m) / perms.len();
    let mut out = Vec::with_capacity(p.n() * k * factorial(m));
    for r in p.rankings() {
        let o = r.order();
        for perm in &perms {
            let mut next = o.to_vec();
            for (i, &pi) in perm.iter().enumerate() {
                next[slots[i]] = o[slots[pi]];
            }
            let next = StrictRanking::new(next)?;
            out.extend(std::iter::repeat(next).take(copies));
        }
    }
    Profile::new(m, out)
}

/// Picks a rule and applies it to the same profile.
pub fn induced_swf(candidates: &[Rule], p: &Profile, estimation: Estimation, cfg: &DisagreementConfig) -> Result<WeakRanking> {
    Ok(induced(candidates, p, estimation, cfg)?.0)
}

fn induced(candidates: &[Rule], p: &Profile, estimation: Estimation, cfg: &DisagreementConfig) -> Result<(WeakRanking, PickResult)> {
    let pick = pick_rule(candidates, p, estimation, cfg, 0.0)?;
    Ok((pick.chosen_rule().apply(p)?, pick))
}

/// Picker-level axioms measured by violation rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    ReversalSymmetry,
    UnionConsistency,
    Monotonicity,
}

impl Axiom {
    pub const ALL: [Axiom; 3] = [Axiom::ReversalSymmetry, Axiom::UnionConsistency, Axiom::Monotonicity];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::ReversalSymmetry => "reversal_symmetry",
            Axiom::UnionConsistency => "union_consistency",
            Axiom::Monotonicity => "monotonicity",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown axiom `{name}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub instances: usize,
    pub violations: usize,
    pub rate: f64,
}

impl AxiomOutcome {
    fn new(axiom: Axiom, instances: usize, violations: usize) -> Self {
        let rate = if instances == 0 { 0.0 } else { violations as f64 / instances as f64 };
        AxiomOutcome {
            axiom,
            instances,
            violations,
            rate,
        }
    }
}

/// Fixed-point vector of a positional candidate over `m` positions.
fn fixed_vector(rule: &Rule, m: usize) -> Result<Vec<i64>> {
    match rule.positional_scheme() {
        Some(scheme) => Ok(scheme.vector_for(m)?.fixed()),
        None => Err(Error::Precondition(format!("`{rule}` is not a positional rule"))),
    }
}

fn reversed_fixed(rule: &Rule, m: usize) -> Result<Vec<i64>> {
    match rule.positional_scheme() {
        Some(scheme) => Ok(scheme.vector_for(m)?.reversed().fixed()),
        None => Err(Error::Precondition(format!("`{rule}` is not a positional rule"))),
    }
}

/// Adds the reversal of every positional candidate that is missing one.
pub fn reversal_closure(candidates: &[Rule], m: usize) -> Result<Vec<Rule>> {
    let mut out = candidates.to_vec();
    let mut have: BTreeSet<Vec<i64>> = candidates.iter().map(|r| fixed_vector(r, m)).collect::<Result<_>>()?;
    for rule in candidates {
        let scheme = rule.positional_scheme().expect("checked above");
        let rev = scheme.vector_for(m)?.reversed();
        if have.insert(rev.fixed()) {
            out.push(Rule::vector(rev));
        }
    }
    Ok(out)
}

/// Whether the picker satisfies reversal symmetry on `p`: the rules
/// picked on the reversed profile are the reversals of those picked on `p`.
///
/// Both profiles are evaluated on the same side assignments. The
/// candidate set must be positional and closed under reversal.
pub fn check_reversal_symmetry(
    candidates: &[Rule],
    p: &Profile,
    estimation: Estimation,
    cfg: &DisagreementConfig,
) -> Result<AxiomOutcome> {
    if !p.is_full() {
        return Err(Error::RequiresFullProfile);
    }
    let m = p.m();
    let vectors: BTreeSet<Vec<i64>> = candidates.iter().map(|r| fixed_vector(r, m)).collect::<Result<_>>()?;
    for rule in candidates {
        if !vectors.contains(&reversed_fixed(rule, m)?) {
            return Err(Error::Precondition(format!("candidate set lacks the reversal of `{rule}`")));
        }
    }
    let forward = pick_rule(candidates, p, estimation, cfg, 0.0)?;
    let backward = pick_rule(candidates, &p.reverse(), estimation, cfg, 0.0)?;
    let expected: BTreeSet<Vec<i64>> = forward
        .argmin_rules()
        .into_iter()
        .map(|r| reversed_fixed(r, m))
        .collect::<Result<_>>()?;
    let got: BTreeSet<Vec<i64>> = backward
        .argmin_rules()
        .into_iter()
        .map(|r| fixed_vector(r, m))
        .collect::<Result<_>>()?;
    Ok(AxiomOutcome::new(Axiom::ReversalSymmetry, 1, usize::from(expected != got)))
}

/// Union consistency on one pair of profiles. The instance counts only
/// when the two picked sets intersect.
pub fn check_union_consistency(
    candidates: &[Rule],
    pa: &Profile,
    pb: &Profile,
    estimation: Estimation,
    cfg: &DisagreementConfig,
) -> Result<AxiomOutcome> {
    let set = |p: &Profile| -> Result<BTreeSet<usize>> { Ok(pick_rule(candidates, p, estimation, cfg, 0.0)?.argmin.into_iter().collect()) };
    let (za, zb) = (set(pa)?, set(pb)?);
    let both: BTreeSet<usize> = za.intersection(&zb).copied().collect();
    if both.is_empty() {
        return Ok(AxiomOutcome::new(Axiom::UnionConsistency, 0, 0));
    }
    let zu = set(&pa.union(pb)?)?;
    Ok(AxiomOutcome::new(Axiom::UnionConsistency, 1, usize::from(zu != both)))
}

/// Moves `alt` up one position in every listed ballot where it is not on top.
pub fn promote(p: &Profile, voters: &[usize], alt: AlternativeId) -> Result<Profile> {
    let mut rankings = p.rankings().to_vec();
    for &v in voters {
        let mut o = rankings[v].order().to_vec();
        if let Some(j) = o.iter().position(|&a| a == alt) {
            if j > 0 {
                o.swap(j - 1, j);
            }
        }
        rankings[v] = StrictRanking::new(o)?;
    }
    Profile::new(p.m(), rankings)
}

/// Whether `alt` ends up strictly worse ranked by the induced rule on
/// `after` than on `before`.
pub fn monotonicity_violation(
    candidates: &[Rule],
    before: &Profile,
    after: &Profile,
    alt: AlternativeId,
    estimation: Estimation,
    cfg: &DisagreementConfig,
) -> Result<bool> {
    let r0 = induced_swf(candidates, before, estimation, cfg)?;
    let r1 = induced_swf(candidates, after, estimation, cfg)?;
    Ok(r1.rank_of(alt)? > r0.rank_of(alt)?)
}

/// Promotes the induced winner for a random fraction of voters drawn
/// from `U(0.2, 0.8)` and checks that its rank does not get worse.
pub fn check_monotonicity(
    candidates: &[Rule],
    p: &Profile,
    estimation: Estimation,
    cfg: &DisagreementConfig,
    seed: u64,
) -> Result<AxiomOutcome> {
    if !p.is_full() {
        return Err(Error::RequiresFullProfile);
    }
    let (r0, _) = induced(candidates, p, estimation, cfg)?;
    let alt = r0.top_group()[0];
    let mut rng = stream_rng(seed, 0);
    let q: f64 = rng.gen_range(0.2..0.8);
    let count = ((q * p.n() as f64).round() as usize).min(p.n());
    let voters = sample(&mut rng, p.n(), count).into_vec();
    let after = promote(p, &voters, alt)?;
    let r1 = induced_swf(candidates, &after, estimation, cfg)?;
    Ok(AxiomOutcome::new(Axiom::Monotonicity, 1, usize::from(r1.rank_of(alt)? > r0.rank_of(alt)?)))
}

fn is_plurality(rule: &Rule, m: usize) -> Result<bool> {
    Ok(match rule.positional_scheme() {
        Some(_) => fixed_vector(rule, m)? == NamedVector::Plurality.vector(m)?.fixed(),
        None => false,
    })
}

/// Whether the picker selects only plurality on the `k`-shuffle of `p`
/// over positions `2..=m`.
pub fn check_psc(candidates: &[Rule], p: &Profile, k: usize, estimation: Estimation, cfg: &DisagreementConfig) -> Result<bool> {
    let m = p.m();
    let flags: Vec<bool> = candidates.iter().map(|r| is_plurality(r, m)).collect::<Result<_>>()?;
    if !flags.iter().any(|&f| f) {
        return Err(Error::Precondition("candidates must include plurality".into()));
    }
    let plurality = PositionalScheme::Named(NamedVector::Plurality).apply(p)?;
    if !plurality.is_strict() {
        return Err(Error::Precondition("plurality output has ties".into()));
    }
    let shuffled = shuffle(p, &(2..=m).collect::<Vec<_>>(), k)?;
    let pick = pick_rule(candidates, &shuffled, estimation, cfg, 0.0)?;
    Ok(pick.argmin.iter().all(|&i| flags[i]))
}

/// Candidates maximizing total agreement with the voters, measured as
/// minus the summed Kendall-Tau distance of the output to every ballot.
pub fn welfare_pick(candidates: &[Rule], p: &Profile) -> Result<Vec<usize>> {
    if !p.is_full() {
        return Err(Error::RequiresFullProfile);
    }
    let ballots: Vec<WeakRanking> = p.rankings().iter().map(WeakRanking::from_strict).collect();
    let welfare: Vec<f64> = candidates
        .iter()
        .map(|rule| {
            let out = rule.apply(p)?;
            let d = ballots.iter().map(|b| kt_with_ties(b, &out)).collect::<Result<Vec<_>>>()?;
            Ok(-exact_sum(d))
        })
        .collect::<Result<_>>()?;
    let best = welfare.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..candidates.len()).filter(|&i| welfare[i] == best).collect())
}

/// Estimated violation rate of `axiom` over profiles drawn from `source`.
///
/// Profile `i` is `source(derive_seed(seed, i))` and is evaluated on
/// `n_splits` splits seeded from the same child seed. Union consistency
/// splits each profile's voters by index parity; reversal symmetry runs
/// on the reversal closure of the candidates.
pub fn violation_rate<F>(
    axiom: Axiom,
    source: F,
    candidates: &[Rule],
    n_profiles: usize,
    n_splits: usize,
    seed: u64,
    cfg: &DisagreementConfig,
) -> Result<AxiomOutcome>
where
    F: Fn(u64) -> Result<Profile> + Sync,
{
    let outcomes: Vec<AxiomOutcome> = (0..n_profiles as u64)
        .into_par_iter()
        .map(|i| {
            let child = derive_seed(seed, i);
            let p = source(child)?;
            let est = Estimation::Sampled { n_splits, seed: child };
            match axiom {
                Axiom::ReversalSymmetry => check_reversal_symmetry(&reversal_closure(candidates, p.m())?, &p, est, cfg),
                Axiom::UnionConsistency => {
                    let even: Vec<usize> = (0..p.n()).step_by(2).collect();
                    let odd: Vec<usize> = (1..p.n()).step_by(2).collect();
                    check_union_consistency(candidates, &p.restrict(&even), &p.restrict(&odd), est, cfg)
                }
                Axiom::Monotonicity => check_monotonicity(candidates, &p, est, cfg, derive_seed(child, 1)),
            }
        })
        .collect::<Result<_>>()?;
    let instances = outcomes.iter().map(|o| o.instances).sum();
    let violations = outcomes.iter().map(|o| o.violations).sum();
    Ok(AxiomOutcome::new(axiom, instances, violations))
}

/// Plurality, plurality-veto, veto, two-approval and Borda.
pub fn default_candidates() -> Vec<Rule> {
    [
        NamedVector::Plurality,
        NamedVector::PluralityVeto,
        NamedVector::Veto,
        NamedVector::TwoApproval,
        NamedVector::Borda,
    ]
    .into_iter()
    .map(Rule::named)
    .collect()
}

/// Output-level axioms that a picked rule passes on to the induced rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreservedAxiom {
    Smith,
    Condorcet,
    MajorityWinner,
    Pmc,
    Unanimity,
}

impl PreservedAxiom {
    pub const ALL: [PreservedAxiom; 5] = [
        PreservedAxiom::Smith,
        PreservedAxiom::Condorcet,
        PreservedAxiom::MajorityWinner,
        PreservedAxiom::Pmc,
        PreservedAxiom::Unanimity,
    ];
}

fn top_is(r: &WeakRanking, w: AlternativeId) -> bool {
    r.top_group() == [w]
}

/// The weak order whose strict part is the pairwise defeat relation, if
/// one exists.
pub fn majority_order(p: &Profile) -> Option<WeakRanking> {
    let m = p.m();
    let beats: Vec<Vec<bool>> = (0..m)
        .map(|a| (0..m).map(|b| p.pairwise_defeats(AlternativeId(a), AlternativeId(b))).collect())
        .collect();
    let wins: Vec<usize> = beats.iter().map(|row| row.iter().filter(|&&x| x).count()).collect();
    let r = crate::rules::scores_to_ranking(&wins.iter().map(|&w| w as f64).collect::<Vec<_>>());
    let levels = r.levels(m);
    let consistent = (0..m).all(|a| (0..m).all(|b| beats[a][b] == (levels[a] < levels[b])));
    consistent.then_some(r)
}

/// Whether output `r` on profile `p` satisfies `axiom`. Axioms whose
/// premise fails on `p` hold vacuously.
pub fn satisfies(axiom: PreservedAxiom, r: &WeakRanking, p: &Profile) -> bool {
    match axiom {
        PreservedAxiom::Smith => {
            let smith = p.smith_set();
            r.top_group().iter().all(|a| smith.contains(a))
        }
        PreservedAxiom::Condorcet => {
            let smith = p.smith_set();
            smith.len() != 1 || top_is(r, *smith.iter().next().expect("nonempty"))
        }
        PreservedAxiom::MajorityWinner => {
            let mut tops = vec![0usize; p.m()];
            for b in p.rankings() {
                if let Some(a) = b.order().first() {
                    tops[a.0] += 1;
                }
            }
            match (0..p.m()).find(|&a| 2 * tops[a] > p.n()) {
                Some(w) => top_is(r, AlternativeId(w)),
                None => true,
            }
        }
        PreservedAxiom::Pmc => match majority_order(p) {
            Some(order) => *r == order,
            None => true,
        },
        PreservedAxiom::Unanimity => match p.rankings().first() {
            Some(first) if p.is_full() && p.rankings().iter().all(|b| b == first) => *r == WeakRanking::from_strict(first),
            _ => true,
        },
    }
}

/// Promotes the top alternative of `rule`'s output for a random subset of
/// voters and reports whether its rank stayed the same or improved.
pub fn monotone_spot_check(rule: &Rule, p: &Profile, seed: u64) -> Result<bool> {
    let r0 = rule.apply(p)?;
    let Some(&alt) = r0.top_group().first() else {
        return Ok(true);
    };
    let mut rng = stream_rng(seed, 0);
    let count = rng.gen_range(0..=p.n());
    let voters = sample(&mut rng, p.n(), count).into_vec();
    let r1 = rule.apply(&promote(p, &voters, alt)?)?;
    Ok(r1.rank_of(alt)? <= r0.rank_of(alt)?)
}

/// Rule kinds that satisfy each preserved axiom by construction.
pub fn known_to_satisfy(rule: &Rule, axiom: PreservedAxiom) -> bool {
    match (&rule.kind, axiom) {
        (RuleKind::Kemeny { .. }, PreservedAxiom::Pmc) => false,
        (RuleKind::Kemeny { .. }, _) => true,
        (_, PreservedAxiom::Unanimity) => !matches!(rule.kind, RuleKind::PlackettLuce { .. }),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{three_groups, three_cycle};
    use proptest::prelude::*;

    fn plurality() -> Rule {
        Rule::named(NamedVector::Plurality)
    }

    fn veto() -> Rule {
        Rule::named(NamedVector::Veto)
    }

    fn strict(o: &[usize]) -> WeakRanking {
        WeakRanking::from_strict(&StrictRanking::from_indices(o).unwrap())
    }

    fn cfg() -> DisagreementConfig {
        DisagreementConfig::default()
    }

    fn count(p: &Profile, o: &[usize]) -> usize {
        p.rankings().iter().filter(|r| r.order().iter().map(|a| a.0).eq(o.iter().copied())).count()
    }

    #[test]
    fn shuffle_examples() {
        let p = Profile::from_orders(3, &[vec![0, 1, 2]]).unwrap();
        let s = shuffle(&p, &[1, 2], 1).unwrap();
        assert_eq!(s.n(), 6);
        assert_eq!((count(&s, &[0, 1, 2]), count(&s, &[1, 0, 2])), (3, 3));
        let all = shuffle(&p, &[1, 2, 3], 1).unwrap();
        for perm in (0..3).permutations(3) {
            assert_eq!(count(&all, &perm), 1);
        }
        let twice = shuffle(&p, &[1, 2], 2).unwrap();
        assert_eq!((count(&twice, &[0, 1, 2]), count(&twice, &[1, 0, 2])), (6, 6));
        assert_eq!(shuffle(&p, &[2], 1).unwrap(), Profile::from_orders(3, &vec![vec![0, 1, 2]; 6]).unwrap());
        assert!(shuffle(&p, &[2, 2], 1).is_err());
        assert!(shuffle(&p, &[1, 4], 1).is_err());
        let partial = Profile::from_orders(3, &[vec![0, 1]]).unwrap();
        assert_eq!(shuffle(&partial, &[1, 2], 1), Err(Error::RequiresFullProfile));
    }

    #[test]
    fn induced_examples() {
        let p = three_groups(2);
        assert_eq!(induced_swf(&[veto()], &p, Estimation::default(), &cfg()).unwrap(), veto().apply(&p).unwrap());
        let r = induced_swf(&[plurality(), veto()], &p, Estimation::Exact, &cfg()).unwrap();
        assert_eq!(r, strict(&[0, 1, 2]));
        let unanimous = Profile::from_orders(4, &vec![vec![2, 3, 0, 1]; 6]).unwrap();
        let r = induced_swf(&[Rule::named(NamedVector::Borda), Rule::kemeny()], &unanimous, Estimation::default(), &cfg()).unwrap();
        assert_eq!(r, strict(&[2, 3, 0, 1]));
    }

    #[test]
    fn reversal_symmetry_examples() {
        let p = three_groups(3);
        let f = [plurality(), veto(), Rule::named(NamedVector::Borda)];
        assert_eq!(check_reversal_symmetry(&f, &p, Estimation::default(), &cfg()).unwrap().violations, 0);
        assert!(matches!(
            check_reversal_symmetry(&[plurality()], &p, Estimation::default(), &cfg()),
            Err(Error::Precondition(_))
        ));
        let closed = reversal_closure(&[plurality(), Rule::named(NamedVector::Borda)], 3).unwrap();
        assert_eq!(closed.len(), 3);
        // A palindromic profile: every ballot appears with its reversal.
        let pal = Profile::from_orders(3, &[vec![0, 1, 2], vec![2, 1, 0], vec![1, 0, 2], vec![2, 0, 1]]).unwrap();
        let pick = pick_rule(&f, &pal, Estimation::Exact, &cfg(), 0.0).unwrap();
        let set: BTreeSet<Vec<i64>> = pick.argmin_rules().iter().map(|r| fixed_vector(r, 3).unwrap()).collect();
        let rev: BTreeSet<Vec<i64>> = pick.argmin_rules().iter().map(|r| reversed_fixed(r, 3).unwrap()).collect();
        assert_eq!(set, rev);
    }

    #[test]
    fn union_consistency_skips_disjoint_picks() {
        let pa = Profile::from_orders(2, &[vec![0, 1]]).unwrap();
        let out = check_union_consistency(&[plurality()], &pa, &pa, Estimation::default(), &cfg()).unwrap();
        assert_eq!((out.instances, out.violations), (1, 0));
    }

    #[test]
    fn monotonicity_examples() {
        let p = three_groups(3);
        let borda = [Rule::named(NamedVector::Borda)];
        for seed in 0..5 {
            assert_eq!(check_monotonicity(&borda, &p, Estimation::default(), &cfg(), seed).unwrap().violations, 0);
        }
        let unanimous = Profile::from_orders(3, &vec![vec![1, 0, 2]; 4]).unwrap();
        assert_eq!(promote(&unanimous, &[0, 1, 2, 3], AlternativeId(1)).unwrap(), unanimous);
    }

    #[test]
    fn psc_examples() {
        let p = Profile::from_groups(3, &[(2, vec![0, 1, 2]), (1, vec![1, 0, 2])]).unwrap();
        assert!(check_psc(&[plurality()], &p, 1, Estimation::default(), &cfg()).unwrap());
        assert!(check_psc(&[veto()], &p, 1, Estimation::default(), &cfg()).is_err());
        let tied = Profile::from_orders(3, &[vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert!(check_psc(&[plurality(), veto()], &tied, 1, Estimation::default(), &cfg()).is_err());
        let shuffled = shuffle(&p, &[2, 3], 1).unwrap();
        assert_eq!(welfare_pick(&[plurality(), veto()], &shuffled).unwrap(), vec![0, 1]);
    }

    #[test]
    fn predicate_examples() {
        let unanimous = Profile::from_orders(3, &vec![vec![2, 0, 1]; 3]).unwrap();
        assert!(satisfies(PreservedAxiom::Unanimity, &strict(&[2, 0, 1]), &unanimous));
        assert!(!satisfies(PreservedAxiom::Unanimity, &strict(&[0, 2, 1]), &unanimous));
        let p = Profile::from_orders(3, &[vec![1, 0, 2], vec![1, 2, 0], vec![0, 1, 2]]).unwrap();
        assert!(satisfies(PreservedAxiom::Condorcet, &strict(&[1, 2, 0]), &p));
        assert!(!satisfies(PreservedAxiom::Condorcet, &strict(&[0, 1, 2]), &p));
        assert!(satisfies(PreservedAxiom::MajorityWinner, &strict(&[1, 0, 2]), &p));
        assert!(!satisfies(PreservedAxiom::MajorityWinner, &strict(&[0, 1, 2]), &p));
        assert_eq!(majority_order(&three_cycle()), None);
        assert!(satisfies(PreservedAxiom::Pmc, &strict(&[2, 1, 0]), &three_cycle()));
        assert_eq!(majority_order(&p), Some(strict(&[1, 0, 2])));
        assert!(!satisfies(PreservedAxiom::Pmc, &strict(&[1, 2, 0]), &p));
        let pairwise_tie = Profile::from_orders(3, &[vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert_eq!(majority_order(&pairwise_tie), Some(WeakRanking::from_indices(&[&[0, 1], &[2]]).unwrap()));
    }

    #[test]
    fn positional_rules_pass_spot_checks() {
        let p = three_groups(3);
        for seed in 0..10 {
            assert!(monotone_spot_check(&Rule::named(NamedVector::Borda), &p, seed).unwrap());
        }
    }

    #[test]
    fn violation_rate_with_one_profile() {
        let source = |_seed: u64| Ok(three_groups(2));
        let out = violation_rate(Axiom::Monotonicity, source, &default_candidates(), 1, 5, 0, &cfg()).unwrap();
        assert!(out.rate == 0.0 || out.rate == 1.0);
        let out = violation_rate(Axiom::ReversalSymmetry, source, &[plurality()], 3, 5, 0, &cfg()).unwrap();
        assert_eq!((out.instances, out.violations), (3, 0));
    }

    fn arb_profile(m: usize) -> impl Strategy<Value = Profile> {
        // Odd electorates have no pairwise ties.
        (0usize..4)
            .prop_flat_map(move |h| proptest::collection::vec(Just((0..m).collect::<Vec<_>>()).prop_shuffle(), 2 * h + 1))
            .prop_map(move |o| Profile::from_orders(m, &o).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn shuffle_counts(p in arb_profile(4), k in 1usize..=2) {
            let s = shuffle(&p, &[2, 3], k).unwrap();
            prop_assert_eq!(s.n(), p.n() * k * 24);
            let swapped: usize = p.rankings().iter().map(|r| {
                let o: Vec<usize> = r.order().iter().map(|a| a.0).collect();
                let mut q = o.clone();
                q.swap(1, 2);
                count(&s, &q)
            }).sum();
            // Each of the two permutations covers 12k copies per voter; a
            // swapped ballot may coincide with another voter's original.
            prop_assert!(swapped >= p.n() * k * 12);
        }

        #[test]
        fn kemeny_preserves_output_axioms(p in arb_profile(4)) {
            for candidates in [vec![Rule::kemeny()], vec![Rule::kemeny(), Rule::kemeny()]] {
                let r = induced_swf(&candidates, &p, Estimation::default(), &cfg()).unwrap();
                for axiom in PreservedAxiom::ALL {
                    prop_assert!(satisfies(axiom, &r, &p), "{:?}", axiom);
                }
            }
        }

        #[test]
        fn mirrored_splits_never_break_reversal_symmetry(p in arb_profile(5), seed in any::<u64>()) {
            let f = reversal_closure(&default_candidates(), 5).unwrap();
            let out = check_reversal_symmetry(&f, &p, Estimation::Sampled { n_splits: 6, seed }, &cfg()).unwrap();
            prop_assert_eq!(out.violations, 0);
        }
    }
}
