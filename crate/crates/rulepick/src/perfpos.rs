//! Deciding whether some positional scoring rule makes the two sides of a
//! split agree perfectly.
//!
//! The decider walks strict orders depth first. Each prefix fixes that its
//! last alternative beats every alternative not yet placed, on both sides;
//! a small linear program maximizing the common margin prunes prefixes
//! that no scoring vector can realize. A positive margin yields a witness
//! that is re-checked in exact integer arithmetic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abc::{Side, Split};
use crate::axioms::shuffle;
use crate::rules::ScoringVector;
use crate::{AlternativeId, Error, Profile, Result, StrictRanking};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 8;
/// Smallest normalized margin accepted as strictly positive.
pub const MARGIN_EPSILON: f64 = 1e-9;
const PIVOT_TOLERANCE: f64 = 1e-12;

/// A full profile split into two equally sized sides.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfPosInstance {
    profile: Profile,
    split: Split,
}

fn check_split(p: &Profile, split: &Split) -> Result<()> {
    if split.len() != p.n() {
        return Err(Error::InvalidParameter(format!("split covers {} voters, profile has {}", split.len(), p.n())));
    }
    let (one, two) = (split.voters(Side::One).len(), split.voters(Side::Two).len());
    if one != two {
        return Err(Error::InvalidParameter(format!("sides have {one} and {two} voters")));
    }
    Ok(())
}

impl PerfPosInstance {
    pub fn new(profile: Profile, split: Split) -> Result<Self> {
        if !profile.is_full() {
            return Err(Error::RequiresFullProfile);
        }
        check_split(&profile, &split)?;
        Ok(PerfPosInstance { profile, split })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn split(&self) -> &Split {
        &self.split
    }

    fn counts(&self) -> [Counts; 2] {
        side_counts(&self.profile, &self.split, self.profile.m())
    }
}

/// A profile whose ballots all rank exactly `k` alternatives, split into
/// two equally sized sides.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialInstance {
    profile: Profile,
    split: Split,
    k: usize,
}

impl PartialInstance {
    pub fn new(profile: Profile, split: Split) -> Result<Self> {
        check_split(&profile, &split)?;
        let k = profile.rankings().first().map_or(profile.m(), StrictRanking::len);
        if profile.rankings().iter().any(|r| r.len() != k) {
            return Err(Error::InvalidParameter("ballots must all have the same length".into()));
        }
        if k < 2 {
            return Err(Error::InvalidParameter("ballots must rank at least two alternatives".into()));
        }
        Ok(PartialInstance { profile, split, k })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn split(&self) -> &Split {
        &self.split
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn counts(&self) -> [Counts; 2] {
        side_counts(&self.profile, &self.split, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfPosAnswer {
    pub decision: Decision,
    pub witness: Option<ScoringVector>,
    pub certified_order: Option<StrictRanking>,
}

impl PerfPosAnswer {
    fn no() -> Self {
        PerfPosAnswer {
            decision: Decision::No,
            witness: None,
            certified_order: None,
        }
    }
}

/// `counts[a][i]`: voters on one side ranking `a` at zero-based position `i`.
type Counts = Vec<Vec<u64>>;

fn side_counts(p: &Profile, split: &Split, len: usize) -> [Counts; 2] {
    let mut counts = [vec![vec![0u64; len]; p.m()], vec![vec![0u64; len]; p.m()]];
    for (r, side) in p.rankings().iter().zip(split.sides()) {
        let c = &mut counts[usize::from(*side == Side::Two)];
        for (i, a) in r.order().iter().enumerate().take(len) {
            c[a.0][i] += 1;
        }
    }
    counts
}

pub fn decide_perfpos(inst: &PerfPosInstance) -> Result<PerfPosAnswer> {
    decide_perfpos_with_limit(inst, DEFAULT_ENUMERATION_LIMIT)
}

pub fn decide_perfpos_with_limit(inst: &PerfPosInstance, limit: usize) -> Result<PerfPosAnswer> {
    decide_counts(&inst.counts(), inst.profile.m(), limit)
}

/// Decides the generalized problem over vectors of length `k` directly.
pub fn decide_k_perfpos(inst: &PartialInstance, limit: usize) -> Result<PerfPosAnswer> {
    decide_counts(&inst.counts(), inst.k, limit)
}

pub fn verify_witness(s: &ScoringVector, inst: &PerfPosInstance) -> bool {
    s.len() == inst.profile.m() && verify_counts(s, &inst.counts())
}

pub fn verify_k_witness(s: &ScoringVector, inst: &PartialInstance) -> bool {
    s.len() == inst.k && verify_counts(s, &inst.counts())
}

/// Every pair has strictly same-signed total differences on both sides.
fn verify_counts(s: &ScoringVector, counts: &[Counts; 2]) -> bool {
    let fixed = s.fixed();
    let totals = |c: &Counts| -> Vec<i128> {
        c.iter()
            .map(|row| row.iter().zip(&fixed).map(|(&n, &w)| n as i128 * w as i128).sum())
            .collect()
    };
    let (t1, t2) = (totals(&counts[0]), totals(&counts[1]));
    let m = t1.len();
    (0..m).all(|a| (a + 1..m).all(|b| (t1[a] - t1[b]).signum() * (t2[a] - t2[b]).signum() > 0))
}

fn decide_counts(counts: &[Counts; 2], len: usize, limit: usize) -> Result<PerfPosAnswer> {
    let m = counts[0].len();
    if m > limit {
        return Err(Error::EnumerationLimit { m, limit });
    }
    if m <= 1 {
        let witness = ScoringVector::new((0..len).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect())?;
        return Ok(PerfPosAnswer {
            decision: Decision::Yes,
            witness: Some(witness),
            certified_order: Some(StrictRanking::new((0..m).map(AlternativeId).collect())?),
        });
    }
    let search = Search { counts, len };
    let found = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut prefix = vec![first];
            search.extend(&mut prefix, &mut Vec::new())
        })
        .find_first(Option::is_some)
        .flatten();
    match found {
        Some((order, witness)) => Ok(PerfPosAnswer {
            decision: Decision::Yes,
            witness: Some(witness),
            certified_order: Some(StrictRanking::new(order.into_iter().map(AlternativeId).collect())?),
        }),
        None => Ok(PerfPosAnswer::no()),
    }
}

struct Search<'a> {
    counts: &'a [Counts; 2],
    len: usize,
}

/// `sum_i d_i s_i >= margin`, with `d` over positions `1..len-1` scaled to
/// unit `l1` norm.
type PairRow = Vec<f64>;

impl Search<'_> {
    /// Rows stating that `winner` beats every alternative not in `placed`.
    fn rows_for(&self, winner: usize, placed: &[usize]) -> Option<Vec<PairRow>> {
        let m = self.counts[0].len();
        let mut rows = Vec::new();
        for loser in (0..m).filter(|x| !placed.contains(x)) {
            for c in self.counts {
                let d: Vec<f64> = (0..self.len - 1).map(|i| c[winner][i] as f64 - c[loser][i] as f64).collect();
                let norm: f64 = d.iter().map(|x| x.abs()).sum();
                if norm == 0.0 {
                    return None;
                }
                rows.push(d.iter().map(|x| x / norm).collect());
            }
        }
        Some(rows)
    }

    fn extend(&self, prefix: &mut Vec<usize>, rows: &mut Vec<PairRow>) -> Option<(Vec<usize>, ScoringVector)> {
        let m = self.counts[0].len();
        let last = *prefix.last().expect("nonempty prefix");
        let added = self.rows_for(last, prefix)?;
        let before = rows.len();
        rows.extend(added);
        let result = self.extend_checked(prefix, rows, m);
        rows.truncate(before);
        result
    }

    fn extend_checked(&self, prefix: &mut Vec<usize>, rows: &[PairRow], m: usize) -> Option<(Vec<usize>, ScoringVector)> {
        let (margin, s) = max_margin(rows, self.len);
        if margin <= MARGIN_EPSILON {
            return None;
        }
        if prefix.len() + 1 >= m {
            let mut order = prefix.clone();
            order.extend((0..m).filter(|x| !prefix.contains(x)));
            let witness = to_vector(&s)?;
            return verify_counts(&witness, self.counts).then_some((order, witness));
        }
        let mut rows = rows.to_vec();
        for next in 0..m {
            if prefix.contains(&next) {
                continue;
            }
            prefix.push(next);
            let found = self.extend(prefix, &mut rows);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn to_vector(s: &[f64]) -> Option<ScoringVector> {
    let mut prev = 1.0f64;
    let clean: Vec<f64> = s
        .iter()
        .map(|&x| {
            prev = x.clamp(0.0, prev);
            prev
        })
        .collect();
    ScoringVector::new(clean).ok()
}

/// Largest common margin over `rows` and the maximizing full vector.
///
/// Variables are `s_2 .. s_{len-1}` and `eta = margin + 1`, which keeps the
/// origin feasible.
fn max_margin(rows: &[PairRow], len: usize) -> (f64, Vec<f64>) {
    let d = len - 2;
    let nv = d + 1;
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    if d > 0 {
        let mut r = vec![0.0; nv];
        r[0] = 1.0;
        a.push(r);
        b.push(1.0);
        for j in 0..d - 1 {
            let mut r = vec![0.0; nv];
            r[j + 1] = 1.0;
            r[j] = -1.0;
            a.push(r);
            b.push(0.0);
        }
    }
    for row in rows {
        let mut r: Vec<f64> = row[1..].iter().map(|x| -x).collect();
        r.push(1.0);
        a.push(r);
        b.push(row[0] + 1.0);
    }
    let mut cap = vec![0.0; nv];
    cap[d] = 1.0;
    a.push(cap);
    b.push(2.0);
    let mut c = vec![0.0; nv];
    c[d] = 1.0;
    let (value, x) = simplex_max(&a, &b, &c);
    let mut s = Vec::with_capacity(len);
    s.push(1.0);
    s.extend_from_slice(&x[..d]);
    s.push(0.0);
    (value - 1.0, s)
}

/// Maximizes `c x` subject to `a x <= b`, `x >= 0`, for `b >= 0` and a
/// bounded feasible region, using Bland's rule.
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> (f64, Vec<f64>) {
    let (rows, nv) = (a.len(), c.len());
    let width = nv + rows + 1;
    let mut t: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (r, &bi))| {
            let mut row = vec![0.0; width];
            row[..nv].copy_from_slice(r);
            row[nv + i] = 1.0;
            row[width - 1] = bi;
            row
        })
        .collect();
    let mut obj = vec![0.0; width];
    for (j, &cj) in c.iter().enumerate() {
        obj[j] = -cj;
    }
    let mut basis: Vec<usize> = (nv..nv + rows).collect();
    while let Some(enter) = (0..width - 1).find(|&j| obj[j] < -PIVOT_TOLERANCE) {
        let leave = (0..rows)
            .filter(|&i| t[i][enter] > PIVOT_TOLERANCE)
            .min_by(|&i, &k| {
                let (ri, rk) = (t[i][width - 1] / t[i][enter], t[k][width - 1] / t[k][enter]);
                ri.total_cmp(&rk).then(basis[i].cmp(&basis[k]))
            })
            .expect("bounded region");
        let pivot = t[leave][enter];
        for v in t[leave].iter_mut() {
            *v /= pivot;
        }
        let prow = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && row[enter] != 0.0 {
                let f = row[enter];
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
            }
        }
        let f = obj[enter];
        for (v, p) in obj.iter_mut().zip(&prow) {
            *v -= f * p;
        }
        basis[leave] = enter;
    }
    let mut x = vec![0.0; nv];
    for (i, &j) in basis.iter().enumerate() {
        if j < nv {
            x[j] = t[i][width - 1];
        }
    }
    (obj[width - 1], x)
}

/// Completes every ballot with its missing alternatives by increasing id,
/// then shuffles positions `k..=m` once. Copies keep their voter's side.
pub fn reduce_k_perfpos(inst: &PartialInstance) -> Result<PerfPosInstance> {
    let p = &inst.profile;
    let m = p.m();
    let completed: Vec<StrictRanking> = p
        .rankings()
        .iter()
        .map(|r| {
            let mut o = r.order().to_vec();
            o.extend((0..m).map(AlternativeId).filter(|a| !r.order().contains(a)));
            StrictRanking::new(o)
        })
        .collect::<Result<_>>()?;
    let full = Profile::new(m, completed)?;
    let shuffled = shuffle(&full, &(inst.k..=m).collect::<Vec<_>>(), 1)?;
    let copies = if p.n() == 0 { 0 } else { shuffled.n() / p.n() };
    let sides = inst
        .split
        .sides()
        .iter()
        .flat_map(|&s| std::iter::repeat(s).take(copies))
        .collect();
    PerfPosInstance::new(shuffled, Split::new(sides))
}

/// A 3-CNF formula over variables `1..=vars`; literal `-j` negates `x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for clause in &clauses {
            let mut seen: Vec<u64> = clause.iter().map(|l| l.unsigned_abs()).collect();
            seen.sort_unstable();
            seen.dedup();
            if clause.is_empty() || clause.len() > 3 || seen.len() != clause.len() {
                return Err(Error::InvalidParameter(format!("clause {clause:?} needs one to three distinct variables")));
            }
            if seen.iter().any(|&v| v == 0 || v as usize > vars) {
                return Err(Error::InvalidParameter(format!("clause {clause:?} uses a variable outside 1..={vars}")));
            }
        }
        Ok(Cnf { vars, clauses })
    }

    pub fn is_satisfiable(&self) -> bool {
        (0u64..1 << self.vars).any(|bits| {
            self.clauses.iter().all(|c| {
                c.iter().any(|&l| {
                    let value = bits >> (l.unsigned_abs() - 1) & 1 == 1;
                    value == (l > 0)
                })
            })
        })
    }
}

/// The partial instance that is a yes instance exactly when `formula` is
/// satisfiable.
///
/// Ballots have length `k = vars + 2`. Variable `x_i` contributes
/// alternatives `a_i` and `b_i`, clause `C_i` contributes `c_i` and `d_i`,
/// and `k` filler alternatives `e_j` occupy every position not used by the
/// alternative a voter exists for. Filler-only voters equalize the sides.
pub fn generate_hard_instance(formula: &Cnf) -> Result<PartialInstance> {
    let (t, q) = (formula.vars, formula.clauses.len());
    let k = t + 2;
    let inv_eps = 7 * (k as u64 + 2);
    let (k64, t64) = (k as u64, t as u64);
    let m = 2 * t + 2 * q + k;
    let (a, b, c, d, e) = (|i: usize| i, |i: usize| t + i, |i: usize| 2 * t + i, |i: usize| 2 * t + q + i, |j: usize| 2 * t + 2 * q + j);
    let mut m1 = vec![vec![0u64; k]; m];
    let mut m2 = vec![vec![0u64; k]; m];
    for i in 0..t {
        let i64_ = i as u64;
        m1[a(i)][0] += 1 + (k64 + 3) * i64_;
        m1[a(i)][i + 1] += k64 + 2;
        m1[b(i)][0] += (k64 + 3) * i64_;
        m1[b(i)][i] += k64 + 2;
        m1[b(i)][k - 1] += 1;
        m2[a(i)][0] += 1 + (inv_eps + 1) * i64_;
        m2[a(i)][i + 1] += inv_eps;
        m2[b(i)][0] += (inv_eps + 1) * i64_;
        m2[b(i)][i] += inv_eps;
        m2[b(i)][k - 1] += 1;
    }
    for (i, clause) in formula.clauses.iter().enumerate() {
        let (i1, i0) = (i as u64 + 1, i as u64);
        let z = clause.iter().filter(|&&l| l < 0).count() as u64;
        m1[c(i)][0] += t64 * (k64 + 3) + 2 * i1;
        m1[d(i)][0] += t64 * (k64 + 3) + 2 * i1 - 1;
        m1[d(i)][k - 1] += 1;
        m2[c(i)][0] += 2 * z + t64 * (inv_eps + 1) + 6 * (k64 + 3) * i0;
        m2[c(i)][k - 1] += 1;
        m2[d(i)][0] += 1 + t64 * (inv_eps + 1) + 6 * (k64 + 3) * i0;
        m2[d(i)][k - 1] += 2 * z;
        for &lit in clause {
            // Zero-based position of variable x_j is j - 1.
            let j = lit.unsigned_abs() as usize - 1;
            let (cp, dp) = if lit > 0 { (j, j + 1) } else { (j + 1, j) };
            m2[c(i)][cp] += 2 * (k64 + 2);
            m2[d(i)][dp] += 2 * (k64 + 2);
        }
    }
    let filler = |pos: Option<(usize, usize)>| -> Result<StrictRanking> {
        let order = (0..k).map(|j| match pos {
            Some((f, i)) if i == j => AlternativeId(f),
            _ => AlternativeId(e(j)),
        });
        StrictRanking::new(order.collect())
    };
    let mut sides: [Vec<StrictRanking>; 2] = [Vec::new(), Vec::new()];
    for (side, counts) in [&m1, &m2].into_iter().enumerate() {
        for (f, row) in counts.iter().enumerate().take(2 * t + 2 * q) {
            for (i, &n) in row.iter().enumerate() {
                let ballot = filler(Some((f, i)))?;
                sides[side].extend(std::iter::repeat(ballot).take(n as usize));
            }
        }
    }
    let big = usize::from(sides[1].len() > sides[0].len());
    let n_big = sides[big].len();
    let n_small = sides[1 - big].len();
    let pad = filler(None)?;
    sides[big].extend(std::iter::repeat(pad.clone()).take((14 * k + 28) * n_big));
    sides[1 - big].extend(std::iter::repeat(pad).take((14 * k + 29) * n_big - n_small));
    let [one, two] = sides;
    let split = Split::new(
        std::iter::repeat(Side::One)
            .take(one.len())
            .chain(std::iter::repeat(Side::Two).take(two.len()))
            .collect(),
    );
    PartialInstance::new(Profile::new(m, one.into_iter().chain(two).collect())?, split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::random_split;
    use crate::distance::kt_with_ties;
    use crate::rules::{apply_positional, NamedVector};
    use itertools::Itertools;
    use proptest::prelude::*;

    fn instance(m: usize, one: &[Vec<usize>], two: &[Vec<usize>]) -> PerfPosInstance {
        let orders: Vec<Vec<usize>> = one.iter().chain(two).cloned().collect();
        let sides = std::iter::repeat(Side::One).take(one.len()).chain(std::iter::repeat(Side::Two).take(two.len())).collect();
        PerfPosInstance::new(Profile::from_orders(m, &orders).unwrap(), Split::new(sides)).unwrap()
    }

    fn partial(m: usize, one: &[Vec<usize>], two: &[Vec<usize>]) -> PartialInstance {
        let orders: Vec<Vec<usize>> = one.iter().chain(two).cloned().collect();
        let sides = std::iter::repeat(Side::One).take(one.len()).chain(std::iter::repeat(Side::Two).take(two.len())).collect();
        PartialInstance::new(Profile::from_orders(m, &orders).unwrap(), Split::new(sides)).unwrap()
    }

    #[test]
    fn identical_sides_are_yes() {
        let inst = instance(4, &[vec![2, 0, 3, 1]], &[vec![2, 0, 3, 1]]);
        let ans = decide_perfpos(&inst).unwrap();
        assert_eq!(ans.decision, Decision::Yes);
        assert!(verify_witness(ans.witness.as_ref().unwrap(), &inst));
        assert_eq!(ans.certified_order, Some(StrictRanking::from_indices(&[2, 0, 3, 1]).unwrap()));
        assert!(verify_witness(&NamedVector::Borda.vector(4).unwrap(), &inst));
    }

    #[test]
    fn contradictory_sides_are_no() {
        let inst = instance(2, &[vec![0, 1]], &[vec![1, 0]]);
        assert_eq!(decide_perfpos(&inst).unwrap(), PerfPosAnswer::no());
        assert!(!verify_witness(&ScoringVector::new(vec![1.0, 0.0]).unwrap(), &inst));
    }

    #[test]
    fn ties_fail_verification() {
        // Plurality ties b and c on both sides.
        let inst = instance(3, &[vec![0, 1, 2]], &[vec![0, 2, 1]]);
        assert!(!verify_witness(&NamedVector::Plurality.vector(3).unwrap(), &inst));
        assert_eq!(decide_perfpos(&inst).unwrap().decision, Decision::No);
        let wrong_len = ScoringVector::new(vec![1.0, 0.0]).unwrap();
        assert!(!verify_witness(&wrong_len, &inst));
    }

    #[test]
    fn instance_validation() {
        let p = Profile::from_orders(2, &[vec![0, 1], vec![1, 0], vec![0, 1]]).unwrap();
        let uneven = Split::new(vec![Side::One, Side::One, Side::Two]);
        assert!(PerfPosInstance::new(p.clone(), uneven).is_err());
        assert!(PerfPosInstance::new(p, Split::new(vec![Side::One, Side::Two])).is_err());
        let mixed = Profile::from_orders(3, &[vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert!(PartialInstance::new(mixed, Split::new(vec![Side::One, Side::Two])).is_err());
        let big = instance(9, &[(0..9).collect()], &[(0..9).collect()]);
        assert_eq!(decide_perfpos(&big), Err(Error::EnumerationLimit { m: 9, limit: 8 }));
        assert_eq!(decide_perfpos_with_limit(&big, 9).unwrap().decision, Decision::Yes);
    }

    #[test]
    fn simplex_examples() {
        // max x + y with x + 2y <= 4, 3x + y <= 6.
        let (v, x) = simplex_max(&[vec![1.0, 2.0], vec![3.0, 1.0]], &[4.0, 6.0], &[1.0, 1.0]);
        assert!((v - 2.8).abs() < 1e-12);
        assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn reduction_examples() {
        let inst = partial(3, &[vec![0, 1]], &[vec![0, 1]]);
        let full = reduce_k_perfpos(&inst).unwrap();
        assert_eq!(full.profile().n(), 12);
        let first: Vec<Vec<usize>> = full.profile().rankings()[..6].iter().map(|r| r.order().iter().map(|a| a.0).collect()).collect();
        assert_eq!(first.iter().filter(|o| **o == [0, 1, 2]).count(), 3);
        assert_eq!(first.iter().filter(|o| **o == [0, 2, 1]).count(), 3);
        assert!(full.split().sides()[..6].iter().all(|&s| s == Side::One));

        let whole = partial(3, &[vec![2, 0, 1]], &[vec![2, 1, 0]]);
        let same = reduce_k_perfpos(&whole).unwrap();
        assert_eq!(same.profile().n(), 12);
        assert_eq!(decide_perfpos(&same).unwrap().decision, decide_k_perfpos(&whole, 8).unwrap().decision);
    }

    /// Length-two vectors are all `(1, 0)`, so the partial side is a direct check.
    #[test]
    fn reduction_preserves_answers_exhaustively() {
        let ballots: Vec<Vec<usize>> = (0..3).permutations(2).collect();
        let pairs = |size: usize| -> Vec<Vec<Vec<usize>>> {
            ballots.iter().cloned().combinations_with_replacement(size).collect()
        };
        for size in 1..=2 {
            for one in pairs(size) {
                for two in pairs(size) {
                    let inst = partial(3, &one, &two);
                    let direct = verify_k_witness(&ScoringVector::new(vec![1.0, 0.0]).unwrap(), &inst);
                    let reduced = decide_perfpos(&reduce_k_perfpos(&inst).unwrap()).unwrap();
                    assert_eq!(reduced.decision == Decision::Yes, direct, "{one:?} | {two:?}");
                    assert_eq!(decide_k_perfpos(&inst, 8).unwrap().decision == Decision::Yes, direct);
                }
            }
        }
    }

    #[test]
    fn cnf_validation() {
        assert!(Cnf::new(2, vec![vec![1, -1]]).is_err());
        assert!(Cnf::new(2, vec![vec![3]]).is_err());
        assert!(Cnf::new(2, vec![vec![]]).is_err());
        assert!(Cnf::new(1, vec![vec![1]]).unwrap().is_satisfiable());
        assert!(!Cnf::new(1, vec![vec![1], vec![-1]]).unwrap().is_satisfiable());
    }

    #[test]
    fn hard_instances_follow_satisfiability() {
        let sat = Cnf::new(1, vec![vec![1]]).unwrap();
        let inst = generate_hard_instance(&sat).unwrap();
        assert_eq!((inst.profile().m(), inst.k()), (7, 3));
        let ans = decide_k_perfpos(&inst, 8).unwrap();
        assert_eq!(ans.decision, Decision::Yes);
        assert!(verify_k_witness(ans.witness.as_ref().unwrap(), &inst));

        let unsat = Cnf::new(1, vec![vec![1], vec![-1]]).unwrap();
        let inst = generate_hard_instance(&unsat).unwrap();
        assert_eq!(decide_k_perfpos(&inst, 9).unwrap().decision, Decision::No);
    }

    #[test]
    fn hard_instance_sizes_are_polynomial() {
        for (t, q) in [(1usize, 1usize), (2, 2), (3, 4)] {
            let clauses = (0..q).map(|i| vec![(i % t) as i64 + 1]).collect();
            let inst = generate_hard_instance(&Cnf::new(t, clauses).unwrap()).unwrap();
            let size = (t + q + 2) as usize;
            assert_eq!(inst.profile().m(), 3 * t + 2 * q + 2);
            assert!(inst.profile().n() <= 200 * size.pow(4), "{t} {q}: {}", inst.profile().n());
            let one = inst.split().voters(Side::One).len();
            assert_eq!(2 * one, inst.profile().n());
        }
    }

    fn arb_instance() -> impl Strategy<Value = PerfPosInstance> {
        (2usize..=4, 1usize..=4)
            .prop_flat_map(|(m, per_side)| {
                let ballot = Just((0..m).collect::<Vec<_>>()).prop_shuffle();
                (Just(m), proptest::collection::vec(ballot.clone(), per_side), proptest::collection::vec(ballot, per_side))
            })
            .prop_map(|(m, one, two)| instance(m, &one, &two))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn yes_answers_verify(inst in arb_instance()) {
            let ans = decide_perfpos(&inst).unwrap();
            if ans.decision == Decision::Yes {
                let s = ans.witness.unwrap();
                prop_assert!(verify_witness(&s, &inst));
                let (p1, p2) = crate::abc::side_profiles(inst.profile(), inst.split()).unwrap();
                let kt = kt_with_ties(&apply_positional(&s, &p1).unwrap(), &apply_positional(&s, &p2).unwrap()).unwrap();
                prop_assert_eq!(kt, 0.0);
            }
        }

        #[test]
        fn sampled_witnesses_never_contradict_no(inst in arb_instance(), seed in any::<u64>()) {
            use rand::Rng;
            let ans = decide_perfpos(&inst).unwrap();
            let m = inst.profile().m();
            let mut rng = crate::numeric::stream_rng(seed, 0);
            for _ in 0..300 {
                let mut inner: Vec<f64> = (0..m.saturating_sub(2)).map(|_| rng.gen::<f64>()).collect();
                inner.sort_by(|a, b| b.total_cmp(a));
                let mut raw = vec![1.0];
                raw.extend(inner);
                raw.push(0.0);
                if verify_witness(&ScoringVector::new(raw).unwrap(), &inst) {
                    prop_assert_eq!(ans.decision, Decision::Yes);
                    break;
                }
            }
        }

        #[test]
        fn random_splits_decide(seed in any::<u64>()) {
            let p = crate::fixtures::three_groups(1);
            let p = p.union(&p).unwrap();
            let split = random_split(p.n(), seed);
            if split.voters(Side::One).len() == split.voters(Side::Two).len() {
                let inst = PerfPosInstance::new(p, split).unwrap();
                let ans = decide_perfpos(&inst).unwrap();
                prop_assert!(ans.decision == Decision::No || verify_witness(ans.witness.as_ref().unwrap(), &inst));
            }
        }
    }
}
