//! Alternatives, rankings and profiles.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense alternative index in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlternativeId(pub usize);

impl AlternativeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for AlternativeId {
    fn from(i: usize) -> Self {
        AlternativeId(i)
    }
}

impl fmt::Display for AlternativeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A strict order over some (possibly all) alternatives, best first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<AlternativeId>", into = "Vec<AlternativeId>")]
pub struct StrictRanking {
    order: Vec<AlternativeId>,
}

impl StrictRanking {
    pub fn new(order: Vec<AlternativeId>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for a in &order {
            if !seen.insert(*a) {
                return Err(Error::DuplicateAlternative(a.0));
            }
        }
        Ok(StrictRanking { order })
    }

    pub fn from_indices(order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&i| AlternativeId(i)).collect())
    }

    pub fn order(&self) -> &[AlternativeId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reverse(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        StrictRanking { order }
    }

    /// Zero-based position of `a`, if ranked.
    pub fn position(&self, a: AlternativeId) -> Option<usize> {
        self.order.iter().position(|&b| b == a)
    }
}

impl TryFrom<Vec<AlternativeId>> for StrictRanking {
    type Error = Error;
    fn try_from(order: Vec<AlternativeId>) -> Result<Self> {
        Self::new(order)
    }
}

impl From<StrictRanking> for Vec<AlternativeId> {
    fn from(r: StrictRanking) -> Self {
        r.order
    }
}

/// A total preorder stored as ordered tie-groups, best first.
///
/// Ids inside a group are kept sorted so that equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<AlternativeId>>", into = "Vec<Vec<AlternativeId>>")]
pub struct WeakRanking {
    groups: Vec<Vec<AlternativeId>>,
}

impl WeakRanking {
    pub fn new(groups: Vec<Vec<AlternativeId>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(groups.len());
        for mut g in groups {
            if g.is_empty() {
                return Err(Error::InvalidParameter("empty tie-group".into()));
            }
            for a in &g {
                if !seen.insert(*a) {
                    return Err(Error::DuplicateAlternative(a.0));
                }
            }
            g.sort_unstable();
            out.push(g);
        }
        Ok(WeakRanking { groups: out })
    }

    pub fn from_indices(groups: &[&[usize]]) -> Result<Self> {
        Self::new(
            groups
                .iter()
                .map(|g| g.iter().map(|&i| AlternativeId(i)).collect())
                .collect(),
        )
    }

    /// The ranking that ties all `m` alternatives.
    pub fn empty(m: usize) -> Self {
        let groups = if m == 0 {
            Vec::new()
        } else {
            vec![(0..m).map(AlternativeId).collect()]
        };
        WeakRanking { groups }
    }

    pub fn from_strict(r: &StrictRanking) -> Self {
        WeakRanking {
            groups: r.order.iter().map(|&a| vec![a]).collect(),
        }
    }

    /// Groups alternatives by equal key, larger keys first.
    pub(crate) fn from_keys<K: Ord + Copy>(keys: &[K]) -> Self {
        let mut ids: Vec<usize> = (0..keys.len()).collect();
        ids.sort_by(|&a, &b| keys[b].cmp(&keys[a]).then(a.cmp(&b)));
        let mut groups: Vec<Vec<AlternativeId>> = Vec::new();
        let mut last: Option<K> = None;
        for i in ids {
            if last == Some(keys[i]) {
                groups.last_mut().expect("group exists").push(AlternativeId(i));
            } else {
                groups.push(vec![AlternativeId(i)]);
                last = Some(keys[i]);
            }
        }
        WeakRanking { groups }
    }

    pub fn groups(&self) -> &[Vec<AlternativeId>] {
        &self.groups
    }

    /// Number of ranked alternatives.
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    pub fn alternatives(&self) -> BTreeSet<AlternativeId> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn top_group(&self) -> &[AlternativeId] {
        self.groups.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// `1 +` the number of alternatives strictly above `a`.
    pub fn rank_of(&self, a: AlternativeId) -> Result<usize> {
        let mut above = 0;
        for g in &self.groups {
            if g.binary_search(&a).is_ok() {
                return Ok(above + 1);
            }
            above += g.len();
        }
        Err(Error::UnrankedAlternative(a.0))
    }

    pub fn reverse(&self) -> Self {
        let mut groups = self.groups.clone();
        groups.reverse();
        WeakRanking { groups }
    }

    /// Group index per alternative id, for ids below `m`.
    pub fn levels(&self, m: usize) -> Vec<Option<usize>> {
        let mut lv = vec![None; m];
        for (i, g) in self.groups.iter().enumerate() {
            for a in g {
                if a.0 < m {
                    lv[a.0] = Some(i);
                }
            }
        }
        lv
    }

    /// The strict order if every group is a singleton.
    pub fn to_strict(&self) -> Option<StrictRanking> {
        self.is_strict().then(|| StrictRanking {
            order: self.groups.iter().map(|g| g[0]).collect(),
        })
    }
}

impl TryFrom<Vec<Vec<AlternativeId>>> for WeakRanking {
    type Error = Error;
    fn try_from(groups: Vec<Vec<AlternativeId>>) -> Result<Self> {
        Self::new(groups)
    }
}

impl From<WeakRanking> for Vec<Vec<AlternativeId>> {
    fn from(r: WeakRanking) -> Self {
        r.groups
    }
}

impl fmt::Display for WeakRanking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(" > ")?;
            }
            if g.len() == 1 {
                write!(f, "{}", g[0])?;
            } else {
                let ids: Vec<String> = g.iter().map(|a| a.to_string()).collect();
                write!(f, "{{{}}}", ids.join(","))?;
            }
        }
        Ok(())
    }
}

/// Voter rankings over `m` alternatives; voter `i` is `rankings[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    rankings: Vec<StrictRanking>,
}

impl Profile {
    pub fn new(m: usize, rankings: Vec<StrictRanking>) -> Result<Self> {
        for r in &rankings {
            if let Some(a) = r.order.iter().find(|a| a.0 >= m) {
                return Err(Error::AlternativeOutOfRange { id: a.0, m });
            }
        }
        Ok(Profile { m, rankings })
    }

    /// Builds a profile from index slices, mainly for tests and fixtures.
    pub fn from_orders(m: usize, orders: &[Vec<usize>]) -> Result<Self> {
        let rankings = orders
            .iter()
            .map(|o| StrictRanking::from_indices(o))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, rankings)
    }

    /// Repeats each `(count, order)` entry `count` times.
    pub fn from_groups(m: usize, groups: &[(usize, Vec<usize>)]) -> Result<Self> {
        let mut orders = Vec::new();
        for (count, order) in groups {
            orders.extend(std::iter::repeat(order.clone()).take(*count));
        }
        Self::from_orders(m, &orders)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[StrictRanking] {
        &self.rankings
    }

    pub fn is_full(&self) -> bool {
        self.rankings.iter().all(|r| r.len() == self.m)
    }

    pub fn max_ballot_len(&self) -> usize {
        self.rankings.iter().map(StrictRanking::len).max().unwrap_or(0)
    }

    pub fn reverse(&self) -> Self {
        Profile {
            m: self.m,
            rankings: self.rankings.iter().map(StrictRanking::reverse).collect(),
        }
    }

    /// The sub-profile of the given voters, in the given order.
    pub fn restrict(&self, voters: &[usize]) -> Self {
        Profile {
            m: self.m,
            rankings: voters.iter().map(|&i| self.rankings[i].clone()).collect(),
        }
    }

    /// Concatenates the voters of two profiles over the same alternatives.
    pub fn union(&self, other: &Profile) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DomainMismatch(format!(
                "{} vs {} alternatives",
                self.m, other.m
            )));
        }
        let mut rankings = self.rankings.clone();
        rankings.extend(other.rankings.iter().cloned());
        Ok(Profile { m: self.m, rankings })
    }

    /// Number of rankings that contain each alternative.
    pub fn appearances(&self) -> Vec<usize> {
        let mut c = vec![0; self.m];
        for r in &self.rankings {
            for a in &r.order {
                c[a.0] += 1;
            }
        }
        c
    }

    pub fn position_counts(&self) -> PositionCounts {
        let mut counts = vec![vec![0u64; self.m]; self.m];
        for r in &self.rankings {
            for (j, a) in r.order.iter().enumerate() {
                counts[a.0][j] += 1;
            }
        }
        PositionCounts { counts }
    }

    /// `n[a][b]`: voters ranking both `a` and `b`, with `a` above `b`.
    pub fn pairwise_counts(&self) -> Vec<Vec<u64>> {
        let mut n = vec![vec![0u64; self.m]; self.m];
        for r in &self.rankings {
            for (i, a) in r.order.iter().enumerate() {
                for b in &r.order[i + 1..] {
                    n[a.0][b.0] += 1;
                }
            }
        }
        n
    }

    pub fn pairwise_defeats(&self, a: AlternativeId, b: AlternativeId) -> bool {
        let (mut ab, mut ba) = (0u64, 0u64);
        for r in &self.rankings {
            match (r.position(a), r.position(b)) {
                (Some(i), Some(j)) if i < j => ab += 1,
                (Some(i), Some(j)) if j < i => ba += 1,
                _ => {}
            }
        }
        ab > ba
    }

    /// Smallest set whose members each pairwise defeat every outsider.
    pub fn smith_set(&self) -> BTreeSet<AlternativeId> {
        let n = self.pairwise_counts();
        let m = self.m;
        let defeats = |a: usize, b: usize| n[a][b] > n[b][a];
        let wins: Vec<usize> = (0..m).map(|a| (0..m).filter(|&b| defeats(a, b)).count()).collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| wins[b].cmp(&wins[a]).then(a.cmp(&b)));
        for size in 1..=m {
            let (inside, outside) = order.split_at(size);
            if inside.iter().all(|&a| outside.iter().all(|&b| defeats(a, b))) {
                return inside.iter().map(|&a| AlternativeId(a)).collect();
            }
        }
        BTreeSet::new()
    }
}

/// `counts[a][j]`: voters placing alternative `a` at zero-based position `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionCounts {
    counts: Vec<Vec<u64>>,
}

impl PositionCounts {
    /// Count at one-based `position`.
    pub fn get(&self, a: AlternativeId, position: usize) -> u64 {
        assert!(position >= 1, "positions are one-based");
        self.counts[a.0][position - 1]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_groups;

    fn a(i: usize) -> AlternativeId {
        AlternativeId(i)
    }

    #[test]
    fn rank_of_examples() {
        let r = WeakRanking::from_indices(&[&[0], &[1], &[2]]).unwrap();
        assert_eq!(r.rank_of(a(0)).unwrap(), 1);
        let r = WeakRanking::from_indices(&[&[0, 1], &[2]]).unwrap();
        assert_eq!(r.rank_of(a(1)).unwrap(), 1);
        let r = WeakRanking::from_indices(&[&[0], &[1, 2], &[3]]).unwrap();
        assert_eq!(r.rank_of(a(3)).unwrap(), 4);
        assert_eq!(r.rank_of(a(7)), Err(Error::UnrankedAlternative(7)));
    }

    #[test]
    fn reverse_examples() {
        let s = StrictRanking::from_indices(&[0, 1, 2]).unwrap();
        assert_eq!(s.reverse().order(), &[a(2), a(1), a(0)]);
        let w = WeakRanking::from_indices(&[&[0, 1]]).unwrap();
        assert_eq!(w.reverse(), w);
        let p = Profile::from_orders(3, &[vec![0, 1, 2], vec![2, 0, 1]]).unwrap();
        let r = p.reverse();
        assert_eq!(r.rankings()[0].order(), &[a(2), a(1), a(0)]);
        assert_eq!(r.rankings()[1].order(), &[a(1), a(0), a(2)]);
        assert_eq!(r.reverse(), p);
    }

    #[test]
    fn position_counts_examples() {
        let pc = three_groups(1).position_counts();
        assert_eq!(pc.get(a(0), 1), 2);
        assert_eq!(pc.get(a(1), 1), 1);
        assert_eq!(pc.get(a(2), 1), 0);

        let empty = Profile::new(3, vec![]).unwrap().position_counts();
        assert!(empty.rows().iter().flatten().all(|&c| c == 0));

        let single = Profile::from_orders(2, &[vec![0, 1]]).unwrap().position_counts();
        assert_eq!(single.rows(), &[vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn pairwise_defeat_examples() {
        let p = Profile::from_orders(2, &[vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        assert!(p.pairwise_defeats(a(0), a(1)));
        let p = Profile::from_orders(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!p.pairwise_defeats(a(0), a(1)));
        assert!(!p.pairwise_defeats(a(1), a(0)));
        assert!(three_groups(2).pairwise_defeats(a(0), a(1)));
    }

    #[test]
    fn partial_voters_skip_unranked_pairs() {
        let p = Profile::from_orders(3, &[vec![0], vec![1, 0]]).unwrap();
        assert!(p.pairwise_defeats(a(1), a(0)));
    }

    #[test]
    fn smith_set_examples() {
        let cycle = Profile::from_orders(3, &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(cycle.smith_set(), [a(0), a(1), a(2)].into());
        let unanimous = Profile::from_orders(3, &vec![vec![2, 0, 1]; 4]).unwrap();
        assert_eq!(unanimous.smith_set(), [a(2)].into());
        assert_eq!(three_groups(1).smith_set(), [a(0)].into());
    }

    #[test]
    fn weak_ranking_canonical_form() {
        let x = WeakRanking::from_indices(&[&[2, 0], &[1]]).unwrap();
        let y = WeakRanking::from_indices(&[&[0, 2], &[1]]).unwrap();
        assert_eq!(x, y);
        assert!(WeakRanking::from_indices(&[&[0], &[0]]).is_err());
        assert_eq!(WeakRanking::empty(3).groups().len(), 1);
        assert_eq!(x.to_string(), "{0,2} > 1");
    }

    #[test]
    fn profile_rejects_out_of_range() {
        assert_eq!(
            Profile::from_orders(2, &[vec![0, 2]]),
            Err(Error::AlternativeOutOfRange { id: 2, m: 2 })
        );
        assert!(StrictRanking::from_indices(&[1, 1]).is_err());
    }

    #[test]
    fn from_keys_groups_equal_values() {
        let r = WeakRanking::from_keys(&[1, 2, 2]);
        assert_eq!(r, WeakRanking::from_indices(&[&[1, 2], &[0]]).unwrap());
    }
}
