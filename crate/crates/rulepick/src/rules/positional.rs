//! Positional scoring rules.
//!
//! Totals are accumulated in fixed point so that ties and orderings are
//! exact; a vector's entries are snapped to the same grid on construction.

use serde::{Deserialize, Serialize};

use crate::numeric::{snap, to_fixed, FIXED_ONE};
use crate::{Error, Profile, Result, WeakRanking};

/// Normalized scoring vector `1 = s_1 >= ... >= s_L = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ScoringVector {
    s: Vec<f64>,
}

impl ScoringVector {
    /// Affinely normalizes a weakly decreasing raw vector.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::InvalidScoringVector("needs at least two positions".into()));
        }
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidScoringVector("non-finite entry".into()));
        }
        if raw.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidScoringVector("entries must be weakly decreasing".into()));
        }
        let (hi, lo) = (raw[0], raw[raw.len() - 1]);
        if hi <= lo {
            return Err(Error::InvalidScoringVector("first and last entries coincide".into()));
        }
        let last = raw.len() - 1;
        let s = raw
            .iter()
            .enumerate()
            .map(|(j, &x)| match j {
                0 => 1.0,
                j if j == last => 0.0,
                _ => snap((x - lo) / (hi - lo)),
            })
            .collect();
        Ok(ScoringVector { s })
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `rev(s)_j = 1 - s_{L+1-j}`.
    pub fn reversed(&self) -> Self {
        ScoringVector {
            s: self.s.iter().rev().map(|x| 1.0 - x).collect(),
        }
    }

    pub(crate) fn fixed(&self) -> Vec<i64> {
        self.s.iter().map(|&x| to_fixed(x)).collect()
    }

    /// Weights for a ballot of length `k`.
    ///
    /// A shorter ballot uses the renormalized length-`k` prefix (or the raw
    /// prefix when it is constant); a longer ballot scores 0 past the end.
    pub(crate) fn ballot_weights(&self, k: usize) -> Vec<i64> {
        let l = self.s.len();
        if k >= l {
            let mut w = self.fixed();
            w.resize(k, 0);
            return w;
        }
        let prefix = &self.s[..k];
        let (hi, lo) = (prefix[0], prefix[k - 1]);
        if hi > lo {
            prefix.iter().map(|&x| to_fixed((x - lo) / (hi - lo))).collect()
        } else {
            prefix.iter().map(|&x| to_fixed(x)).collect()
        }
    }
}

impl TryFrom<Vec<f64>> for ScoringVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ScoringVector> for Vec<f64> {
    fn from(v: ScoringVector) -> Self {
        v.s
    }
}

/// Positional vectors known by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedVector {
    Plurality,
    Veto,
    Borda,
    TwoApproval,
    PluralityVeto,
    F1_1991,
    F1_2003,
    F1_2010,
    Leximax,
    MedalCount,
}

impl NamedVector {
    pub const ALL: [NamedVector; 10] = [
        NamedVector::Plurality,
        NamedVector::Veto,
        NamedVector::Borda,
        NamedVector::TwoApproval,
        NamedVector::PluralityVeto,
        NamedVector::F1_1991,
        NamedVector::F1_2003,
        NamedVector::F1_2010,
        NamedVector::Leximax,
        NamedVector::MedalCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedVector::Plurality => "plurality",
            NamedVector::Veto => "veto",
            NamedVector::Borda => "borda",
            NamedVector::TwoApproval => "two_approval",
            NamedVector::PluralityVeto => "plurality_veto",
            NamedVector::F1_1991 => "f1_1991",
            NamedVector::F1_2003 => "f1_2003",
            NamedVector::F1_2010 => "f1_2010",
            NamedVector::Leximax => "leximax",
            NamedVector::MedalCount => "medal_count",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == name)
            .ok_or_else(|| Error::UnknownRule(name.to_string()))
    }

    /// Fixed-prefix vectors score ballot positions by the leading entries of
    /// the length-`m` vector; the rest are rebuilt for each ballot length.
    fn is_fixed_prefix(self) -> bool {
        matches!(
            self,
            NamedVector::F1_1991 | NamedVector::F1_2003 | NamedVector::F1_2010 | NamedVector::Leximax | NamedVector::MedalCount
        )
    }

    fn raw(self, len: usize) -> Vec<f64> {
        let head: &[f64] = match self {
            NamedVector::Plurality => &[1.0],
            NamedVector::TwoApproval => &[1.0, 1.0],
            NamedVector::F1_1991 => &[10.0, 6.0, 4.0, 3.0, 2.0, 1.0],
            NamedVector::F1_2003 => &[10.0, 8.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0],
            NamedVector::F1_2010 => &[25.0, 18.0, 15.0, 12.0, 10.0, 8.0, 6.0, 4.0, 2.0, 1.0],
            NamedVector::Leximax => &[1e6, 1e3, 1.0],
            NamedVector::MedalCount => &[1.0, 1.0, 1.0],
            NamedVector::Veto => return (0..len).map(|j| if j + 1 < len { 1.0 } else { 0.0 }).collect(),
            NamedVector::Borda => return (0..len).map(|j| (len - 1 - j) as f64).collect(),
            NamedVector::PluralityVeto => {
                return (0..len)
                    .map(|j| match j {
                        0 => 1.0,
                        j if j + 1 == len => 0.0,
                        _ => 0.5,
                    })
                    .collect()
            }
        };
        (0..len).map(|j| head.get(j).copied().unwrap_or(0.0)).collect()
    }

    /// The normalized vector over `m` positions.
    pub fn vector(self, m: usize) -> Result<ScoringVector> {
        ScoringVector::new(self.raw(m))
    }

    /// Normalized weights, or the raw shape scaled to a unit maximum when
    /// the shape is constant over `len` positions.
    fn weights_at(self, len: usize) -> Vec<i64> {
        if len == 0 {
            return Vec::new();
        }
        let raw = self.raw(len);
        match ScoringVector::new(raw.clone()) {
            Ok(v) => v.fixed(),
            Err(_) => vec![FIXED_ONE; raw.len()],
        }
    }

    pub(crate) fn ballot_weights(self, k: usize, m: usize) -> Vec<i64> {
        if k <= 1 {
            return vec![FIXED_ONE; k];
        }
        if self.is_fixed_prefix() {
            let mut w = self.weights_at(m.max(k));
            w.truncate(k);
            w
        } else {
            self.weights_at(k)
        }
    }
}

/// The named vector over `m` positions.
pub fn named_vector(name: &str, m: usize) -> Result<ScoringVector> {
    NamedVector::parse(name)?.vector(m)
}

/// A positional rule's vector: a named family or an explicit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionalScheme {
    Named(NamedVector),
    Custom(ScoringVector),
}

impl PositionalScheme {
    /// The vector this scheme applies to full rankings over `m` alternatives.
    pub fn vector_for(&self, m: usize) -> Result<ScoringVector> {
        match self {
            PositionalScheme::Named(v) => v.vector(m),
            PositionalScheme::Custom(s) if s.len() == m => Ok(s.clone()),
            PositionalScheme::Custom(s) => Err(Error::DomainMismatch(format!(
                "vector has {} positions, profile has {m} alternatives",
                s.len()
            ))),
        }
    }

    fn ballot_weights(&self, k: usize, m: usize) -> Vec<i64> {
        match self {
            PositionalScheme::Named(v) => v.ballot_weights(k, m),
            PositionalScheme::Custom(s) => {
                if k <= 1 {
                    vec![FIXED_ONE; k]
                } else {
                    s.ballot_weights(k)
                }
            }
        }
    }

    /// Exact fixed-point totals per alternative.
    pub(crate) fn totals(&self, p: &Profile) -> Result<Vec<i128>> {
        if matches!(self, PositionalScheme::Named(NamedVector::Leximax)) {
            let worst = p.position_counts().rows().iter().flatten().copied().max().unwrap_or(0);
            if worst >= 1000 {
                return Err(Error::LeximaxBound(worst));
            }
        }
        let mut cache: Vec<Option<Vec<i64>>> = vec![None; p.max_ballot_len() + 1];
        let mut totals = vec![0i128; p.m()];
        for r in p.rankings() {
            let k = r.len();
            let w = cache[k].get_or_insert_with(|| self.ballot_weights(k, p.m()));
            for (a, wj) in r.order().iter().zip(w.iter()) {
                totals[a.0] += i128::from(*wj);
            }
        }
        Ok(totals)
    }

    pub fn apply(&self, p: &Profile) -> Result<WeakRanking> {
        Ok(WeakRanking::from_keys(&self.totals(p)?))
    }
}

/// Ranks alternatives by decreasing total score; equal totals tie.
pub fn apply_positional(s: &ScoringVector, p: &Profile) -> Result<WeakRanking> {
    PositionalScheme::Custom(s.clone()).apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_groups;
    use crate::numeric::from_fixed;

    fn named(v: NamedVector) -> PositionalScheme {
        PositionalScheme::Named(v)
    }

    #[test]
    fn normalization_examples() {
        let b = named_vector("borda", 4).unwrap();
        assert_eq!(b.values(), &[1.0, snap(2.0 / 3.0), snap(1.0 / 3.0), 0.0]);
        let f1 = named_vector("f1_2010", 12).unwrap();
        let expected = ScoringVector::new(vec![25.0, 18.0, 15.0, 12.0, 10.0, 8.0, 6.0, 4.0, 2.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(f1, expected);
        assert_eq!(f1.values()[1], snap(18.0 / 25.0));
        let lex = named_vector("leximax", 3).unwrap();
        assert_eq!(lex.values(), &[1.0, snap(999.0 / 999_999.0), 0.0]);
        assert!(matches!(named_vector("nope", 3), Err(Error::UnknownRule(_))));
    }

    #[test]
    fn invalid_vectors_rejected() {
        assert!(ScoringVector::new(vec![1.0]).is_err());
        assert!(ScoringVector::new(vec![0.0, 1.0]).is_err());
        assert!(ScoringVector::new(vec![1.0, 1.0]).is_err());
        assert!(ScoringVector::new(vec![f64::NAN, 0.0]).is_err());
        assert_eq!(ScoringVector::new(vec![7.0, 5.0, 3.0]).unwrap().values(), &[1.0, 0.5, 0.0]);
    }

    #[test]
    fn reverse_of_plurality_is_veto() {
        for m in 2..7 {
            let p = NamedVector::Plurality.vector(m).unwrap();
            assert_eq!(p.reversed(), NamedVector::Veto.vector(m).unwrap());
            let b = NamedVector::Borda.vector(m).unwrap();
            assert_eq!(b.reversed(), b);
        }
    }

    #[test]
    fn three_groups_plurality_and_veto() {
        let p = three_groups(1);
        let plur = named(NamedVector::Plurality).apply(&p).unwrap();
        assert_eq!(plur, WeakRanking::from_indices(&[&[0], &[1], &[2]]).unwrap());
        // Each alternative is last for exactly one group, so veto ties all three.
        let veto = named(NamedVector::Veto).apply(&p).unwrap();
        assert_eq!(veto, WeakRanking::empty(3));
        let empty = Profile::new(3, vec![]).unwrap();
        assert_eq!(named(NamedVector::Borda).apply(&empty).unwrap(), WeakRanking::empty(3));
    }

    #[test]
    fn partial_ballots_use_their_own_length() {
        // Veto on 3-item ballots out of 5 alternatives: last listed gets 0.
        let p = Profile::from_orders(5, &[vec![0, 1, 2], vec![3, 4, 0]]).unwrap();
        let t = named(NamedVector::Veto).totals(&p).unwrap();
        let t: Vec<f64> = t.into_iter().map(from_fixed).collect();
        assert_eq!(t, vec![1.0, 1.0, 0.0, 1.0, 1.0]);
        // A custom length-5 Borda vector on 3-ballots renormalizes its prefix.
        let b5 = NamedVector::Borda.vector(5).unwrap();
        let t = PositionalScheme::Custom(b5).totals(&p).unwrap();
        let t: Vec<f64> = t.into_iter().map(from_fixed).collect();
        assert_eq!(t, vec![1.0, 0.5, 0.0, 1.0, 0.5]);
    }

    #[test]
    fn medal_count_counts_medals() {
        let p = Profile::from_orders(6, &[vec![0, 1, 2], vec![3, 0, 4], vec![0, 5, 1]]).unwrap();
        let t = named(NamedVector::MedalCount).totals(&p).unwrap();
        assert_eq!(t, vec![3, 2, 1, 1, 1, 1].into_iter().map(|x| x * i128::from(FIXED_ONE)).collect::<Vec<_>>());
        let lex = named(NamedVector::Leximax).apply(&p).unwrap();
        // 0: two golds and a silver; 3: one gold; 1: silver + bronze; 5: silver; 2, 4: bronze.
        assert_eq!(lex, WeakRanking::from_indices(&[&[0], &[3], &[1], &[5], &[2, 4]]).unwrap());
    }

    #[test]
    fn leximax_bound_enforced() {
        let p = Profile::from_orders(3, &vec![vec![0, 1, 2]; 1000]).unwrap();
        assert_eq!(named(NamedVector::Leximax).apply(&p), Err(Error::LeximaxBound(1000)));
    }
}
