//! Disagreement between weak rankings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{AlternativeId, Error, Result, WeakRanking};

/// Nonnegative weight per alternative id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeWeights {
    w: Vec<f64>,
}

impl AlternativeWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some(x) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidParameter(format!("weight {x} is not a finite nonnegative number")));
        }
        Ok(AlternativeWeights { w })
    }

    pub fn unit(m: usize) -> Self {
        AlternativeWeights { w: vec![1.0; m] }
    }

    pub fn get(&self, a: AlternativeId) -> f64 {
        self.w[a.0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Shared ranked set of two rankings, sorted, plus their group levels.
fn common_domain(r1: &WeakRanking, r2: &WeakRanking) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let d1 = r1.alternatives();
    let d2 = r2.alternatives();
    if d1 != d2 {
        return Err(Error::DomainMismatch(format!(
            "rankings cover {} and {} alternatives with different members",
            d1.len(),
            d2.len()
        )));
    }
    let ids: Vec<usize> = d1.iter().map(|a| a.0).collect();
    let size = ids.last().map_or(0, |&x| x + 1);
    let l1 = r1.levels(size);
    let l2 = r2.levels(size);
    let lv1 = ids.iter().map(|&i| l1[i].expect("in domain")).collect();
    let lv2 = ids.iter().map(|&i| l2[i].expect("in domain")).collect();
    Ok((ids, lv1, lv2))
}

/// Per-pair cost: 1 for strict disagreement, 1/2 when tied in either ranking.
#[inline]
fn pair_cost(a1: usize, b1: usize, a2: usize, b2: usize) -> f64 {
    if a1 == b1 || a2 == b2 {
        0.5
    } else if (a1 < b1) != (a2 < b2) {
        1.0
    } else {
        0.0
    }
}

/// Kendall-Tau distance with the tie penalty.
pub fn kt_with_ties(r1: &WeakRanking, r2: &WeakRanking) -> Result<f64> {
    let (ids, lv1, lv2) = common_domain(r1, r2)?;
    let mut total = 0.0;
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            total += pair_cost(lv1[i], lv1[j], lv2[i], lv2[j]);
        }
    }
    Ok(total)
}

fn weighted_parts(r1: &WeakRanking, r2: &WeakRanking, w: &AlternativeWeights) -> Result<(f64, f64)> {
    let (ids, lv1, lv2) = common_domain(r1, r2)?;
    if let Some(&missing) = ids.iter().find(|&&i| i >= w.len()) {
        return Err(Error::DomainMismatch(format!("no weight for alternative {missing}")));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..ids.len() {
        let wi = w.w[ids[i]];
        for j in i + 1..ids.len() {
            let prod = wi * w.w[ids[j]];
            num += prod * pair_cost(lv1[i], lv1[j], lv2[i], lv2[j]);
            den += prod;
        }
    }
    Ok((num, den))
}

/// Kendall-Tau with each pair scaled by `w_a * w_b`.
pub fn weighted_kt(r1: &WeakRanking, r2: &WeakRanking, w: &AlternativeWeights) -> Result<f64> {
    weighted_parts(r1, r2, w).map(|(num, _)| num)
}

/// Sum of `w_a * w_b` over unordered pairs.
pub fn max_weighted_kt(w: &AlternativeWeights) -> f64 {
    let mut den = 0.0;
    for i in 0..w.w.len() {
        for j in i + 1..w.w.len() {
            den += w.w[i] * w.w[j];
        }
    }
    den
}

/// Weighted Kendall-Tau over its maximum; 0 when no pair carries weight.
///
/// The divisor is taken over the rankings' shared domain, which is all of
/// `w` whenever the rankings cover every weighted alternative.
pub fn normalized_disagreement(r1: &WeakRanking, r2: &WeakRanking, w: &AlternativeWeights) -> Result<f64> {
    let (num, den) = weighted_parts(r1, r2, w)?;
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// `|A Δ B| / |A ∪ B|`.
pub fn jaccard_dissimilarity(a: &BTreeSet<AlternativeId>, b: &BTreeSet<AlternativeId>) -> Result<f64> {
    let union = a.union(b).count();
    if union == 0 {
        return Err(Error::UndefinedForEmptySets);
    }
    let sym = a.symmetric_difference(b).count();
    Ok(sym as f64 / union as f64)
}

/// The `k` best alternatives; a tie-group straddling the cut keeps its smallest ids.
pub fn top_k(r: &WeakRanking, k: usize) -> BTreeSet<AlternativeId> {
    let mut out = BTreeSet::new();
    for g in r.groups() {
        if out.len() >= k {
            break;
        }
        let room = k - out.len();
        out.extend(g.iter().take(room).copied());
    }
    out
}
