//! Aggregators for numeric review scores.

use serde::{Deserialize, Serialize};

use crate::{AlternativeId, Error, Result, WeakRanking};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreAggregator {
    Mean,
    Min,
    Max,
    Median,
    GeometricMean,
    TrimmedMean,
}

impl ScoreAggregator {
    pub const ALL: [ScoreAggregator; 6] = [
        ScoreAggregator::Mean,
        ScoreAggregator::Min,
        ScoreAggregator::Max,
        ScoreAggregator::Median,
        ScoreAggregator::GeometricMean,
        ScoreAggregator::TrimmedMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScoreAggregator::Mean => "mean",
            ScoreAggregator::Min => "min",
            ScoreAggregator::Max => "max",
            ScoreAggregator::Median => "median",
            ScoreAggregator::GeometricMean => "geometric_mean",
            ScoreAggregator::TrimmedMean => "trimmed_mean",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownAggregator(name.to_string()))
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn aggregate_scores(agg: ScoreAggregator, xs: &[f64]) -> Result<f64> {
    let fail = |reason: &str| Error::Aggregator {
        aggregator: agg.name(),
        reason: reason.to_string(),
    };
    if xs.is_empty() {
        return Err(fail("no scores"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(fail("non-finite score"));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(match agg {
        ScoreAggregator::Mean => mean(xs),
        ScoreAggregator::Min => sorted[0],
        ScoreAggregator::Max => sorted[n - 1],
        ScoreAggregator::Median if n % 2 == 1 => sorted[n / 2],
        ScoreAggregator::Median => (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0,
        ScoreAggregator::GeometricMean => {
            if sorted[0] <= 0.0 {
                return Err(fail("requires positive scores"));
            }
            (xs.iter().map(|x| x.ln()).sum::<f64>() / n as f64).exp()
        }
        ScoreAggregator::TrimmedMean => {
            if n < 3 {
                return Err(fail("requires at least three scores"));
            }
            mean(&sorted[1..n - 1])
        }
    })
}

/// Decreasing score order; exactly equal scores share a tie-group.
pub fn scores_to_ranking(scores: &[f64]) -> WeakRanking {
    let mut ids: Vec<usize> = (0..scores.len()).collect();
    ids.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<AlternativeId>> = Vec::new();
    let mut prev: Option<f64> = None;
    for i in ids {
        if prev == Some(scores[i]) {
            groups.last_mut().expect("group exists").push(AlternativeId(i));
        } else {
            groups.push(vec![AlternativeId(i)]);
        }
        prev = Some(scores[i]);
    }
    WeakRanking::new(groups).expect("distinct ids")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ScoreAggregator::*;

    #[test]
    fn aggregate_examples() {
        assert_eq!(aggregate_scores(Mean, &[2.0, 4.0]).unwrap(), 3.0);
        assert_eq!(aggregate_scores(TrimmedMean, &[1.0, 2.0, 3.0, 100.0]).unwrap(), 2.5);
        assert_eq!(aggregate_scores(GeometricMean, &[1.0, 4.0]).unwrap(), 2.0);
        assert_eq!(aggregate_scores(Median, &[5.0, 1.0, 3.0]).unwrap(), 3.0);
        assert_eq!(aggregate_scores(Median, &[4.0, 1.0, 3.0, 2.0]).unwrap(), 2.5);
        assert_eq!(aggregate_scores(Min, &[4.0, 1.0]).unwrap(), 1.0);
        assert_eq!(aggregate_scores(Max, &[4.0, 1.0]).unwrap(), 4.0);
    }

    #[test]
    fn aggregate_preconditions() {
        assert!(aggregate_scores(Mean, &[]).is_err());
        assert!(aggregate_scores(GeometricMean, &[0.0, 2.0]).is_err());
        assert!(aggregate_scores(TrimmedMean, &[1.0, 2.0]).is_err());
        assert!(matches!(ScoreAggregator::parse("mode"), Err(Error::UnknownAggregator(_))));
    }

    #[test]
    fn ranking_examples() {
        assert_eq!(scores_to_ranking(&[3.0, 1.0]), WeakRanking::from_indices(&[&[0], &[1]]).unwrap());
        assert_eq!(scores_to_ranking(&[2.0, 2.0]), WeakRanking::from_indices(&[&[0, 1]]).unwrap());
        assert_eq!(
            scores_to_ranking(&[1.0, 2.0, 2.0]),
            WeakRanking::from_indices(&[&[1, 2], &[0]]).unwrap()
        );
    }
}
