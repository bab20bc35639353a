//! Candidate rules: social welfare functions and score aggregators.

pub mod irv;
pub mod kemeny;
pub mod plackett_luce;
pub mod positional;
pub mod scores;
pub mod trimmed_borda;

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use irv::irv;
pub use kemeny::{kemeny, kemeny_with_threshold};
pub use plackett_luce::pl_mle;
pub use positional::{apply_positional, named_vector, NamedVector, PositionalScheme, ScoringVector};
pub use scores::{aggregate_scores, scores_to_ranking, ScoreAggregator};
pub use trimmed_borda::trimmed_borda;

use crate::{Error, Profile, Result, WeakRanking};

pub const DEFAULT_KEMENY_BUDGET_SECS: f64 = 10.0;

/// Rule variant and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RuleKind {
    Positional { scheme: PositionalScheme },
    Kemeny { time_budget_secs: f64, exact_threshold: usize },
    PlackettLuce { tolerance: f64, max_iterations: usize },
    Irv,
    TrimmedBorda,
}

/// A labelled social welfare function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub label: String,
    pub kind: RuleKind,
}

impl Rule {
    pub fn new(label: impl Into<String>, kind: RuleKind) -> Result<Self> {
        match &kind {
            RuleKind::Kemeny { time_budget_secs, .. } if !(*time_budget_secs > 0.0 && time_budget_secs.is_finite()) => {
                return Err(Error::InvalidParameter("Kemeny time budget must be positive".into()))
            }
            RuleKind::PlackettLuce { tolerance, .. } if !(*tolerance > 0.0) => {
                return Err(Error::InvalidParameter("Plackett-Luce tolerance must be positive".into()))
            }
            _ => {}
        }
        Ok(Rule {
            label: label.into(),
            kind,
        })
    }

    pub fn named(v: NamedVector) -> Self {
        Rule {
            label: v.name().to_string(),
            kind: RuleKind::Positional {
                scheme: PositionalScheme::Named(v),
            },
        }
    }

    pub fn vector(s: ScoringVector) -> Self {
        let label = format!(
            "vector:{}",
            s.values().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        );
        Rule {
            label,
            kind: RuleKind::Positional {
                scheme: PositionalScheme::Custom(s),
            },
        }
    }

    pub fn kemeny() -> Self {
        Rule {
            label: "kemeny".into(),
            kind: RuleKind::Kemeny {
                time_budget_secs: DEFAULT_KEMENY_BUDGET_SECS,
                exact_threshold: kemeny::DEFAULT_EXACT_THRESHOLD,
            },
        }
    }

    pub fn pl_mle() -> Self {
        Rule {
            label: "pl_mle".into(),
            kind: RuleKind::PlackettLuce {
                tolerance: plackett_luce::DEFAULT_TOLERANCE,
                max_iterations: plackett_luce::DEFAULT_MAX_ITERATIONS,
            },
        }
    }

    pub fn irv() -> Self {
        Rule {
            label: "irv".into(),
            kind: RuleKind::Irv,
        }
    }

    pub fn trimmed_borda() -> Self {
        Rule {
            label: "trimmed_borda".into(),
            kind: RuleKind::TrimmedBorda,
        }
    }

    /// Parses a rule name: a named vector, `kemeny`, `pl_mle`, `irv`,
    /// `trimmed_borda`, or `vector:x1,x2,...`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(body) = name.strip_prefix("vector:") {
            let raw = body
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidScoringVector(format!("{body}: {e}")))?;
            return Ok(Rule::vector(ScoringVector::new(raw)?));
        }
        match name {
            "kemeny" => Ok(Rule::kemeny()),
            "pl_mle" => Ok(Rule::pl_mle()),
            "irv" => Ok(Rule::irv()),
            "trimmed_borda" => Ok(Rule::trimmed_borda()),
            _ => NamedVector::parse(name).map(Rule::named),
        }
    }

    /// Parses every name in `names`.
    pub fn parse_list<S: AsRef<str>>(names: &[S]) -> Result<Vec<Self>> {
        names.iter().map(|n| Rule::parse(n.as_ref())).collect()
    }

    pub fn positional_scheme(&self) -> Option<&PositionalScheme> {
        match &self.kind {
            RuleKind::Positional { scheme } => Some(scheme),
            _ => None,
        }
    }

    /// Applies the rule; a profile without voters yields the all-tied ranking.
    pub fn apply(&self, p: &Profile) -> Result<WeakRanking> {
        if p.n() == 0 {
            return Ok(WeakRanking::empty(p.m()));
        }
        match &self.kind {
            RuleKind::Positional { scheme } => scheme.apply(p),
            RuleKind::Kemeny {
                time_budget_secs,
                exact_threshold,
            } => Ok(kemeny_with_threshold(
                p,
                Duration::from_secs_f64(*time_budget_secs),
                *exact_threshold,
            )),
            RuleKind::PlackettLuce {
                tolerance,
                max_iterations,
            } => pl_mle(p, *tolerance, *max_iterations),
            RuleKind::Irv => irv(p),
            RuleKind::TrimmedBorda => Ok(trimmed_borda(p)),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}
