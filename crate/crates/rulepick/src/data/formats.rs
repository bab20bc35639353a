//! Profile and instance JSON, score and medal CSVs, and report output.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::NamedProfile;
use crate::abc::{Side, Split};
use crate::{AlternativeId, Error, Profile, Result, StrictRanking};

#[derive(Debug, Serialize, Deserialize)]
struct ProfileJson {
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    ballots: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sides: Option<Vec<u8>>,
}

fn from_json(doc: &ProfileJson) -> Result<NamedProfile> {
    let profile = Profile::from_orders(doc.m, &doc.ballots)?;
    let names = match &doc.names {
        Some(n) if n.len() != doc.m => {
            return Err(Error::Json(format!("{} names for {} alternatives", n.len(), doc.m)));
        }
        Some(n) => n.clone(),
        None => return Ok(NamedProfile::unnamed(profile)),
    };
    Ok(NamedProfile { profile, names })
}

fn to_json(np: &NamedProfile, sides: Option<Vec<u8>>) -> ProfileJson {
    ProfileJson {
        m: np.profile.m(),
        names: Some(np.names.clone()),
        ballots: np
            .profile
            .rankings()
            .iter()
            .map(|r| r.order().iter().map(|a| a.0).collect())
            .collect(),
        sides,
    }
}

/// Reads `{"m": .., "names": [..], "ballots": [[ids..], ..]}`; names are optional.
pub fn read_profile_json(text: &str) -> Result<NamedProfile> {
    from_json(&serde_json::from_str(text)?)
}

pub fn write_profile_json(np: &NamedProfile) -> Result<String> {
    Ok(serde_json::to_string(&to_json(np, None))?)
}

/// Reads a profile with a `"sides"` array of 1s and 2s, one per ballot.
pub fn read_instance_json(text: &str) -> Result<(NamedProfile, Split)> {
    let doc: ProfileJson = serde_json::from_str(text)?;
    let np = from_json(&doc)?;
    let raw = doc.sides.ok_or_else(|| Error::Json("missing `sides`".into()))?;
    if raw.len() != np.profile.n() {
        return Err(Error::Json(format!("{} sides for {} ballots", raw.len(), np.profile.n())));
    }
    let sides = raw
        .iter()
        .map(|&s| match s {
            1 => Ok(Side::One),
            2 => Ok(Side::Two),
            other => Err(Error::Json(format!("side {other} is not 1 or 2"))),
        })
        .collect::<Result<_>>()?;
    Ok((np, Split::new(sides)))
}

pub fn write_instance_json(np: &NamedProfile, split: &Split) -> Result<String> {
    let sides = split.sides().iter().map(|&s| if s == Side::One { 1 } else { 2 }).collect();
    Ok(serde_json::to_string(&to_json(np, Some(sides)))?)
}

/// Review scores per item id.
pub type ScoreTable = BTreeMap<String, Vec<f64>>;

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn record_line(rec: &csv::StringRecord, fallback: usize) -> usize {
    rec.position().map_or(fallback, |p| p.line() as usize)
}

/// Reads `item, reviewer, score` rows, with an optional header row, and
/// drops items with fewer than `min_reviews` scores.
pub fn parse_scores_csv(text: &str, min_reviews: usize) -> Result<ScoreTable> {
    let mut table = ScoreTable::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for (i, rec) in csv_reader(text).records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        let line = record_line(&rec, i + 1);
        if rec.len() != 3 {
            return Err(Error::Parse { line, msg: format!("expected 3 fields, found {}", rec.len()) });
        }
        let score = match rec[2].parse::<f64>() {
            Ok(x) if x.is_finite() => x,
            _ if i == 0 => continue,
            _ => return Err(Error::Parse { line, msg: format!("non-numeric score `{}`", &rec[2]) }),
        };
        if !seen.insert((rec[0].to_string(), rec[1].to_string())) {
            return Err(Error::Parse { line, msg: format!("reviewer `{}` scored item `{}` twice", &rec[1], &rec[0]) });
        }
        table.entry(rec[0].to_string()).or_default().push(score);
    }
    table.retain(|_, scores| scores.len() >= min_reviews);
    Ok(table)
}

/// Reads `event, rank, country` rows into one ballot per event, countries
/// ordered by rank. Countries are numbered in name order.
pub fn parse_medals_csv(text: &str) -> Result<NamedProfile> {
    let mut events: BTreeMap<String, Vec<(u32, String, usize)>> = BTreeMap::new();
    for (i, rec) in csv_reader(text).records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        let line = record_line(&rec, i + 1);
        if rec.len() != 3 {
            return Err(Error::Parse { line, msg: format!("expected 3 fields, found {}", rec.len()) });
        }
        let rank = match rec[1].parse::<u32>() {
            Ok(r) => r,
            Err(_) if i == 0 => continue,
            Err(_) => return Err(Error::Parse { line, msg: format!("bad rank `{}`", &rec[1]) }),
        };
        events.entry(rec[0].to_string()).or_default().push((rank, rec[2].to_string(), line));
    }
    let names: Vec<String> = events
        .values()
        .flatten()
        .map(|(_, c, _)| c.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rankings = Vec::with_capacity(events.len());
    for mut rows in events.into_values() {
        rows.sort_by_key(|(r, _, _)| *r);
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::TieInStrictContext { line: w[1].2 });
        }
        let order = rows
            .iter()
            .map(|(_, c, _)| AlternativeId(names.binary_search(c).expect("collected above")))
            .collect();
        rankings.push(StrictRanking::new(order).map_err(|e| Error::Parse { line: rows[0].2, msg: e.to_string() })?);
    }
    Ok(NamedProfile {
        profile: Profile::new(names.len(), rankings)?,
        names,
    })
}

/// Pretty JSON in field declaration order with shortest round-trip floats.
pub fn emit_report<T: Serialize>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::{evaluate_rules, pick_rule, DisagreementConfig, DisagreementReport, Estimation};
    use crate::axioms::AxiomOutcome;
    use crate::rules::Rule;

    fn sample() -> NamedProfile {
        NamedProfile {
            profile: Profile::from_orders(3, &[vec![0, 1, 2], vec![2, 0], vec![1, 2, 0]]).unwrap(),
            names: vec!["x".into(), "y".into(), "z".into()],
        }
    }

    #[test]
    fn profile_json_round_trip() {
        let np = sample();
        let text = write_profile_json(&np).unwrap();
        assert_eq!(read_profile_json(&text).unwrap(), np);
        let bare = read_profile_json(r#"{"m": 2, "ballots": [[1, 0]]}"#).unwrap();
        assert_eq!(bare.names, vec!["0", "1"]);
        assert!(read_profile_json(r#"{"m": 2, "names": ["a"], "ballots": []}"#).is_err());
        assert!(read_profile_json(r#"{"m": 2, "ballots": [[0, 2]]}"#).is_err());
    }

    #[test]
    fn instance_json_round_trip() {
        let np = sample();
        let split = Split::new(vec![Side::One, Side::Two, Side::One]);
        let text = write_instance_json(&np, &split).unwrap();
        assert!(text.contains(r#""sides":[1,2,1]"#));
        assert_eq!(read_instance_json(&text).unwrap(), (np, split));
        assert!(read_instance_json(r#"{"m": 2, "ballots": [[0, 1]]}"#).is_err());
        assert!(read_instance_json(r#"{"m": 2, "ballots": [[0, 1]], "sides": [3]}"#).is_err());
    }

    #[test]
    fn scores_csv_examples() {
        let t = parse_scores_csv("item,reviewer,score\np1,r1,3\np1,r2,4.5\np1,r3,1\n", 0).unwrap();
        assert_eq!(t["p1"], vec![3.0, 4.5, 1.0]);
        let five = (0..5).map(|r| format!("p2,r{r},2\n")).collect::<String>();
        let six = (0..6).map(|r| format!("p3,r{r},2\n")).collect::<String>();
        let t = parse_scores_csv(&(five + &six), 6).unwrap();
        assert_eq!(t.keys().collect::<Vec<_>>(), vec!["p3"]);
        assert!(parse_scores_csv("", 0).unwrap().is_empty());
        assert!(matches!(parse_scores_csv("p1,r1,3\np1,r1,4\n", 0), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_scores_csv("p1,r1,3\np1,r2,good\n", 0), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn medals_csv_examples() {
        let np = parse_medals_csv("event,rank,country\n100m,2,USA\n100m,1,JAM\n100m,3,CAN\nrelay,1,USA\nrelay,2,JAM\n").unwrap();
        assert_eq!(np.names, vec!["CAN", "JAM", "USA"]);
        let orders: Vec<Vec<usize>> = np.profile.rankings().iter().map(|r| r.order().iter().map(|a| a.0).collect()).collect();
        assert_eq!(orders, vec![vec![1, 2, 0], vec![2, 1]]);
        assert_eq!(parse_medals_csv("e,3,A\ne,3,B\n"), Err(Error::TieInStrictContext { line: 2 }));
    }

    #[test]
    fn reports_round_trip_and_repeat() {
        let p = crate::fixtures::three_groups(2);
        let rules = Rule::parse_list(&["plurality", "veto", "borda"]).unwrap();
        let est = Estimation::Sampled { n_splits: 8, seed: 42 };
        let report = evaluate_rules(&rules, &p, est, &DisagreementConfig::default()).unwrap();
        let text = emit_report(&report).unwrap();
        let back: DisagreementReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        let again = evaluate_rules(&rules, &p, est, &DisagreementConfig::default()).unwrap();
        assert_eq!(emit_report(&again).unwrap(), text);
        for estimate in &back.rules {
            assert_eq!(estimate.values.len(), 8);
            let (mean, _) = crate::numeric::mean_sem(&estimate.values);
            assert_eq!(mean, estimate.mean);
        }
        assert!(text.contains("\"seed\": 42"));
        let pick = pick_rule(&rules, &p, est, &DisagreementConfig::default(), 0.0).unwrap();
        assert!(emit_report(&pick).unwrap().contains("\"argmin\""));
        let outcome = AxiomOutcome {
            axiom: crate::axioms::Axiom::Monotonicity,
            instances: 3,
            violations: 1,
            rate: 1.0 / 3.0,
        };
        let back: AxiomOutcome = serde_json::from_str(&emit_report(&outcome).unwrap()).unwrap();
        assert_eq!(back, outcome);
    }
}
