//! PrefLib `soc`, `soi` and `toc` readers.
//!
//! Files carry `# KEY: value` header lines followed by `count: ranking`
//! lines. Alternatives are numbered from 1 in files and from 0 here.

use std::str::FromStr;

use super::NamedProfile;
use crate::{AlternativeId, Error, Profile, Result, StrictRanking, WeakRanking};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreflibFormat {
    /// Strict and complete.
    Soc,
    /// Strict and possibly incomplete.
    Soi,
    /// Complete with ties.
    Toc,
}

impl FromStr for PreflibFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "soc" => Ok(PreflibFormat::Soc),
            "soi" => Ok(PreflibFormat::Soi),
            "toc" => Ok(PreflibFormat::Toc),
            other => Err(Error::InvalidParameter(format!("unknown PrefLib format `{other}`"))),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Groups of a ranking body such as `{1,2},3`, converted to zero-based ids.
fn parse_groups(body: &str, m: usize, line: usize) -> Result<Vec<Vec<AlternativeId>>> {
    let id = |tok: &str| -> Result<AlternativeId> {
        let v: usize = tok.trim().parse().map_err(|_| parse_err(line, format!("bad alternative `{}`", tok.trim())))?;
        if v == 0 || v > m {
            return Err(parse_err(line, format!("unknown alternative {v}")));
        }
        Ok(AlternativeId(v - 1))
    };
    let mut groups = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        if let Some(inner) = rest.strip_prefix('{') {
            let close = inner.find('}').ok_or_else(|| parse_err(line, "unclosed `{`"))?;
            let group = inner[..close].split(',').map(id).collect::<Result<Vec<_>>>()?;
            groups.push(group);
            rest = inner[close + 1..].trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            groups.push(vec![id(&rest[..end])?]);
            rest = &rest[end..];
        }
        rest = match rest.strip_prefix(',') {
            Some(r) => r.trim_start(),
            None if rest.is_empty() => rest,
            None => return Err(parse_err(line, format!("expected `,` before `{rest}`"))),
        };
    }
    Ok(groups)
}

/// Reads ballots that may contain ties; each ballot is repeated by its count.
pub fn parse_preflib_weak(text: &str, format: PreflibFormat) -> Result<(Vec<String>, Vec<(usize, WeakRanking)>)> {
    let mut m: Option<usize> = None;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut ballots = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        if let Some(header) = raw.strip_prefix('#') {
            let Some((key, value)) = header.split_once(':') else {
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if key == "NUMBER ALTERNATIVES" {
                m = Some(value.parse().map_err(|_| parse_err(line, format!("bad alternative count `{value}`")))?);
            } else if let Some(idx) = key.strip_prefix("ALTERNATIVE NAME") {
                let idx: usize = idx.trim().parse().map_err(|_| parse_err(line, format!("bad alternative header `{key}`")))?;
                names.push((idx, value.to_string()));
            }
            continue;
        }
        let m = m.ok_or_else(|| parse_err(line, "ranking before `# NUMBER ALTERNATIVES` header"))?;
        let (count, body) = raw.split_once(':').ok_or_else(|| parse_err(line, "expected `count: ranking`"))?;
        let count: usize = count.trim().parse().map_err(|_| parse_err(line, format!("bad count `{}`", count.trim())))?;
        let groups = parse_groups(body, m, line)?;
        if format != PreflibFormat::Toc && groups.iter().any(|g| g.len() > 1) {
            return Err(Error::TieInStrictContext { line });
        }
        let ranking = WeakRanking::new(groups).map_err(|e| parse_err(line, e.to_string()))?;
        if format != PreflibFormat::Soi && ranking.alternatives().len() != m {
            return Err(parse_err(line, format!("ranking covers {} of {m} alternatives", ranking.alternatives().len())));
        }
        ballots.push((count, ranking));
    }
    let m = m.ok_or_else(|| parse_err(0, "missing `# NUMBER ALTERNATIVES` header"))?;
    let mut table: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
    for (idx, name) in names {
        if idx == 0 || idx > m {
            return Err(parse_err(0, format!("name for unknown alternative {idx}")));
        }
        table[idx - 1] = name;
    }
    Ok((table, ballots))
}

/// Reads a strict profile; a tie of two or more alternatives is an error.
pub fn parse_preflib(text: &str, format: PreflibFormat) -> Result<NamedProfile> {
    let (names, ballots) = parse_preflib_weak(text, format)?;
    let mut rankings = Vec::new();
    let mut line = 0;
    for (count, r) in ballots {
        line += 1;
        let strict: StrictRanking = r.to_strict().ok_or(Error::TieInStrictContext { line: data_line(text, line) })?;
        rankings.extend(std::iter::repeat(strict).take(count));
    }
    Ok(NamedProfile {
        profile: Profile::new(names.len(), rankings)?,
        names,
    })
}

/// File line of the `k`-th ranking line.
fn data_line(text: &str, k: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .nth(k - 1)
        .map_or(0, |(i, _)| i + 1)
}
