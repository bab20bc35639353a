//! Plackett-Luce maximum likelihood by minorize-maximize iterations.
//!
//! A partial ballot is read as a full ranking of the alternatives it lists.
//! Each alternative also plays a virtual win and a virtual loss of weight
//! `PRIOR` against a fixed reference of strength 1, which keeps the
//! estimate finite when the comparison graph is disconnected.

use crate::{AlternativeId, Error, Profile, Result, WeakRanking};

pub const PRIOR: f64 = 1e-6;
pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_MAX_ITERATIONS: usize = 20_000;

/// Fitted strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct PlFit {
    pub strengths: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Win counts and MM denominators at strengths `gamma`.
fn wins_and_denominators(p: &Profile, gamma: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = p.m();
    let mut wins = vec![0.0; m];
    let mut den = vec![0.0; m];
    let mut suffix = Vec::new();
    for r in p.rankings() {
        let o = r.order();
        if o.len() < 2 {
            continue;
        }
        suffix.clear();
        suffix.resize(o.len(), 0.0);
        let mut acc = 0.0;
        for i in (0..o.len()).rev() {
            acc += gamma[o[i].0];
            suffix[i] = acc;
        }
        let mut recip = 0.0;
        for (i, a) in o.iter().enumerate() {
            if i + 1 < o.len() {
                wins[a.0] += 1.0;
                recip += 1.0 / suffix[i];
            }
            den[a.0] += recip;
        }
    }
    (wins, den)
}

/// Gradient of the penalized log-likelihood with respect to log-strengths.
pub fn pl_gradient(p: &Profile, gamma: &[f64]) -> Vec<f64> {
    let (wins, den) = wins_and_denominators(p, gamma);
    (0..p.m())
        .map(|a| wins[a] + PRIOR - gamma[a] * (den[a] + 2.0 * PRIOR / (gamma[a] + 1.0)))
        .collect()
}

/// Penalized log-likelihood at strengths `gamma`.
pub fn pl_log_likelihood(p: &Profile, gamma: &[f64]) -> f64 {
    let mut ll = 0.0;
    for r in p.rankings() {
        let o = r.order();
        for i in 0..o.len().saturating_sub(1) {
            let denom: f64 = o[i..].iter().map(|a| gamma[a.0]).sum();
            ll += (gamma[o[i].0] / denom).ln();
        }
    }
    for &g in gamma {
        ll += PRIOR * ((g / (g + 1.0)).ln() + (1.0 / (g + 1.0)).ln());
    }
    ll
}

/// Fits strengths until every gradient component is within `tolerance`.
pub fn pl_fit(p: &Profile, tolerance: f64, max_iterations: usize) -> Result<PlFit> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let m = p.m();
    let mut gamma = vec![1.0; m];
    for it in 0..max_iterations {
        let (wins, den) = wins_and_denominators(p, &gamma);
        let mut worst: f64 = 0.0;
        let next: Vec<f64> = (0..m)
            .map(|a| {
                let d = den[a] + 2.0 * PRIOR / (gamma[a] + 1.0);
                worst = worst.max((wins[a] + PRIOR - gamma[a] * d).abs());
                (wins[a] + PRIOR) / d
            })
            .collect();
        if worst <= tolerance {
            return Ok(PlFit {
                strengths: gamma,
                iterations: it,
                converged: true,
            });
        }
        gamma = next;
    }
    let converged = pl_gradient(p, &gamma).iter().all(|g| g.abs() <= tolerance);
    Ok(PlFit {
        strengths: gamma,
        iterations: max_iterations,
        converged,
    })
}

/// Ranks alternatives by fitted strength; log-strengths within `tolerance` tie.
pub fn pl_mle(p: &Profile, tolerance: f64, max_iterations: usize) -> Result<WeakRanking> {
    if p.n() == 0 {
        return Err(Error::Precondition("profile has no voters".into()));
    }
    let fit = pl_fit(p, tolerance, max_iterations)?;
    if !fit.converged {
        log::warn!("Plackett-Luce fit stopped after {max_iterations} iterations");
    }
    let theta: Vec<f64> = fit.strengths.iter().map(|g| g.ln()).collect();
    let mut ids: Vec<usize> = (0..p.m()).collect();
    ids.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<AlternativeId>> = Vec::new();
    let mut prev = f64::INFINITY;
    for a in ids {
        if prev - theta[a] <= tolerance {
            groups.last_mut().expect("group exists").push(AlternativeId(a));
        } else {
            groups.push(vec![AlternativeId(a)]);
        }
        prev = theta[a];
    }
    WeakRanking::new(groups)
}
