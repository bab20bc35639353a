use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use rulepick::abc::{
    evaluate_rules, pick_aggregator, pick_rule, sampled_splits, DisagreementConfig, Estimation, Metric, Scale, Weighting,
};
use rulepick::axioms::{violation_rate, Axiom};
use rulepick::data::{
    emit_report, parse_medals_csv, parse_preflib, parse_scores_csv, read_instance_json, read_profile_json, sample_profile,
    write_instance_json, write_profile_json, DistributionKind, DistributionSpec, NamedProfile, PreflibFormat,
};
use rulepick::optimize::{anneal, vector_length, AnnealConfig};
use rulepick::perfpos::{
    decide_k_perfpos, decide_perfpos_with_limit, reduce_k_perfpos, verify_k_witness, verify_witness, PartialInstance,
    PerfPosInstance,
};
use rulepick::rules::{Rule, ScoreAggregator, ScoringVector};
use rulepick::Error;

use crate::args::*;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Pick(a) => pick(&a),
        Command::Eval(a) => eval(&a),
        Command::Anneal(a) => run_anneal(&a),
        Command::Axioms(a) => axioms(&a),
        Command::Perfpos(a) => perfpos(&a),
        Command::Generate(a) => generate(&a),
        Command::Scores(a) => scores(&a),
        Command::Convert(a) => convert(&a),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_profile(input: &ProfileInput) -> Result<NamedProfile> {
    let text = read_text(&input.input)?;
    let format = match input.format {
        InputFormat::Auto => match input.input.extension().and_then(|e| e.to_str()) {
            Some("soc") => InputFormat::Soc,
            Some("soi") => InputFormat::Soi,
            Some("toc") => InputFormat::Toc,
            Some("csv") => InputFormat::Medals,
            _ => InputFormat::Json,
        },
        f => f,
    };
    Ok(match format {
        InputFormat::Json | InputFormat::Auto => read_profile_json(&text)?,
        InputFormat::Soc => parse_preflib(&text, PreflibFormat::Soc)?,
        InputFormat::Soi => parse_preflib(&text, PreflibFormat::Soi)?,
        InputFormat::Toc => parse_preflib(&text, PreflibFormat::Toc)?,
        InputFormat::Medals => parse_medals_csv(&text)?,
    })
}

fn weighting(w: WeightingArg) -> Weighting {
    match w {
        WeightingArg::Auto => Weighting::Auto,
        WeightingArg::On => Weighting::On,
        WeightingArg::Off => Weighting::Off,
    }
}

fn disagreement_config(s: &SplitArgs, metric: Metric) -> DisagreementConfig {
    DisagreementConfig {
        weighting: weighting(s.weighting),
        gamma: s.gamma,
        scale: match s.scale {
            ScaleArg::Normalized => Scale::Normalized,
            ScaleArg::Raw => Scale::Raw,
        },
        skip_empty_splits: s.skip_empty_splits,
        metric,
    }
}

fn estimation(s: &SplitArgs) -> Estimation {
    if s.exact {
        Estimation::Exact
    } else {
        Estimation::Sampled {
            n_splits: s.splits,
            seed: s.seed,
        }
    }
}

/// CSV body preceded by a `#` line echoing the command's arguments.
fn csv_with_config<A: Serialize>(command: &str, args: &A, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let body = String::from_utf8(w.into_inner()?)?;
    let echo = serde_json::to_string(&json!({ "command": command, "args": args }))?;
    Ok(format!("# {echo}\n{body}"))
}

/// Rejoins `vector:a,b,c` entries that the comma delimiter split apart.
fn parse_rules(tokens: &[String]) -> Result<Vec<Rule>> {
    let mut names: Vec<String> = Vec::with_capacity(tokens.len());
    for t in tokens {
        match names.last_mut() {
            Some(last) if last.starts_with("vector:") && t.trim().parse::<f64>().is_ok() => {
                last.push(',');
                last.push_str(t);
            }
            _ => names.push(t.clone()),
        }
    }
    Ok(Rule::parse_list(&names)?)
}

fn pick(a: &PickArgs) -> Result<()> {
    let np = load_profile(&a.input)?;
    let rules = parse_rules(&a.rules)?;
    let cfg = disagreement_config(&a.splits, Metric::KendallTau);
    let result = pick_rule(&rules, &np.profile, estimation(&a.splits), &cfg, a.tie_epsilon)?;
    let out = json!({
        "command": "pick",
        "args": a,
        "chosen": result.chosen_rule().label,
        "argmin": result.argmin_labels(),
        "result": result,
    });
    write_output(None, &emit_report(&out)?)
}

fn eval(a: &EvalArgs) -> Result<()> {
    let np = load_profile(&a.input)?;
    let rules = parse_rules(&a.rules)?;
    let metric = match (a.metric, a.k) {
        (MetricArg::Kt, _) => Metric::KendallTau,
        (MetricArg::Jaccard, Some(k)) => Metric::Jaccard { k },
        (MetricArg::Jaccard, None) => return Err(Error::InvalidParameter("the jaccard metric needs --k".into()).into()),
    };
    let cfg = disagreement_config(&a.splits, metric);
    let report = evaluate_rules(&rules, &np.profile, estimation(&a.splits), &cfg)?;
    let rows: Vec<Vec<String>> = report
        .rules
        .iter()
        .map(|r| {
            vec![
                r.rule.label.clone(),
                r.mean.to_string(),
                r.sem.to_string(),
                report.splits.to_string(),
                r.skipped_splits.to_string(),
            ]
        })
        .collect();
    let text = csv_with_config("eval", a, &["rule", "mean", "sem", "splits", "skipped_splits"], &rows)?;
    write_output(None, &text)
}

fn run_anneal(a: &AnnealArgs) -> Result<()> {
    let np = load_profile(&a.input)?;
    let p = &np.profile;
    let len = vector_length(p);
    let starts = a
        .starts
        .iter()
        .map(|name| match Rule::parse(name)?.positional_scheme() {
            Some(scheme) => scheme.vector_for(len),
            None => Err(Error::InvalidParameter(format!("start `{name}` is not a positional rule"))),
        })
        .collect::<rulepick::Result<Vec<ScoringVector>>>()?;
    let mut cfg = AnnealConfig::new(starts, a.seed);
    cfg.steps = a.steps;
    let dcfg = DisagreementConfig {
        weighting: weighting(a.weighting),
        ..DisagreementConfig::default()
    };
    let splits = sampled_splits(p.n(), a.seed, a.splits);
    let result = anneal(p, &splits, &cfg, &dcfg)?;
    if let Some(path) = &a.trace {
        let rows: Vec<Vec<String>> = result
            .trace
            .iter()
            .map(|t| {
                vec![
                    t.chain.to_string(),
                    t.step.to_string(),
                    t.delta.map_or(String::new(), |d| d.to_string()),
                    t.accepted.to_string(),
                    t.best.to_string(),
                ]
            })
            .collect();
        let text = csv_with_config("anneal", a, &["chain", "step", "delta", "accepted", "best"], &rows)?;
        write_output(Some(path), &text)?;
    }
    let out = json!({
        "command": "anneal",
        "args": a,
        "vector": result.vector,
        "objective": result.objective,
        "chains": result.chains,
    });
    write_output(None, &emit_report(&out)?)
}

fn distribution(d: DistArg, phi: f64, alpha: Option<f64>) -> DistributionKind {
    match d {
        DistArg::Mallows => DistributionKind::Mallows { phi, center: None },
        DistArg::Pl => DistributionKind::PlackettLuce { alpha: None },
        DistArg::Ic => DistributionKind::ImpartialCulture,
        DistArg::Urn => DistributionKind::Urn { alpha },
        DistArg::SinglePeaked => DistributionKind::SinglePeaked,
    }
}

fn axiom(a: AxiomArg) -> Axiom {
    match a {
        AxiomArg::ReversalSymmetry => Axiom::ReversalSymmetry,
        AxiomArg::UnionConsistency => Axiom::UnionConsistency,
        AxiomArg::Monotonicity => Axiom::Monotonicity,
    }
}

fn value_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn axioms(a: &AxiomsArgs) -> Result<()> {
    let rules = parse_rules(&a.rules)?;
    let cfg = DisagreementConfig::default();
    let mut rows = Vec::new();
    for &ax in &a.axiom {
        for &src in &a.source {
            for &m in &a.m {
                let spec = DistributionSpec::new(distribution(src, rulepick::data::DEFAULT_MALLOWS_PHI, None), m, a.n);
                spec.validate()?;
                let source = |seed: u64| sample_profile(&spec, seed);
                let out = violation_rate(axiom(ax), source, &rules, a.profiles, a.splits, a.seed, &cfg)?;
                rows.push(vec![
                    out.axiom.name().to_string(),
                    value_name(&src),
                    m.to_string(),
                    a.n.to_string(),
                    a.profiles.to_string(),
                    out.instances.to_string(),
                    out.violations.to_string(),
                    out.rate.to_string(),
                ]);
            }
        }
    }
    let header = ["axiom", "source", "m", "n", "profiles", "instances", "violations", "rate"];
    write_output(None, &csv_with_config("axioms", a, &header, &rows)?)
}

fn perfpos(a: &PerfposArgs) -> Result<()> {
    let (np, split) = read_instance_json(&read_text(&a.instance)?)?;
    let full = np.profile.is_full();
    let out = match a.mode {
        PerfposMode::Decide => {
            let answer = if full {
                decide_perfpos_with_limit(&PerfPosInstance::new(np.profile, split)?, a.limit)?
            } else {
                decide_k_perfpos(&PartialInstance::new(np.profile, split)?, a.limit)?
            };
            json!({ "command": "perfpos", "args": a, "answer": answer })
        }
        PerfposMode::Verify => {
            let raw = a
                .witness
                .clone()
                .ok_or_else(|| Error::InvalidParameter("verify needs --witness".into()))?;
            let s = ScoringVector::new(raw)?;
            let valid = if full {
                verify_witness(&s, &PerfPosInstance::new(np.profile, split)?)
            } else {
                verify_k_witness(&s, &PartialInstance::new(np.profile, split)?)
            };
            json!({ "command": "perfpos", "args": a, "valid": valid })
        }
        PerfposMode::Reduce => {
            let names = np.names;
            let reduced = reduce_k_perfpos(&PartialInstance::new(np.profile, split)?)?;
            let np = NamedProfile {
                profile: reduced.profile().clone(),
                names,
            };
            let mut text = write_instance_json(&np, reduced.split())?;
            text.push('\n');
            return write_output(None, &text);
        }
    };
    write_output(None, &emit_report(&out)?)
}

fn generate(a: &GenerateArgs) -> Result<()> {
    let mut spec = DistributionSpec::new(distribution(a.dist, a.phi, a.alpha), a.m, a.n);
    if let (Some(len), Some(cov)) = (a.ballot_length, a.coverage) {
        spec = spec.with_partial(len, cov);
    }
    let p = sample_profile(&spec, a.seed)?;
    let mut text = write_profile_json(&NamedProfile::unnamed(p))?;
    text.push('\n');
    write_output(a.output.as_deref(), &text)
}

fn scores(a: &ScoresArgs) -> Result<()> {
    let table = parse_scores_csv(&read_text(&a.input)?, a.min_reviews)?;
    let aggs = a
        .aggregators
        .iter()
        .map(|s| ScoreAggregator::parse(s))
        .collect::<rulepick::Result<Vec<_>>>()?;
    let items: Vec<Vec<f64>> = table.into_values().collect();
    let result = pick_aggregator(&aggs, &items, a.trials, a.seed, a.tie_epsilon)?;
    let rows: Vec<Vec<String>> = result
        .aggregators
        .iter()
        .enumerate()
        .map(|(i, e)| {
            vec![
                e.aggregator.name().to_string(),
                e.mean.to_string(),
                e.sem.to_string(),
                result.argmin.contains(&i).to_string(),
                (i == result.chosen).to_string(),
            ]
        })
        .collect();
    let mut text = csv_with_config("scores", a, &["aggregator", "mean", "sem", "argmin", "chosen"], &rows)?;
    text.insert_str(0, &format!("# items: {}\n", result.items));
    write_output(None, &text)
}

fn convert(a: &ConvertArgs) -> Result<()> {
    let np = load_profile(&a.input)?;
    let mut text = write_profile_json(&np)?;
    text.push('\n');
    write_output(a.output.as_deref(), &text)
}
