//! Witness ladders showing that continuous entropies are infinite.

use lossinfo::continuous::{demonstrate_entropy_divergence, WitnessFamily};
use lossinfo::ExtendedReal;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::report::{sha256_hex, table, Engine, Num, ENGINE};

pub const DEFAULT_LADDER: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub engine: Engine,
    pub input_sha256: String,
    pub command: &'static str,
    pub ladders: Vec<Ladder>,
}

#[derive(Debug, Serialize)]
pub struct Ladder {
    pub family: &'static str,
    pub entropy: Num,
    pub points: Vec<Point>,
    pub strictly_decreasing: bool,
    /// Smallest listed `n` from which the bounds decrease strictly to the
    /// end of the ladder.
    pub decreasing_from: f64,
}

#[derive(Debug, Serialize)]
pub struct Point {
    pub n: f64,
    pub risk_upper_bound: f64,
}

pub fn parse_family(s: &str) -> CliResult<WitnessFamily> {
    s.parse().map_err(|_| {
        CliError::schema(format!(
            "--family: unknown family `{s}` (expected gaussian_logloss or shifted_gaussian_hyvarinen)"
        ))
    })
}

pub fn run(families: &[WitnessFamily], n_values: &[f64]) -> CliResult<WitnessReport> {
    if n_values.is_empty() {
        return Err(CliError::schema("--n: the ladder needs at least one index"));
    }
    if let Some(bad) = n_values.iter().find(|n| !(n.is_finite() && **n > 0.0)) {
        return Err(CliError::schema(format!(
            "--n: {bad} is not a positive number"
        )));
    }
    if n_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::schema("--n: indices must be strictly ascending"));
    }
    let mut ladders = Vec::new();
    for &family in families {
        let points = demonstrate_entropy_divergence(family, n_values, None)?;
        let mut start = points.len() - 1;
        while start > 0 && points[start].risk_upper_bound < points[start - 1].risk_upper_bound {
            start -= 1;
        }
        ladders.push(Ladder {
            family: family.name(),
            entropy: Num(ExtendedReal::PosInf),
            strictly_decreasing: start == 0,
            decreasing_from: points[start].n,
            points: points
                .iter()
                .map(|p| Point {
                    n: p.n,
                    risk_upper_bound: p.risk_upper_bound + 0.0,
                })
                .collect(),
        });
    }
    let names: Vec<&str> = families.iter().map(|f| f.name()).collect();
    let key = format!("families={};n={n_values:?}", names.join(","));
    Ok(WitnessReport {
        engine: ENGINE,
        input_sha256: sha256_hex(key.as_bytes()),
        command: "witness",
        ladders,
    })
}

pub fn render_table(report: &WitnessReport) -> String {
    let mut out = String::new();
    for l in &report.ladders {
        let rows: Vec<Vec<String>> = l
            .points
            .iter()
            .map(|p| vec![p.n.to_string(), p.risk_upper_bound.to_string()])
            .collect();
        out.push_str(&format!("{} (entropy {})\n", l.family, l.entropy));
        out.push_str(&table(&["n", "risk_upper_bound"], &rows));
        out.push_str(&format!(
            "strictly decreasing from n = {}\n\n",
            l.decreasing_from
        ));
    }
    out
}
