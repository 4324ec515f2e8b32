//! Identity suites run against every query of a scenario.

use std::fmt;
use std::str::FromStr;

use lossinfo::{
    belief_decomposition, check_pythagoras, check_telescope, entropy, information, lattice_sweep,
    LossModel, Partition, RandomElement, WeightedStates,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::report::{table, Engine, Num, ENGINE};
use crate::scenario::{Query, Scenario};

/// Every residual must stay below this.
pub const TOLERANCE: f64 = 1e-9;

/// Largest atom count the lattice suite will enumerate.
pub const MAX_LATTICE_ATOMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// `prop1`: ordering properties over the whole partition lattice.
    Lattice,
    Telescope,
    Pythagoras,
    Bridge,
    Belief,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Ok(match s {
            "prop1" => Suite::Lattice,
            "telescope" => Suite::Telescope,
            "pythagoras" => Suite::Pythagoras,
            "bridge" => Suite::Bridge,
            "belief" => Suite::Belief,
            _ => {
                return Err(format!(
                    "unknown suite `{s}` (expected prop1, telescope, pythagoras, bridge or belief)"
                ))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lattice => "prop1",
            Suite::Telescope => "telescope",
            Suite::Pythagoras => "pythagoras",
            Suite::Bridge => "bridge",
            Suite::Belief => "belief",
        })
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub engine: Engine,
    pub input_sha256: String,
    pub command: &'static str,
    pub suite: String,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub query: usize,
    pub check: String,
    pub residual: Num,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub query: usize,
    pub reason: String,
}

struct Collector {
    query: usize,
    checks: Vec<CheckResult>,
}

impl Collector {
    fn push(&mut self, check: impl Into<String>, residual: f64) {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        self.checks.push(CheckResult {
            query: self.query,
            check: check.into(),
            residual: Num::finite(residual),
            passed: residual < TOLERANCE,
        });
    }
}

fn lattice_checks(s: &Scenario, q: &Query, out: &mut Collector) -> lossinfo::Result<()> {
    let (x, loss) = s.target(q.target, q.loss)?;
    let summary = lattice_sweep(&s.space, &x, &loss)?.summary()?;
    out.push(
        "refinement_monotonicity",
        (-summary.min_refinement_gap).max(0.0),
    );
    out.push("element_maximality", (-summary.min_maximality_gap).max(0.0));
    out.push(
        "nonnegativity",
        (-summary.min_information.min(summary.entropy)).max(0.0),
    );
    out.push("refinement_plateau", summary.max_plateau_deviation);
    Ok(())
}

fn telescope(s: &Scenario, q: &Query, out: &mut Collector) -> lossinfo::Result<()> {
    let (x, loss) = s.target(q.target, q.loss)?;
    let mid = s.partition(&q.given)?;
    out.push("telescope", check_telescope(&s.space, &x, &loss, &mid)?);
    Ok(())
}

/// `½(𝔼[X|σ] + 𝔼[X])`, which is σ-measurable and stays inside any convex
/// domain containing the values of `X`. Null blocks take `𝔼[X]`.
fn measurable_comparison(s: &Scenario, x: &RandomElement, p: &Partition) -> Vec<Vec<f64>> {
    let width = x.value(0).len();
    let mean_over = |atoms: &[usize]| -> Option<Vec<f64>> {
        let mass = s.space.mass(atoms);
        (mass > 0.0).then(|| {
            (0..width)
                .map(|d| {
                    atoms
                        .iter()
                        .map(|&a| s.space.probability(a) * x.value(a)[d])
                        .sum::<f64>()
                        / mass
                })
                .collect()
        })
    };
    let all: Vec<usize> = (0..s.atom_count()).collect();
    let global = mean_over(&all).expect("the space has positive mass");
    let mut y = vec![Vec::new(); s.atom_count()];
    for block in p.blocks() {
        let value = match mean_over(block) {
            Some(m) => m.iter().zip(&global).map(|(a, b)| 0.5 * (a + b)).collect(),
            None => global.clone(),
        };
        for &a in block {
            y[a] = value.clone();
        }
    }
    y
}

fn pythagoras(s: &Scenario, q: &Query, out: &mut Collector) -> lossinfo::Result<bool> {
    let Some(generator) = q.loss.generator() else {
        return Ok(false);
    };
    let states = s.symbol_states(q.target, q.loss);
    let x = RandomElement::real(
        s.symbols(q.target)
            .iter()
            .map(|&t| states[t].clone())
            .collect(),
    )?;
    let p = s.partition(&q.given)?;
    let y = RandomElement::real(measurable_comparison(s, &x, &p))?;
    let phi = generator.boxed();
    out.push(
        format!("pythagoras[{}]", phi.name()),
        check_pythagoras(&s.space, &x, phi.as_ref(), &p, &y)?,
    );
    Ok(true)
}

fn bridge(s: &Scenario, q: &Query, out: &mut Collector) -> lossinfo::Result<()> {
    let k = s.dims[q.target];
    let z = s.partition(&q.given)?;
    let symbols = s.symbols(q.target);
    let rows: Vec<Vec<f64>> = z
        .blocks()
        .iter()
        .map(|block| {
            let mass = s.space.mass(block);
            let mut row = vec![0.0; k];
            if mass == 0.0 {
                return vec![1.0 / k as f64; k];
            }
            for &a in block {
                row[symbols[a]] += s.space.probability(a);
            }
            row.iter().map(|v| v / mass).collect()
        })
        .collect();
    let labels = z.labels();
    let conditional_law = RandomElement::distributions(
        (0..s.atom_count())
            .map(|a| rows[labels[a]].clone())
            .collect(),
    )?;
    let h_kl = entropy(&s.space, &conditional_law, &LossModel::kl(k))?.value;
    let y = RandomElement::symbols(k, &symbols)?;
    let i_s = information(&s.space, &y, &LossModel::log_loss(k), &z)?.value;
    let residual = match (h_kl.finite(), i_s.finite()) {
        (Some(a), Some(b)) => (a - b).abs(),
        _ => f64::INFINITY,
    };
    out.push("kl_entropy_vs_log_information", residual);
    Ok(())
}

fn belief(s: &Scenario, q: &Query, seed: u64, out: &mut Collector) -> lossinfo::Result<()> {
    let (x, loss) = s.target(q.target, q.loss)?;
    let states = s.symbol_states(q.target, q.loss);
    let k = states.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.target as u64);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let beliefs = [
        ("uniform", vec![1.0 / k as f64; k]),
        ("seeded", raw.iter().map(|v| v / total).collect()),
    ];
    for (label, q_weights) in beliefs {
        let belief = WeightedStates::new(states.clone(), q_weights)?;
        let d = belief_decomposition(&s.space, &x, &loss, &belief)?;
        out.push(format!("belief[{label}]"), d.residual()?);
    }
    Ok(())
}

pub fn run(
    scenario: &Scenario,
    suite: Suite,
    seed: u64,
    digest: String,
) -> CliResult<VerifyReport> {
    if suite == Suite::Lattice && scenario.atom_count() > MAX_LATTICE_ATOMS {
        return Err(CliError::schema(format!(
            "--suite prop1: the scenario has {} atoms; the lattice sweep supports at most {MAX_LATTICE_ATOMS}",
            scenario.atom_count()
        )));
    }
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for (index, q) in scenario.queries.iter().enumerate() {
        let mut out = Collector {
            query: index,
            checks: Vec::new(),
        };
        match suite {
            Suite::Lattice => lattice_checks(scenario, q, &mut out)?,
            Suite::Telescope => telescope(scenario, q, &mut out)?,
            Suite::Pythagoras => {
                if !pythagoras(scenario, q, &mut out)? {
                    skipped.push(Skipped {
                        query: index,
                        reason: format!("loss `{}` has no convex generator", q.loss),
                    });
                }
            }
            Suite::Bridge => bridge(scenario, q, &mut out)?,
            Suite::Belief => belief(scenario, q, seed, &mut out)?,
        }
        checks.extend(out.checks);
    }
    Ok(VerifyReport {
        engine: ENGINE,
        input_sha256: digest,
        command: "verify",
        suite: suite.to_string(),
        seed,
        tolerance: TOLERANCE,
        passed: checks.iter().all(|c| c.passed),
        checks,
        skipped,
    })
}

pub fn render_table(report: &VerifyReport) -> String {
    let mut rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.query.to_string(),
                c.check.clone(),
                c.residual.to_string(),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    rows.extend(report.skipped.iter().map(|s| {
        vec![
            s.query.to_string(),
            "-".into(),
            "-".into(),
            format!("skipped: {}", s.reason),
        ]
    }));
    let mut out = table(&["query", "check", "residual", "status"], &rows);
    out.push_str(&format!(
        "suite {}: {} (tolerance {:e})\n",
        report.suite,
        if report.passed {
            "all checks passed"
        } else {
            "FAILED"
        },
        report.tolerance
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_at_or_above_tolerance_fail() {
        let mut c = Collector {
            query: 0,
            checks: Vec::new(),
        };
        c.push("small", 1e-12);
        c.push("edge", TOLERANCE);
        c.push("nan", f64::NAN);
        let passed: Vec<bool> = c.checks.iter().map(|r| r.passed).collect();
        assert_eq!(passed, vec![true, false, false]);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["prop1", "telescope", "pythagoras", "bridge", "belief"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("lattice".parse::<Suite>().is_err());
    }
}
