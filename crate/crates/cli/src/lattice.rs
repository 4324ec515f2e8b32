//! Optimal risk over every partition of a random seeded space.

use std::fmt::Write as _;

use lossinfo::{lattice_sweep, LatticeSweep, RandomElement, SampleSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::loss_spec::LossSpec;
use crate::report::{sha256_hex, Engine, Num, ENGINE};

pub const MAX_ATOMS: usize = 8;
/// Alphabet of the random element under symbolic losses.
pub const SYMBOL_ALPHABET: usize = 3;
pub const CSV_HEADER: &str = "partition_id,block_count,optimal_risk,uncertainty_from_trivial";
/// Gaps below `-MONOTONICITY_TOLERANCE` count as violations.
pub const MONOTONICITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct LatticeReport {
    pub engine: Engine,
    pub input_sha256: String,
    pub command: &'static str,
    pub atoms: usize,
    pub loss: String,
    pub seed: u64,
    pub probabilities: Vec<f64>,
    pub element: Vec<Vec<f64>>,
    pub partition_count: usize,
    pub refinement_pairs: usize,
    pub min_refinement_gap: Num,
    pub min_maximality_gap: Num,
    pub min_information: Num,
    pub entropy: Num,
    pub max_plateau_deviation: Num,
    pub monotone: bool,
}

/// A random space and element drawn from `seed`. Real values lie in
/// `[0.1, 3)` so every generator's domain contains them.
pub fn random_instance(
    atoms: usize,
    loss: LossSpec,
    seed: u64,
) -> lossinfo::Result<(SampleSpace, RandomElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let space = SampleSpace::new(raw.iter().map(|v| v / total).collect())?;
    let x = if loss.is_symbolic() {
        let symbols: Vec<usize> = (0..atoms)
            .map(|_| rng.random_range(0..SYMBOL_ALPHABET))
            .collect();
        RandomElement::symbols(SYMBOL_ALPHABET, &symbols)?
    } else {
        let values: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.1..3.0)).collect();
        RandomElement::scalar(&values)?
    };
    Ok((space, x))
}

pub fn run(atoms: usize, loss: LossSpec, seed: u64) -> CliResult<(LatticeReport, String)> {
    if !(1..=MAX_ATOMS).contains(&atoms) {
        return Err(CliError::schema(format!(
            "--atoms: {atoms} is outside 1..={MAX_ATOMS}"
        )));
    }
    let (space, x) = random_instance(atoms, loss, seed)?;
    let model = loss.build(if loss.is_symbolic() {
        SYMBOL_ALPHABET
    } else {
        1
    })?;
    let sweep = lattice_sweep(&space, &x, &model)?;
    let csv = render_csv(&sweep)?;
    let s = sweep.summary()?;
    let monotone = [
        s.min_refinement_gap,
        s.min_maximality_gap,
        s.min_information,
        s.entropy,
    ]
    .iter()
    .all(|g| *g >= -MONOTONICITY_TOLERANCE);
    let report = LatticeReport {
        engine: ENGINE,
        input_sha256: sha256_hex(format!("atoms={atoms};loss={loss};seed={seed}").as_bytes()),
        command: "lattice",
        atoms,
        loss: loss.to_string(),
        seed,
        probabilities: space.probabilities().to_vec(),
        element: x.values().to_vec(),
        partition_count: s.partition_count,
        refinement_pairs: s.refinement_pairs,
        min_refinement_gap: Num::finite(s.min_refinement_gap),
        min_maximality_gap: Num::finite(s.min_maximality_gap),
        min_information: Num::finite(s.min_information),
        entropy: Num::finite(s.entropy),
        max_plateau_deviation: Num::finite(s.max_plateau_deviation),
        monotone,
    };
    Ok((report, csv))
}

fn render_csv(sweep: &LatticeSweep) -> lossinfo::Result<String> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (id, (p, risk)) in sweep.partitions.iter().zip(&sweep.risks).enumerate() {
        let u = sweep.uncertainty_from_trivial(id)?;
        let _ = writeln!(out, "{id},{},{},{}", p.block_count(), Num(*risk), Num(u));
    }
    Ok(out)
}
