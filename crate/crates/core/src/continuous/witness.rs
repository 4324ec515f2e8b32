//! Witness sequences certifying that continuous entropies are infinite.
//!
//! Acting with a density that concentrates at the realized point makes the
//! loss arbitrarily small, so the optimal risk under full knowledge is `−∞`
//! and the entropy is `+∞`. The sequences use
//! `G_n^x(ξ) = (n/√π) exp(−n²(ξ−x)²)`; for the Hyvärinen loss the density is
//! shifted by `1/(4n²)` so its score at `ξ = x` is exactly `−1/2` while its
//! curvature there grows like `−n³`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

use super::grid::{Grid, GridDensity};

/// Half-width of the normalization window, in units of `1/n`.
pub const NORMALIZATION_HALF_WIDTH: f64 = 8.0;
/// Half-width of the reference density's support.
pub const REFERENCE_HALF_WIDTH: f64 = 8.0;
const REFERENCE_NODES: usize = 1601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessFamily {
    GaussianLogloss,
    ShiftedGaussianHyvarinen,
}

impl WitnessFamily {
    pub const ALL: [WitnessFamily; 2] = [
        WitnessFamily::GaussianLogloss,
        WitnessFamily::ShiftedGaussianHyvarinen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessFamily::GaussianLogloss => "gaussian_logloss",
            WitnessFamily::ShiftedGaussianHyvarinen => "shifted_gaussian_hyvarinen",
        }
    }

    /// Offset of the witness mode from the realized point.
    pub fn shift(self, n: f64) -> f64 {
        match self {
            WitnessFamily::GaussianLogloss => 0.0,
            WitnessFamily::ShiftedGaussianHyvarinen => 1.0 / (4.0 * n * n),
        }
    }
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WitnessFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown witness family {s:?}")))
    }
}

fn check_index(n: f64) -> Result<()> {
    if n > 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "witness index n = {n} must be positive and finite"
        )))
    }
}

/// `G_n^center(ξ)`.
pub fn witness_density(n: f64, center: f64, xi: f64) -> f64 {
    let u = xi - center;
    n / PI.sqrt() * (-n * n * u * u).exp()
}

/// `𝔼_f[−ln G_n^X(X)] = −ln(n/√π)` for every density `f`.
pub fn logloss_witness_value(n: f64) -> Result<f64> {
    check_index(n)?;
    Ok(-(n / PI.sqrt()).ln())
}

/// `∂_ξ ln G̃_n^x(ξ)` at `ξ = x`.
pub fn hyvarinen_witness_score(n: f64) -> Result<f64> {
    check_index(n)?;
    let s = WitnessFamily::ShiftedGaussianHyvarinen.shift(n);
    Ok(-2.0 * n * n * s)
}

/// `∂²_ξ G̃_n^x(ξ)` at `ξ = x`, from the closed-form Gaussian derivative.
pub fn hyvarinen_witness_laplacian(n: f64) -> Result<f64> {
    check_index(n)?;
    let s = WitnessFamily::ShiftedGaussianHyvarinen.shift(n);
    let n2 = n * n;
    Ok(n / PI.sqrt() * (-n2 * s * s).exp() * (4.0 * n2 * n2 * s * s - 2.0 * n2))
}

/// `½ (∂ ln G̃)² + ∂² G̃` at the realized point.
pub fn hyvarinen_witness_loss(n: f64) -> Result<f64> {
    let score = hyvarinen_witness_score(n)?;
    Ok(0.5 * score * score + hyvarinen_witness_laplacian(n)?)
}

/// Largest grid step accepted for index `n`.
pub fn max_witness_step(n: f64) -> f64 {
    1.0 / (4.0 * n)
}

/// Step used when none is given.
pub fn default_witness_step(n: f64) -> f64 {
    1.0 / (32.0 * n)
}

/// Checks that the witness density integrates to 1 within tolerance on a
/// grid covering `±8/n` around the realized point.
pub fn check_witness_normalization(
    family: WitnessFamily,
    n: f64,
    step: Option<f64>,
) -> Result<f64> {
    check_index(n)?;
    let step = step.unwrap_or_else(|| default_witness_step(n));
    let max_step = max_witness_step(n);
    if !(step > 0.0) || step > max_step {
        return Err(Error::GridTooCoarse { n, step, max_step });
    }
    let half = NORMALIZATION_HALF_WIDTH / n;
    let grid = Grid::covering(-half, half, step)?;
    let center = -family.shift(n);
    let values: Vec<f64> = grid
        .points()
        .map(|xi| witness_density(n, center, xi))
        .collect();
    GridDensity::new(grid, values)?;
    Ok(grid.step())
}

/// Standard normal on `[−8, 8]`, the `f` against which witnesses are
/// averaged.
pub fn reference_density() -> GridDensity {
    let grid = Grid::new(-REFERENCE_HALF_WIDTH, REFERENCE_HALF_WIDTH, REFERENCE_NODES)
        .expect("static grid");
    GridDensity::from_fn(grid, |x| (-0.5 * x * x).exp()).expect("static density")
}

/// `𝔼_f[−ln G_n^X(X)]` by trapezoid quadrature against the reference
/// density, evaluating the witness density at the realized point.
pub fn logloss_witness_quadrature(n: f64, step: Option<f64>) -> Result<f64> {
    check_witness_normalization(WitnessFamily::GaussianLogloss, n, step)?;
    let f = reference_density();
    Ok(f.expect(|x| -witness_density(n, x, x).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessPoint {
    pub n: f64,
    pub risk_upper_bound: f64,
}

/// Upper bounds on the optimal risk under full knowledge along an ascending
/// ladder of indices.
pub fn demonstrate_entropy_divergence(
    family: WitnessFamily,
    n_values: &[f64],
    step: Option<f64>,
) -> Result<Vec<WitnessPoint>> {
    if n_values.is_empty() {
        return Err(Error::InvalidParameter("empty witness ladder".into()));
    }
    for pair in n_values.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::InvalidParameter(format!(
                "witness indices must ascend: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let f = reference_density();
    n_values
        .iter()
        .map(|&n| {
            check_witness_normalization(family, n, step)?;
            let bound = match family {
                WitnessFamily::GaussianLogloss => logloss_witness_value(n)?,
                WitnessFamily::ShiftedGaussianHyvarinen => {
                    let loss = hyvarinen_witness_loss(n)?;
                    f.expect(|_| loss)
                }
            };
            Ok(WitnessPoint {
                n,
                risk_upper_bound: bound,
            })
        })
        .collect()
}

/// A continuous entropy: `+∞`, with the witness ladder as evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousEntropy {
    pub value: ExtendedReal,
    pub family: WitnessFamily,
    pub witness: Vec<WitnessPoint>,
}

/// `H(X)` (equally `H(X|Y)`) for densities under the family's loss.
pub fn continuous_entropy(
    family: WitnessFamily,
    n_values: &[f64],
    step: Option<f64>,
) -> Result<ContinuousEntropy> {
    Ok(ContinuousEntropy {
        value: ExtendedReal::PosInf,
        family,
        witness: demonstrate_entropy_divergence(family, n_values, step)?,
    })
}
