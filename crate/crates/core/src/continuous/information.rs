//! Information between two continuous variables from a joint grid density.

use crate::error::{Error, Result};

use super::grid::JointGridDensity;

/// Conditionals are only formed where the `Y` marginal exceeds this.
pub const MARGINAL_FLOOR: f64 = 1e-12;

/// Log-loss information `∫∫ f(x,y) ln(f(x|y) / f_X(x)) dx dy` with
/// `0 ln 0 = 0`.
pub fn continuous_information(joint: &JointGridDensity) -> Result<f64> {
    let fx = joint.marginal_x();
    let fy = joint.marginal_y();
    Ok(joint.integrate(|ix, iy, f| {
        if f == 0.0 || fy[iy] <= MARGINAL_FLOOR {
            0.0
        } else {
            f * (f / fy[iy] / fx[ix]).ln()
        }
    }))
}

/// `∂_x ln g` at every node of a slice of positive values on a grid with
/// spacing `step`: `ln(g_{i+1}/g_{i−1}) / 2h` inside, one-sided ratios at
/// the ends. Constant factors of `g` cancel inside each ratio.
pub fn conditional_score(slice: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = slice.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "score needs at least 3 nodes, got {n}"
        )));
    }
    if let Some(i) = slice.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::ZeroDensity { ix: i, iy: 0 });
    }
    let mut score = Vec::with_capacity(n);
    score.push((slice[1] / slice[0]).ln() / step);
    for i in 1..n - 1 {
        score.push((slice[i + 1] / slice[i - 1]).ln() / (2.0 * step));
    }
    score.push((slice[n - 1] / slice[n - 2]).ln() / step);
    Ok(score)
}

/// Hyvärinen information
/// `∫∫ f(x,y) (∂_x ln f(x|y) − ∂_x ln f_X(x))² dx dy`.
/// The density must be positive at every node.
pub fn hyvarinen_information(joint: &JointGridDensity) -> Result<f64> {
    let h = joint.x_grid().step();
    let marginal = conditional_score(&joint.marginal_x(), h)?;
    let ny = joint.y_grid().len();
    let mut scores = Vec::with_capacity(ny);
    for iy in 0..ny {
        let s = conditional_score(&joint.x_slice(iy), h).map_err(|e| relabel(e, iy))?;
        scores.push(s);
    }
    Ok(joint.integrate(|ix, iy, f| {
        let d = scores[iy][ix] - marginal[ix];
        f * d * d
    }))
}

fn relabel(error: Error, iy: usize) -> Error {
    match error {
        Error::ZeroDensity { ix, .. } => Error::ZeroDensity { ix, iy },
        other => other,
    }
}
