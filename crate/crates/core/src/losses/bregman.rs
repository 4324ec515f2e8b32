//! Convex generators and Bregman divergences
//! `d_φ(x, y) = φ(x) − φ(y) − ⟨∇φ(y), x − y⟩`.

use std::fmt;

use crate::error::{Error, Result};

/// A differentiable convex function `φ` on a coordinatewise domain.
pub trait ConvexGenerator: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn value(&self, x: &[f64]) -> f64;

    /// `∇φ(x)`. Components may be `-inf` on the domain boundary.
    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Closed lower bound of every coordinate's domain.
    fn coordinate_lower_bound(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        let lo = self.coordinate_lower_bound();
        x.iter().all(|c| c.is_finite() && *c >= lo)
    }
}

/// `φ(x) = ‖x‖²`, generating the square error.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredNorm;

impl ConvexGenerator for SquaredNorm {
    fn name(&self) -> &str {
        "sqnorm"
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| 2.0 * v).collect()
    }
}

/// `φ(x) = Σ x_i ln x_i` on the nonnegative orthant, with `0 ln 0 = 0`.
/// On the simplex it generates the KL divergence.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegativeEntropy;

impl ConvexGenerator for NegativeEntropy {
    fn name(&self) -> &str {
        "negentropy"
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v * v.ln() })
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| v.ln() + 1.0).collect()
    }

    fn coordinate_lower_bound(&self) -> f64 {
        0.0
    }
}

/// `φ(x) = Σ exp(x_i)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialSum;

impl ConvexGenerator for ExponentialSum {
    fn name(&self) -> &str {
        "expsum"
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v.exp()).sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v.exp()).collect()
    }
}

/// `d_φ(x, y)`. Pairing terms with `x_i = y_i` are dropped, so a boundary
/// gradient of `-inf` only matters where it is paired with a nonzero
/// difference (and then yields `+inf`).
pub fn bregman_divergence(phi: &dyn ConvexGenerator, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::KindMismatch(format!(
            "Bregman arguments of width {} and {}",
            x.len(),
            y.len()
        )));
    }
    for (label, point) in [("x", x), ("y", y)] {
        if !phi.in_domain(point) {
            return Err(Error::OutsideDomain(format!(
                "{label} = {point:?} for generator {}",
                phi.name()
            )));
        }
    }
    let grad = phi.gradient(y);
    let mut pairing = 0.0;
    for ((xi, yi), gi) in x.iter().zip(y).zip(&grad) {
        let diff = xi - yi;
        if diff != 0.0 {
            pairing += gi * diff;
        }
    }
    Ok(phi.value(x) - phi.value(y) - pairing)
}
