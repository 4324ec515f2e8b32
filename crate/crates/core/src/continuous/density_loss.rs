//! Losses whose actions are densities sampled on a grid.

use crate::extended::ExtendedReal;
use crate::losses::{ActionSpace, Loss};
use crate::space::ElementKind;

use super::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityLossKind {
    /// `l(x, g) = −ln g(x)`.
    Log,
    /// `l(x, g) = ½ (∂ ln g(x))² + ∂² g(x)`.
    Hyvarinen,
}

/// A scalar-state loss whose action is the vector of density values on
/// `grid`. Its pointwise minimum is `−∞`: concentrating densities drive
/// both losses down without bound.
#[derive(Debug, Clone)]
pub struct DensityLoss {
    kind: DensityLossKind,
    grid: Grid,
}

impl DensityLoss {
    pub fn new(kind: DensityLossKind, grid: Grid) -> DensityLoss {
        DensityLoss { kind, grid }
    }

    pub fn kind(&self) -> DensityLossKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Linear interpolation; zero outside the grid.
    fn interpolate(&self, g: &[f64], x: f64) -> f64 {
        let t = (x - self.grid.lower()) / self.grid.step();
        if !(t >= 0.0 && t <= (self.grid.len() - 1) as f64) {
            return 0.0;
        }
        let i = (t.floor() as usize).min(self.grid.len() - 2);
        let frac = t - i as f64;
        g[i] * (1.0 - frac) + g[i + 1] * frac
    }

    /// Central differences at the interior node nearest `x`.
    fn hyvarinen(&self, g: &[f64], x: f64) -> f64 {
        let t = (x - self.grid.lower()) / self.grid.step();
        if !(t >= 0.0 && t <= (self.grid.len() - 1) as f64) {
            return f64::INFINITY;
        }
        let i = (t.round() as usize).clamp(1, self.grid.len() - 2);
        let h = self.grid.step();
        let (lo, mid, hi) = (g[i - 1], g[i], g[i + 1]);
        if !(lo > 0.0 && hi > 0.0) {
            return f64::INFINITY;
        }
        let score = (hi / lo).ln() / (2.0 * h);
        let curvature = (hi - 2.0 * mid + lo) / (h * h);
        0.5 * score * score + curvature
    }
}

impl Loss for DensityLoss {
    fn name(&self) -> String {
        match self.kind {
            DensityLossKind::Log => "density-log".into(),
            DensityLossKind::Hyvarinen => "hyvarinen".into(),
        }
    }

    fn state_kind(&self) -> ElementKind {
        ElementKind::RealVector { dim: 1 }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::DensityGrid
    }

    fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        if action.len() != self.grid.len() || action.iter().any(|v| !(*v >= 0.0)) {
            return f64::NAN;
        }
        match self.kind {
            DensityLossKind::Log => -self.interpolate(action, state[0]).ln(),
            DensityLossKind::Hyvarinen => self.hyvarinen(action, state[0]),
        }
    }

    fn pointwise_min(&self, _state: &[f64]) -> Option<ExtendedReal> {
        Some(ExtendedReal::NegInf)
    }

    fn is_log_based(&self) -> bool {
        self.kind == DensityLossKind::Log
    }
}
