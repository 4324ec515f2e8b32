//! Uniform grids, composite trapezoid quadrature and grid densities.

use crate::error::{Error, Result};

/// Tolerance on the trapezoid integral of a density.
pub const DENSITY_TOLERANCE: f64 = 1e-6;

/// Nodes `lower + i·step` for `i in 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lower: f64,
    step: f64,
    len: usize,
}

impl Grid {
    /// `nodes` equally spaced points from `lower` to `upper` inclusive.
    pub fn new(lower: f64, upper: f64, nodes: usize) -> Result<Grid> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds [{lower}, {upper}]"
            )));
        }
        if nodes < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 3 nodes, got {nodes}"
            )));
        }
        Ok(Grid {
            lower,
            step: (upper - lower) / (nodes - 1) as f64,
            len: nodes,
        })
    }

    /// The coarsest grid on `[lower, upper]` whose step is at most `max_step`.
    pub fn covering(lower: f64, upper: f64, max_step: f64) -> Result<Grid> {
        if !(max_step > 0.0 && max_step.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid step {max_step}")));
        }
        let intervals = ((upper - lower) / max_step).ceil().max(2.0);
        Grid::new(lower, upper, intervals as usize + 1)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lower + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.len {
            0.5 * self.step
        } else {
            self.step
        }
    }

    /// Composite trapezoid rule over the grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len);
        values
            .iter()
            .enumerate()
            .map(|(i, v)| self.weight(i) * v)
            .sum()
    }
}

fn check_values(values: &[f64], expected: usize) -> Result<()> {
    if values.len() != expected {
        return Err(Error::InvalidParameter(format!(
            "{} density values for {expected} grid nodes",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "density value {v} is not a nonnegative finite number"
        )));
    }
    Ok(())
}

fn check_integral(integral: f64) -> Result<()> {
    if (integral - 1.0).abs() > DENSITY_TOLERANCE {
        return Err(Error::NotNormalizable { integral });
    }
    Ok(())
}

/// Nonnegative node values whose trapezoid integral is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    grid: Grid,
    values: Vec<f64>,
}

impl GridDensity {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<GridDensity> {
        check_values(&values, grid.len())?;
        check_integral(grid.trapezoid(&values))?;
        Ok(GridDensity { grid, values })
    }

    /// Samples `f` on the grid and rescales to unit trapezoid integral.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid, f: F) -> Result<GridDensity> {
        let raw: Vec<f64> = grid.points().map(f).collect();
        check_values(&raw, grid.len())?;
        let total = grid.trapezoid(&raw);
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::NotNormalizable { integral: total });
        }
        let values = raw.into_iter().map(|v| v / total).collect();
        GridDensity::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `∫ f(x) g(x) dx`.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.grid
            .points()
            .zip(&self.values)
            .enumerate()
            .map(|(i, (x, f))| self.grid.weight(i) * f * g(x))
            .sum()
    }
}

/// A density on the product of two grids, stored row-major as
/// `values[ix * ny + iy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGridDensity {
    x_grid: Grid,
    y_grid: Grid,
    values: Vec<f64>,
}

impl JointGridDensity {
    pub fn new(x_grid: Grid, y_grid: Grid, values: Vec<f64>) -> Result<JointGridDensity> {
        check_values(&values, x_grid.len() * y_grid.len())?;
        let joint = JointGridDensity {
            x_grid,
            y_grid,
            values,
        };
        check_integral(joint.integral())?;
        Ok(joint)
    }

    /// Samples `f(x, y)` on the grid and rescales to unit integral.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(
        x_grid: Grid,
        y_grid: Grid,
        f: F,
    ) -> Result<JointGridDensity> {
        let mut raw = Vec::with_capacity(x_grid.len() * y_grid.len());
        for x in x_grid.points() {
            for y in y_grid.points() {
                raw.push(f(x, y));
            }
        }
        check_values(&raw, x_grid.len() * y_grid.len())?;
        let unscaled = JointGridDensity {
            x_grid,
            y_grid,
            values: raw,
        };
        let total = unscaled.integral();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::NotNormalizable { integral: total });
        }
        let values = unscaled.values.iter().map(|v| v / total).collect();
        JointGridDensity::new(x_grid, y_grid, values)
    }

    pub fn x_grid(&self) -> &Grid {
        &self.x_grid
    }

    pub fn y_grid(&self) -> &Grid {
        &self.y_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.y_grid.len() + iy]
    }

    /// Node values `f(·, y_iy)`: the conditional of `X` given `Y = y_iy` up
    /// to a constant.
    pub fn x_slice(&self, iy: usize) -> Vec<f64> {
        (0..self.x_grid.len())
            .map(|ix| self.value(ix, iy))
            .collect()
    }

    /// Product trapezoid rule, summed row by row.
    pub fn integral(&self) -> f64 {
        self.integrate(|_, _, f| f)
    }

    /// `∫∫ h(ix, iy, f(x,y)) dx dy` with `h` evaluated per node.
    pub fn integrate<H: Fn(usize, usize, f64) -> f64>(&self, h: H) -> f64 {
        let ny = self.y_grid.len();
        (0..self.x_grid.len())
            .map(|ix| {
                let row: f64 = (0..ny)
                    .map(|iy| self.y_grid.weight(iy) * h(ix, iy, self.value(ix, iy)))
                    .sum();
                self.x_grid.weight(ix) * row
            })
            .sum()
    }

    /// `f_X(x_ix) = ∫ f(x_ix, y) dy`.
    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.x_grid.len())
            .map(|ix| {
                (0..self.y_grid.len())
                    .map(|iy| self.y_grid.weight(iy) * self.value(ix, iy))
                    .sum()
            })
            .collect()
    }

    /// `f_Y(y_iy) = ∫ f(x, y_iy) dx`.
    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.y_grid.len())
            .map(|iy| {
                (0..self.x_grid.len())
                    .map(|ix| self.x_grid.weight(ix) * self.value(ix, iy))
                    .sum()
            })
            .collect()
    }
}
