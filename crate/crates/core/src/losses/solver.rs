//! Numeric Bayes-act search for convex expected losses.
//!
//! Box action spaces use cyclic coordinatewise golden-section search;
//! simplex action spaces use projected gradient descent with backtracking.
//! Both stop once a full pass improves the risk by less than
//! [`RISK_IMPROVEMENT_TOLERANCE`].

use crate::error::{Error, Result};

pub const RISK_IMPROVEMENT_TOLERANCE: f64 = 1e-12;
pub const MAX_SOLVER_ITERATIONS: usize = 100_000;

const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;
const GOLDEN_STEPS: usize = 200;
const BISECTION_STEPS: usize = 80;

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub action: Vec<f64>,
    pub iterations: usize,
}

/// Keeps the better of two candidates; ties go to the smaller coordinate.
fn better(candidate: (f64, f64), incumbent: (f64, f64)) -> bool {
    candidate.1 < incumbent.1 || (candidate.1 == incumbent.1 && candidate.0 < incumbent.0)
}

/// Golden-section search of a unimodal function on `[lo, hi]`. Returns the
/// best point seen (endpoints included) and the number of evaluations.
fn golden_section<F>(mut f: F, lo: f64, hi: f64) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut best = (lo, f(lo)?);
    let at_hi = (hi, f(hi)?);
    if better(at_hi, best) {
        best = at_hi;
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_GOLDEN * (b - a);
    let mut d = a + INV_GOLDEN * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 4;
    for _ in 0..GOLDEN_STEPS {
        if (b - a) <= 1e-14 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_GOLDEN * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_GOLDEN * (b - a);
            fd = f(d)?;
        }
        evals += 1;
    }
    for point in [(c, fc), (d, fd)] {
        if better(point, best) {
            best = point;
        }
    }
    Ok((best.0, best.1, evals))
}

pub(crate) fn minimize_in_box<F>(risk: F, lower: &[f64], upper: &[f64]) -> Result<Solution>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let dim = lower.len();
    let mut action: Vec<f64> = lower
        .iter()
        .zip(upper)
        .map(|(l, u)| 0.5 * (l + u))
        .collect();
    let mut best = risk(&action)?;
    let mut iterations = 0;
    loop {
        let before = best;
        for j in 0..dim {
            let mut probe = action.clone();
            let (t, value, evals) = golden_section(
                |t| {
                    probe[j] = t;
                    risk(&probe)
                },
                lower[j],
                upper[j],
            )?;
            iterations += evals;
            if value <= best {
                action[j] = t;
                best = value;
            }
        }
        // NaN here means the risk stayed infinite; nothing left to improve.
        if !(before - best >= RISK_IMPROVEMENT_TOLERANCE) {
            break;
        }
        if iterations >= MAX_SOLVER_ITERATIONS {
            return Err(Error::NoConvergence { iterations });
        }
    }
    if !best.is_finite() {
        return Err(Error::NonFiniteEval(
            "expected loss is infinite everywhere the search probed".into(),
        ));
    }
    // Among equal-risk actions keep the lexicographically smallest: push each
    // coordinate left while the risk does not increase.
    for j in 0..dim {
        let mut probe = action.clone();
        let mut at = |t: f64| -> Result<f64> {
            probe[j] = t;
            risk(&probe)
        };
        if at(lower[j])? <= best {
            action[j] = lower[j];
            continue;
        }
        let (mut lo, mut hi) = (lower[j], action[j]);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if at(mid)? <= best {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        iterations += BISECTION_STEPS;
        action[j] = hi;
    }
    Ok(Solution { action, iterations })
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

pub(crate) fn minimize_on_simplex<F, G>(risk: F, gradient: G, size: usize) -> Result<Solution>
where
    F: Fn(&[f64]) -> Result<f64>,
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut action = vec![1.0 / size as f64; size];
    let mut current = risk(&action)?;
    if !current.is_finite() {
        return Err(Error::NonFiniteEval(
            "expected loss is infinite at the simplex barycenter".into(),
        ));
    }
    let mut step = 1.0;
    let mut iterations = 0;
    while iterations < MAX_SOLVER_ITERATIONS {
        iterations += 1;
        let grad = gradient(&action)?;
        if grad.iter().any(|g| g.is_nan()) {
            return Err(Error::NonFiniteEval("NaN gradient".into()));
        }
        // Backtrack until the quadratic upper model is respected.
        let accepted = loop {
            let shifted: Vec<f64> = action
                .iter()
                .zip(&grad)
                .map(|(a, g)| a - step * g)
                .collect();
            let candidate = project_to_simplex(&shifted);
            let delta: Vec<f64> = candidate.iter().zip(&action).map(|(c, a)| c - a).collect();
            let moved: f64 = delta.iter().map(|d| d * d).sum();
            if moved == 0.0 {
                break None;
            }
            let value = risk(&candidate)?;
            let linear: f64 = grad.iter().zip(&delta).map(|(g, d)| g * d).sum();
            if value <= current + linear + moved / (2.0 * step) && value <= current {
                break Some((candidate, value));
            }
            step *= 0.5;
            if step < 1e-30 {
                break None;
            }
        };
        let Some((candidate, value)) = accepted else {
            break;
        };
        let improvement = current - value;
        action = candidate;
        current = value;
        step *= 2.0;
        if improvement < RISK_IMPROVEMENT_TOLERANCE {
            break;
        }
    }
    if iterations >= MAX_SOLVER_ITERATIONS {
        return Err(Error::NoConvergence { iterations });
    }
    Ok(Solution { action, iterations })
}

/// Central differences, falling back to one-sided ones where a coordinate
/// sits at the simplex boundary.
pub(crate) fn finite_difference_gradient<F>(f: F, at: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let h = 1e-7;
    let mut probe = at.to_vec();
    let mut grad = Vec::with_capacity(at.len());
    for j in 0..at.len() {
        let base = at[j];
        let g = if base >= h {
            probe[j] = base + h;
            let up = f(&probe)?;
            probe[j] = base - h;
            let down = f(&probe)?;
            (up - down) / (2.0 * h)
        } else {
            probe[j] = base + h;
            let up = f(&probe)?;
            probe[j] = base;
            let here = f(&probe)?;
            (up - here) / h
        };
        probe[j] = base;
        grad.push(g);
    }
    Ok(grad)
}
