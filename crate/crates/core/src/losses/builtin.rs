//! Built-in losses: square error, log loss, KL, Tsallis score, Bregman.

use std::sync::Arc;

use super::bregman::{bregman_divergence, ConvexGenerator};
use super::{ActionSpace, Loss, WeightedStates};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::space::ElementKind;

/// `l(x, a) = ‖x − a‖²` on `ℝ^d`.
#[derive(Debug, Clone, Copy)]
pub struct SquareError {
    dim: usize,
}

impl SquareError {
    pub fn new(dim: usize) -> Self {
        SquareError { dim }
    }
}

impl Loss for SquareError {
    fn name(&self) -> String {
        "square".into()
    }

    fn state_kind(&self) -> ElementKind {
        ElementKind::RealVector { dim: self.dim }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::RealBox {
            lower: vec![f64::NEG_INFINITY; self.dim],
            upper: vec![f64::INFINITY; self.dim],
        }
    }

    fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        state
            .iter()
            .zip(action)
            .map(|(x, a)| (x - a) * (x - a))
            .sum()
    }

    fn bayes_rule(&self, states: &WeightedStates) -> Option<Vec<f64>> {
        Some(states.mean())
    }

    fn pointwise_min(&self, _state: &[f64]) -> Option<ExtendedReal> {
        Some(ExtendedReal::ZERO)
    }
}

/// `−Σ_j s_j ln a_j` with `0 · ln 0 = 0`; on a one-hot state `δ_x` this is
/// the log loss `−ln a(x)`.
fn cross_entropy(state: &[f64], action: &[f64]) -> f64 {
    let mut total = 0.0;
    for (s, a) in state.iter().zip(action) {
        if *s > 0.0 {
            if *a <= 0.0 {
                return f64::INFINITY;
            }
            total -= s * a.ln();
        }
    }
    total
}

fn log_gradient(state: &[f64], action: &[f64]) -> Vec<f64> {
    state
        .iter()
        .zip(action)
        .map(|(s, a)| if *s > 0.0 { -s / a } else { 0.0 })
        .collect()
}

fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|v| **v > 0.0).map(|v| -v * v.ln()).sum()
}

/// Discrete log loss `l(x, q) = −ln q(x)` over an alphabet of size `k`.
///
/// States are distributions; a symbol `x` is the one-hot state `δ_x`.
/// For a non-degenerate state the loss is the expected log loss.
#[derive(Debug, Clone, Copy)]
pub struct LogLoss {
    alphabet: usize,
}

impl LogLoss {
    pub fn new(alphabet: usize) -> Self {
        LogLoss { alphabet }
    }
}

impl Loss for LogLoss {
    fn name(&self) -> String {
        "log".into()
    }

    fn state_kind(&self) -> ElementKind {
        ElementKind::Distribution {
            alphabet: self.alphabet,
        }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Simplex {
            size: self.alphabet,
        }
    }

    fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        cross_entropy(state, action)
    }

    fn bayes_rule(&self, states: &WeightedStates) -> Option<Vec<f64>> {
        Some(states.mean())
    }

    fn pointwise_min(&self, state: &[f64]) -> Option<ExtendedReal> {
        Some(ExtendedReal::Finite(shannon_entropy(state)))
    }

    fn action_gradient(&self, state: &[f64], action: &[f64]) -> Option<Vec<f64>> {
        Some(log_gradient(state, action))
    }

    fn is_log_based(&self) -> bool {
        true
    }
}

/// `l(p, q) = D_KL(p‖q)` on distribution-valued states.
#[derive(Debug, Clone, Copy)]
pub struct KlLoss {
    alphabet: usize,
}

impl KlLoss {
    pub fn new(alphabet: usize) -> Self {
        KlLoss { alphabet }
    }
}

impl Loss for KlLoss {
    fn name(&self) -> String {
        "kl".into()
    }

    fn state_kind(&self) -> ElementKind {
        ElementKind::Distribution {
            alphabet: self.alphabet,
        }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Simplex {
            size: self.alphabet,
        }
    }

    fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        let mut total = 0.0;
        for (p, q) in state.iter().zip(action) {
            if *p > 0.0 {
                if *q <= 0.0 {
                    return f64::INFINITY;
                }
                total += p * (p / q).ln();
            }
        }
        total
    }

    fn bayes_rule(&self, states: &WeightedStates) -> Option<Vec<f64>> {
        Some(states.mean())
    }

    fn pointwise_min(&self, _state: &[f64]) -> Option<ExtendedReal> {
        Some(ExtendedReal::ZERO)
    }

    fn action_gradient(&self, state: &[f64], action: &[f64]) -> Option<Vec<f64>> {
        Some(log_gradient(state, action))
    }

    fn is_log_based(&self) -> bool {
        true
    }
}

/// Tsallis score `S(x, q) = (γ − 1) Σ_j q_j^γ − γ q_x^{γ−1}` for `γ > 1`,
/// extended linearly to distribution-valued states. It is strictly proper,
/// so the Bayes act is the mixture of the states.
#[derive(Debug, Clone, Copy)]
pub struct TsallisScore {
    alphabet: usize,
    gamma: f64,
}

impl TsallisScore {
    pub fn new(alphabet: usize, gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Tsallis score needs a finite gamma > 1, got {gamma}"
            )));
        }
        Ok(TsallisScore { alphabet, gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Loss for TsallisScore {
    fn name(&self) -> String {
        format!("tsallis({})", self.gamma)
    }

    fn state_kind(&self) -> ElementKind {
        ElementKind::Distribution {
            alphabet: self.alphabet,
        }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Simplex {
            size: self.alphabet,
        }
    }

    fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        let g = self.gamma;
        if action.iter().any(|a| *a < 0.0) {
            return f64::NAN;
        }
        let power_sum: f64 = action.iter().map(|a| a.powf(g)).sum();
        let paired: f64 = state
            .iter()
            .zip(action)
            .filter(|(s, _)| **s > 0.0)
            .map(|(s, a)| s * a.powf(g - 1.0))
            .sum();
        (g - 1.0) * power_sum - g * paired
    }

    fn bayes_rule(&self, states: &WeightedStates) -> Option<Vec<f64>> {
        Some(states.mean())
    }

    fn pointwise_min(&self, state: &[f64]) -> Option<ExtendedReal> {
        // S(s, s) = (γ−1) Σ s^γ − γ Σ s^γ.
        Some(ExtendedReal::Finite(
            -state.iter().map(|s| s.powf(self.gamma)).sum::<f64>(),
        ))
    }

    fn action_gradient(&self, state: &[f64], action: &[f64]) -> Option<Vec<f64>> {
        let g = self.gamma;
        Some(
            state
                .iter()
                .zip(action)
                .map(|(s, a)| {
                    let a = a.max(1e-300);
                    let own = g * (g - 1.0) * a.powf(g - 1.0);
                    if *s > 0.0 {
                        own - g * (g - 1.0) * s * a.powf(g - 2.0)
                    } else {
                        own
                    }
                })
                .collect(),
        )
    }
}

/// Bregman loss `l(x, a) = d_φ(x, a)`; the Bayes act is the mean.
#[derive(Debug, Clone)]
pub struct BregmanLoss {
    generator: Arc<dyn ConvexGenerator>,
    dim: usize,
}

impl BregmanLoss {
    pub fn new(generator: Arc<dyn ConvexGenerator>, dim: usize) -> Self {
        BregmanLoss { generator, dim }
    }

    pub fn generator(&self) -> &dyn ConvexGenerator {
        self.generator.as_ref()
    }
}

impl Loss for BregmanLoss {
    fn name(&self) -> String {
        format!("bregman({})", self.generator.name())
    }

    fn state_kind(&self) -> ElementKind {
        ElementKind::RealVector { dim: self.dim }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::RealBox {
            lower: vec![self.generator.coordinate_lower_bound(); self.dim],
            upper: vec![f64::INFINITY; self.dim],
        }
    }

    fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        if !self.generator.in_domain(state) {
            return f64::NAN;
        }
        if !self.generator.in_domain(action) {
            return f64::INFINITY;
        }
        bregman_divergence(self.generator.as_ref(), state, action).unwrap_or(f64::NAN)
    }

    fn bayes_rule(&self, states: &WeightedStates) -> Option<Vec<f64>> {
        Some(states.mean())
    }

    fn pointwise_min(&self, _state: &[f64]) -> Option<ExtendedReal> {
        Some(ExtendedReal::ZERO)
    }
}
