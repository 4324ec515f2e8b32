//! Loss functions, Bayes acts, and scoring-rule divergences.
//!
//! A loss `l(x, a)` pairs a state `x` (a real vector, or a distribution over
//! a finite alphabet) with an action `a`. The Bayes act of a weighted set of
//! states minimizes the expected loss; closed-form rules are used where the
//! loss supplies one, otherwise a convex numeric search runs over the action
//! space.

mod bregman;
mod builtin;
mod solver;

use std::fmt;
use std::sync::Arc;

pub use bregman::{
    bregman_divergence, ConvexGenerator, ExponentialSum, NegativeEntropy, SquaredNorm,
};
pub use builtin::{BregmanLoss, KlLoss, LogLoss, SquareError, TsallisScore};
pub use solver::{MAX_SOLVER_ITERATIONS, RISK_IMPROVEMENT_TOLERANCE};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::space::{one_hot, ElementKind};

/// Tolerance on `Σ w = 1` for weighted states.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Where actions live.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionSpace {
    /// Coordinatewise box; bounds may be infinite, but the numeric solver
    /// needs them finite.
    RealBox { lower: Vec<f64>, upper: Vec<f64> },
    /// Probability vectors of the given size.
    Simplex { size: usize },
    /// Densities on a grid; only handled through witness sequences.
    DensityGrid,
}

impl fmt::Display for ActionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSpace::RealBox { lower, .. } => write!(f, "RealBox({})", lower.len()),
            ActionSpace::Simplex { size } => write!(f, "Simplex({size})"),
            ActionSpace::DensityGrid => f.write_str("DensityGrid"),
        }
    }
}

/// A loss function `l(state, action)`.
///
/// Implementors supply evaluation and the action space; the optional hooks
/// enable closed-form Bayes acts, closed-form pointwise minima, and analytic
/// action gradients for the simplex solver.
pub trait Loss: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn state_kind(&self) -> ElementKind;

    fn action_space(&self) -> ActionSpace;

    /// `l(state, action)`. May return `+inf`; NaN signals an invalid input.
    fn eval(&self, state: &[f64], action: &[f64]) -> f64;

    fn bayes_rule(&self, _states: &WeightedStates) -> Option<Vec<f64>> {
        None
    }

    /// `inf_a l(state, a)` when known in closed form.
    fn pointwise_min(&self, _state: &[f64]) -> Option<ExtendedReal> {
        None
    }

    /// `∇_a l(state, action)`, used by the simplex solver. Finite differences
    /// are used when absent.
    fn action_gradient(&self, _state: &[f64], _action: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// Whether values are measured in nats (reported in bits as well).
    fn is_log_based(&self) -> bool {
        false
    }
}

/// A shareable loss with solver configuration.
#[derive(Clone)]
pub struct LossModel {
    loss: Arc<dyn Loss>,
    closed_forms: bool,
    bounds: Option<(Vec<f64>, Vec<f64>)>,
}

impl fmt::Debug for LossModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossModel")
            .field("loss", &self.loss)
            .field("closed_forms", &self.closed_forms)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl LossModel {
    pub fn new<L: Loss + 'static>(loss: L) -> Self {
        LossModel {
            loss: Arc::new(loss),
            closed_forms: true,
            bounds: None,
        }
    }

    pub fn square_error(dim: usize) -> Self {
        LossModel::new(SquareError::new(dim))
    }

    pub fn log_loss(alphabet: usize) -> Self {
        LossModel::new(LogLoss::new(alphabet))
    }

    pub fn kl(alphabet: usize) -> Self {
        LossModel::new(KlLoss::new(alphabet))
    }

    pub fn tsallis(alphabet: usize, gamma: f64) -> Result<Self> {
        Ok(LossModel::new(TsallisScore::new(alphabet, gamma)?))
    }

    pub fn bregman<G: ConvexGenerator + 'static>(generator: G, dim: usize) -> Self {
        LossModel::new(BregmanLoss::new(Arc::new(generator), dim))
    }

    /// Masks closed-form Bayes rules and pointwise minima, forcing the
    /// numeric solver.
    pub fn without_closed_forms(mut self) -> Self {
        self.closed_forms = false;
        self
    }

    pub fn closed_forms_enabled(&self) -> bool {
        self.closed_forms
    }

    /// Narrows a box action space to finite search bounds.
    pub fn with_action_bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        match self.loss.action_space() {
            ActionSpace::RealBox {
                lower: base_lo,
                upper: base_hi,
            } => {
                if lower.len() != base_lo.len() || upper.len() != base_hi.len() {
                    return Err(Error::InvalidParameter(format!(
                        "bounds must have dimension {}",
                        base_lo.len()
                    )));
                }
                if lower.iter().zip(&upper).any(|(l, u)| !(l <= u)) {
                    return Err(Error::InvalidParameter("lower bound above upper".into()));
                }
                let lower = lower.iter().zip(&base_lo).map(|(a, b)| a.max(*b)).collect();
                let upper = upper.iter().zip(&base_hi).map(|(a, b)| a.min(*b)).collect();
                self.bounds = Some((lower, upper));
                Ok(self)
            }
            other => Err(Error::InvalidParameter(format!(
                "action bounds apply to box action spaces, not {other}"
            ))),
        }
    }

    pub fn name(&self) -> String {
        self.loss.name()
    }

    pub fn state_kind(&self) -> ElementKind {
        self.loss.state_kind()
    }

    pub fn action_space(&self) -> ActionSpace {
        match (&self.bounds, self.loss.action_space()) {
            (Some((lower, upper)), ActionSpace::RealBox { .. }) => ActionSpace::RealBox {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            (_, space) => space,
        }
    }

    pub fn is_log_based(&self) -> bool {
        self.loss.is_log_based()
    }

    pub fn eval(&self, state: &[f64], action: &[f64]) -> f64 {
        self.loss.eval(state, action)
    }

    pub fn inner(&self) -> &dyn Loss {
        self.loss.as_ref()
    }

    pub(crate) fn check_width(&self, width: usize) -> Result<()> {
        let expected = self.state_kind().width();
        if width != expected {
            return Err(Error::KindMismatch(format!(
                "loss {} expects states of width {expected}, got {width}",
                self.name()
            )));
        }
        Ok(())
    }
}

/// States with normalized nonnegative weights, e.g. `ℙ(·|B)` on one block.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStates {
    states: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl WeightedStates {
    pub fn new(states: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidWeights("no states".into()));
        }
        if states.len() != weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} states but {} weights",
                states.len(),
                weights.len()
            )));
        }
        let width = states[0].len();
        if states.iter().any(|s| s.len() != width) {
            return Err(Error::InvalidWeights("states of unequal width".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(
                "negative or non-finite weight".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(WeightedStates { states, weights })
    }

    /// A single state with weight one.
    pub fn point(state: Vec<f64>) -> Self {
        WeightedStates {
            states: vec![state],
            weights: vec![1.0],
        }
    }

    /// A distribution over symbols `0..k`, each symbol realized as `δ_i`.
    pub fn over_symbols(probabilities: &[f64]) -> Result<Self> {
        let k = probabilities.len();
        WeightedStates::new(
            (0..k).map(|i| one_hot(k, i)).collect(),
            probabilities.to_vec(),
        )
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn width(&self) -> usize {
        self.states[0].len()
    }

    /// Weighted mean of the states (for distributions: the mixture).
    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.width()];
        for (state, w) in self.states.iter().zip(&self.weights) {
            for (m, s) in mean.iter_mut().zip(state) {
                *m += w * s;
            }
        }
        mean
    }

    pub(crate) fn active(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.states
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(s, w)| (s.as_slice(), *w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesActResult {
    pub action: Vec<f64>,
    pub risk: ExtendedReal,
    pub method: SolveMethod,
    pub solver_iterations: usize,
}

fn eval_checked(loss: &LossModel, state: &[f64], action: &[f64]) -> Result<ExtendedReal> {
    let v = loss.eval(state, action);
    ExtendedReal::from_f64(v).map_err(|_| {
        Error::NonFiniteEval(format!("{} returned NaN at action {action:?}", loss.name()))
    })
}

/// `Σ_i w_i · l(s_i, action)`, skipping zero weights.
pub fn expected_loss(
    loss: &LossModel,
    states: &WeightedStates,
    action: &[f64],
) -> Result<ExtendedReal> {
    let mut total = ExtendedReal::ZERO;
    for (state, w) in states.active() {
        total = total.checked_add(eval_checked(loss, state, action)?.weighted(w))?;
    }
    Ok(total)
}

/// A Bayes act `a_q ∈ argmin_a 𝔼_q[l(X, a)]`.
pub fn bayes_act(loss: &LossModel, states: &WeightedStates) -> Result<BayesActResult> {
    loss.check_width(states.width())?;
    if loss.closed_forms {
        if let Some(action) = loss.loss.bayes_rule(states) {
            let risk = expected_loss(loss, states, &action)?;
            return Ok(BayesActResult {
                action,
                risk,
                method: SolveMethod::ClosedForm,
                solver_iterations: 0,
            });
        }
    }
    let risk_at = |a: &[f64]| -> Result<f64> {
        let mut total = 0.0;
        for (state, w) in states.active() {
            let v = loss.eval(state, a);
            if v.is_nan() {
                return Err(Error::NonFiniteEval(format!(
                    "{} returned NaN at action {a:?}",
                    loss.name()
                )));
            }
            total += w * v;
        }
        Ok(total)
    };
    let solution = match loss.action_space() {
        ActionSpace::RealBox { lower, upper } => {
            if lower.iter().chain(&upper).any(|b| !b.is_finite()) {
                return Err(Error::UnboundedSearch(format!(
                    "{} has an unbounded action box; set action bounds",
                    loss.name()
                )));
            }
            solver::minimize_in_box(risk_at, &lower, &upper)?
        }
        ActionSpace::Simplex { size } => {
            let gradient_at = |a: &[f64]| -> Result<Vec<f64>> {
                let mut grad = vec![0.0; size];
                for (state, w) in states.active() {
                    let g = match loss.loss.action_gradient(state, a) {
                        Some(g) => g,
                        None => solver::finite_difference_gradient(|b| Ok(loss.eval(state, b)), a)?,
                    };
                    for (acc, gi) in grad.iter_mut().zip(g) {
                        *acc += w * gi;
                    }
                }
                Ok(grad)
            };
            solver::minimize_on_simplex(risk_at, gradient_at, size)?
        }
        space @ ActionSpace::DensityGrid => {
            return Err(Error::UnsupportedActionSpace(space.to_string()))
        }
    };
    let risk = expected_loss(loss, states, &solution.action)?;
    Ok(BayesActResult {
        action: solution.action,
        risk,
        method: SolveMethod::Numeric,
        solver_iterations: solution.iterations,
    })
}

/// `inf_a l(x, a)`; `exact` is false when only a numeric upper bound is
/// available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseMin {
    pub value: ExtendedReal,
    pub exact: bool,
}

pub fn pointwise_min_loss(loss: &LossModel, state: &[f64]) -> Result<PointwiseMin> {
    loss.check_width(state.len())?;
    if loss.closed_forms {
        if let Some(value) = loss.loss.pointwise_min(state) {
            return Ok(PointwiseMin { value, exact: true });
        }
    }
    let result = bayes_act(loss, &WeightedStates::point(state.to_vec()))?;
    Ok(PointwiseMin {
        value: result.risk,
        exact: false,
    })
}

/// Divergence of the scoring rule induced by `loss`:
/// `D(p‖q) = 𝔼_p[l(X, a_q) − l(X, a_p)]`.
pub fn scoring_divergence(
    loss: &LossModel,
    p: &WeightedStates,
    q: &WeightedStates,
) -> Result<ExtendedReal> {
    let act_q = bayes_act(loss, q)?.action;
    let act_p = bayes_act(loss, p)?.action;
    divergence_between_acts(loss, p, &act_q, &act_p)
}

/// `𝔼_p[l(X, act_q) − l(X, act_p)]`, summed termwise.
pub(crate) fn divergence_between_acts(
    loss: &LossModel,
    p: &WeightedStates,
    act_q: &[f64],
    act_p: &[f64],
) -> Result<ExtendedReal> {
    let mut total = ExtendedReal::ZERO;
    for (state, w) in p.active() {
        let lq = eval_checked(loss, state, act_q)?;
        let lp = eval_checked(loss, state, act_p)?;
        total = total.checked_add(lq.checked_sub(lp)?.weighted(w))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_states_validation() {
        assert!(WeightedStates::new(vec![], vec![]).is_err());
        assert!(WeightedStates::new(vec![vec![0.0]], vec![0.5]).is_err());
        assert!(WeightedStates::new(vec![vec![0.0], vec![1.0, 2.0]], vec![0.5, 0.5]).is_err());
        assert!(WeightedStates::new(vec![vec![0.0], vec![1.0]], vec![1.5, -0.5]).is_err());
        assert!(WeightedStates::new(vec![vec![0.0]], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn square_error_bayes_act_is_mean() {
        let ws = WeightedStates::new(vec![vec![0.0], vec![1.0]], vec![0.5, 0.5]).unwrap();
        let r = bayes_act(&LossModel::square_error(1), &ws).unwrap();
        assert_eq!(r.action, vec![0.5]);
        assert_eq!(r.risk, ExtendedReal::Finite(0.25));
        assert_eq!(r.method, SolveMethod::ClosedForm);
        assert_eq!(r.solver_iterations, 0);
    }

    #[test]
    fn log_loss_bayes_act_is_weight_vector() {
        let ws = WeightedStates::over_symbols(&[0.2, 0.3, 0.5]).unwrap();
        let r = bayes_act(&LossModel::log_loss(3), &ws).unwrap();
        assert_eq!(r.action, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn bregman_bayes_act_is_mean() {
        let ws = WeightedStates::new(
            vec![vec![0.5, 1.0], vec![2.0, 0.25], vec![1.0, 1.0]],
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        for loss in [
            LossModel::bregman(NegativeEntropy, 2),
            LossModel::bregman(ExponentialSum, 2),
            LossModel::bregman(SquaredNorm, 2),
        ] {
            let r = bayes_act(&loss, &ws).unwrap();
            let mean = ws.mean();
            for (a, m) in r.action.iter().zip(&mean) {
                assert!((a - m).abs() < 1e-15, "{}", loss.name());
            }
        }
    }

    #[test]
    fn numeric_square_error_matches_mean() {
        let ws = WeightedStates::new(vec![vec![-1.0], vec![0.5], vec![3.0]], vec![0.1, 0.6, 0.3])
            .unwrap();
        let loss = LossModel::square_error(1)
            .without_closed_forms()
            .with_action_bounds(vec![-10.0], vec![10.0])
            .unwrap();
        let r = bayes_act(&loss, &ws).unwrap();
        assert_eq!(r.method, SolveMethod::Numeric);
        assert!(r.solver_iterations > 0);
        assert!((r.action[0] - ws.mean()[0]).abs() < 1e-6);
    }

    #[test]
    fn numeric_search_requires_bounds() {
        let ws = WeightedStates::point(vec![1.0]);
        let loss = LossModel::square_error(1).without_closed_forms();
        assert!(matches!(
            bayes_act(&loss, &ws),
            Err(Error::UnboundedSearch(_))
        ));
    }

    #[test]
    fn numeric_log_loss_on_simplex() {
        let ws = WeightedStates::over_symbols(&[0.2, 0.3, 0.5]).unwrap();
        let closed = bayes_act(&LossModel::log_loss(3), &ws).unwrap();
        let numeric = bayes_act(&LossModel::log_loss(3).without_closed_forms(), &ws).unwrap();
        let gap = numeric.risk.finite().unwrap() - closed.risk.finite().unwrap();
        assert!((0.0..1e-6).contains(&gap), "gap {gap}");
    }

    #[test]
    fn state_width_is_checked() {
        let ws = WeightedStates::point(vec![1.0, 2.0]);
        assert!(matches!(
            bayes_act(&LossModel::square_error(1), &ws),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn pointwise_minima() {
        let sq = LossModel::square_error(1);
        assert_eq!(
            pointwise_min_loss(&sq, &[7.0]).unwrap(),
            PointwiseMin {
                value: ExtendedReal::ZERO,
                exact: true
            }
        );
        let log = LossModel::log_loss(3);
        assert_eq!(
            pointwise_min_loss(&log, &[0.0, 1.0, 0.0]).unwrap().value,
            ExtendedReal::ZERO
        );
        let kl = LossModel::kl(2);
        assert_eq!(
            pointwise_min_loss(&kl, &[0.3, 0.7]).unwrap().value,
            ExtendedReal::ZERO
        );
        let bounded = sq
            .without_closed_forms()
            .with_action_bounds(vec![-10.0], vec![10.0])
            .unwrap();
        let numeric = pointwise_min_loss(&bounded, &[7.0]).unwrap();
        assert!(!numeric.exact);
        assert!(numeric.value.finite().unwrap() < 1e-12);
    }

    #[test]
    fn log_loss_divergence_is_kl() {
        let p = [0.1, 0.6, 0.3];
        let q = [0.4, 0.4, 0.2];
        let d = scoring_divergence(
            &LossModel::log_loss(3),
            &WeightedStates::over_symbols(&p).unwrap(),
            &WeightedStates::over_symbols(&q).unwrap(),
        )
        .unwrap()
        .finite()
        .unwrap();
        let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
        assert!((d - kl).abs() < 1e-15);
    }

    #[test]
    fn divergence_to_self_is_zero() {
        let p = WeightedStates::over_symbols(&[0.25, 0.25, 0.5]).unwrap();
        for loss in [
            LossModel::log_loss(3),
            LossModel::tsallis(3, 2.0).unwrap(),
            LossModel::kl(3),
        ] {
            let d = scoring_divergence(&loss, &p, &p).unwrap();
            assert_eq!(d, ExtendedReal::ZERO, "{}", loss.name());
        }
    }

    #[test]
    fn divergence_with_unreachable_support_is_infinite() {
        let p = WeightedStates::over_symbols(&[0.5, 0.5]).unwrap();
        let q = WeightedStates::over_symbols(&[1.0, 0.0]).unwrap();
        let d = scoring_divergence(&LossModel::log_loss(2), &p, &q).unwrap();
        assert_eq!(d, ExtendedReal::PosInf);
    }
}
