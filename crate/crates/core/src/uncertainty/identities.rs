//! Identity checkers. Each returns residuals or terms; thresholds belong to
//! the caller.

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::losses::{
    bayes_act, bregman_divergence, divergence_between_acts, ConvexGenerator, LossModel,
    WeightedStates,
};
use crate::partition::Partition;
use crate::space::{conditional_expectation, expectation, law, RandomElement, SampleSpace};

use super::{check_kind, conditional_entropy, entropy, information, Reduced};

fn require_real(x: &RandomElement, what: &str) -> Result<()> {
    match x.kind() {
        crate::space::ElementKind::RealVector { .. } => Ok(()),
        kind => Err(Error::KindMismatch(format!(
            "{what} needs a real-vector element, got {kind:?}"
        ))),
    }
}

fn generator_value(phi: &dyn ConvexGenerator, point: &[f64]) -> Result<f64> {
    if !phi.in_domain(point) {
        return Err(Error::OutsideDomain(format!(
            "{point:?} for generator {}",
            phi.name()
        )));
    }
    let v = phi.value(point);
    if !v.is_finite() {
        return Err(Error::OutsideDomain(format!(
            "{} is not finite at {point:?}",
            phi.name()
        )));
    }
    Ok(v)
}

/// Jensen gap `𝔼[φ(𝔼[X|σ])] − φ(𝔼[X])`.
pub fn bregman_information(
    space: &SampleSpace,
    x: &RandomElement,
    phi: &dyn ConvexGenerator,
    knowledge: &Partition,
) -> Result<ExtendedReal> {
    require_real(x, "Bregman information")?;
    let reduced = Reduced::new(space, x)?;
    let p = reduced.partition(knowledge)?;
    let cond = conditional_expectation(&reduced.space, &reduced.x, &p)?;
    let mut total = 0.0;
    for block in p.blocks() {
        let mass = reduced.space.mass(block);
        total += mass * generator_value(phi, cond.value(block[0]))?;
    }
    let mean = expectation(&reduced.space, &reduced.x)?;
    Ok(ExtendedReal::Finite(total - generator_value(phi, &mean)?))
}

fn finite_term(label: &str, value: ExtendedReal) -> Result<f64> {
    value
        .finite()
        .ok_or_else(|| Error::InfiniteTerm(format!("{label} = {value}")))
}

/// `|H(X) − I(X;σ) − H(X|σ)|`.
pub fn check_telescope(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    mid: &Partition,
) -> Result<f64> {
    let h = finite_term("H", entropy(space, x, loss)?.value)?;
    let i = finite_term("I", information(space, x, loss, mid)?.value)?;
    let hc = finite_term("H_cond", conditional_entropy(space, x, loss, mid)?.value)?;
    Ok((h - i - hc).abs())
}

/// `|𝔼[d(X,Y)] − 𝔼[d(X,𝔼[X|σ])] − 𝔼[d(𝔼[X|σ],Y)]|` for σ-measurable `y`.
pub fn check_pythagoras(
    space: &SampleSpace,
    x: &RandomElement,
    phi: &dyn ConvexGenerator,
    knowledge: &Partition,
    y: &RandomElement,
) -> Result<f64> {
    require_real(x, "Pythagorean check")?;
    require_real(y, "Pythagorean check")?;
    if x.kind() != y.kind() {
        return Err(Error::KindMismatch(format!(
            "X is {:?} but Y is {:?}",
            x.kind(),
            y.kind()
        )));
    }
    let reduced = Reduced::new(space, x)?;
    if y.atom_count() != space.atom_count() {
        return Err(Error::AtomCountMismatch {
            expected: space.atom_count(),
            found: y.atom_count(),
        });
    }
    let y = y.restrict(&reduced.kept);
    let p = reduced.partition(knowledge)?;
    if !y.is_measurable(&p) {
        return Err(Error::NotMeasurable(format!("Y against {p}")));
    }
    let cond = conditional_expectation(&reduced.space, &reduced.x, &p)?;
    let (mut direct, mut to_mean, mut from_mean) = (0.0, 0.0, 0.0);
    for atom in 0..reduced.space.atom_count() {
        let w = reduced.space.probability(atom);
        let xv = reduced.x.value(atom);
        let mv = cond.value(atom);
        let yv = y.value(atom);
        direct += w * bregman_divergence(phi, xv, yv)?;
        to_mean += w * bregman_divergence(phi, xv, mv)?;
        from_mean += w * bregman_divergence(phi, mv, yv)?;
    }
    for (label, term) in [
        ("E[d(X,Y)]", direct),
        ("E[d(X,E[X|σ])]", to_mean),
        ("E[d(E[X|σ],Y)]", from_mean),
    ] {
        if !term.is_finite() {
            return Err(Error::InfiniteTerm(format!("{label} = {term}")));
        }
    }
    Ok((direct - to_mean - from_mean).abs())
}

/// Terms of `𝔼[D(δ_X‖q)] = D(p_X‖q) + 𝔼[D(δ_X‖p_X)]` for a fixed belief `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefDecomposition {
    pub total: ExtendedReal,
    pub relative: ExtendedReal,
    pub entropy_term: ExtendedReal,
}

impl BeliefDecomposition {
    /// `|total − relative − entropy_term|` when all terms are finite.
    pub fn residual(&self) -> Result<f64> {
        let total = finite_term("total", self.total)?;
        let relative = finite_term("relative", self.relative)?;
        let entropy = finite_term("entropy_term", self.entropy_term)?;
        Ok((total - relative - entropy).abs())
    }
}

pub fn belief_decomposition(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    belief: &WeightedStates,
) -> Result<BeliefDecomposition> {
    check_kind(x, loss)?;
    let (states, probs) = law(space, x)?;
    let p_x = WeightedStates::new(states, probs)?;
    let act_q = bayes_act(loss, belief)?.action;
    let act_p = bayes_act(loss, &p_x)?.action;
    let mut total = ExtendedReal::ZERO;
    let mut entropy_term = ExtendedReal::ZERO;
    for (state, w) in p_x.active() {
        let point = WeightedStates::point(state.to_vec());
        let act_delta = bayes_act(loss, &point)?.action;
        let to_q = divergence_between_acts(loss, &point, &act_q, &act_delta)?;
        let to_p = divergence_between_acts(loss, &point, &act_p, &act_delta)?;
        total = total.checked_add(to_q.weighted(w))?;
        entropy_term = entropy_term.checked_add(to_p.weighted(w))?;
    }
    let relative = divergence_between_acts(loss, &p_x, &act_q, &act_p)?;
    Ok(BeliefDecomposition {
        total,
        relative,
        entropy_term,
    })
}
