//! Optimal risk under partial knowledge and the quantities built from it.
//!
//! Knowledge is a partition of the atoms. An action measurable with respect
//! to a partition is one constant action per block, so the optimal risk
//! splits into one Bayes-act problem per block:
//!
//! ```text
//! R(σ) = Σ_B ℙ(B) · min_a Σ_{ω∈B} ℙ(ω|B) l(X(ω), a)
//! ```
//!
//! Uncertainty reduction from `σ1` to `σ2` is `R(σ1) − R(σ2)`; entropy,
//! conditional entropy, information and conditional information are the
//! special cases obtained by fixing the endpoints to the trivial partition
//! and `σ(X)`.

mod identities;
mod representations;
mod sweep;

use std::fmt;

pub use identities::{
    belief_decomposition, bregman_information, check_pythagoras, check_telescope,
    BeliefDecomposition,
};
pub use representations::{
    conditional_entropy_as_divergence, conditional_information_as_divergence,
    entropy_as_divergence, information_as_divergence,
};
pub use sweep::{lattice_sweep, LatticeSummary, LatticeSweep};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::losses::{bayes_act, LossModel, WeightedStates};
use crate::partition::Partition;
use crate::space::{partition_of_element, RandomElement, SampleSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Entropy,
    ConditionalEntropy,
    Information,
    ConditionalInformation,
    UncertaintyReduction,
}

impl Quantity {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantity::Entropy => "H",
            Quantity::ConditionalEntropy => "H_cond",
            Quantity::Information => "I",
            Quantity::ConditionalInformation => "I_cond",
            Quantity::UncertaintyReduction => "U",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A computed uncertainty reduction with the two optimal risks behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub quantity: Quantity,
    pub value: ExtendedReal,
    pub risk_from: ExtendedReal,
    pub risk_to: ExtendedReal,
    pub loss_name: String,
    pub from: Partition,
    pub to: Partition,
}

/// Space, element and partitions restricted to the support of the space.
pub(crate) struct Reduced {
    pub space: SampleSpace,
    pub x: RandomElement,
    pub kept: Vec<usize>,
    original: usize,
}

impl Reduced {
    pub fn new(space: &SampleSpace, x: &RandomElement) -> Result<Reduced> {
        if x.atom_count() != space.atom_count() {
            return Err(Error::AtomCountMismatch {
                expected: space.atom_count(),
                found: x.atom_count(),
            });
        }
        let (reduced, kept) = space.drop_null_atoms();
        Ok(Reduced {
            original: space.atom_count(),
            x: x.restrict(&kept),
            space: reduced,
            kept,
        })
    }

    pub fn partition(&self, p: &Partition) -> Result<Partition> {
        if p.atom_count() != self.original {
            return Err(Error::AtomCountMismatch {
                expected: self.original,
                found: p.atom_count(),
            });
        }
        p.restrict(&self.kept)
    }
}

pub(crate) fn check_kind(x: &RandomElement, loss: &LossModel) -> Result<()> {
    if x.kind() != loss.state_kind() {
        return Err(Error::KindMismatch(format!(
            "element of kind {:?} with loss {} over {:?}",
            x.kind(),
            loss.name(),
            loss.state_kind()
        )));
    }
    Ok(())
}

/// States of `x` on `block` weighted by `ℙ(·|block)`, with the block mass.
pub(crate) fn block_states(
    space: &SampleSpace,
    x: &RandomElement,
    block: &[usize],
) -> Result<(WeightedStates, f64)> {
    let mass = space.mass(block);
    if mass <= 0.0 {
        return Err(Error::ZeroMassBlock { block: block[0] });
    }
    let states = block.iter().map(|&a| x.value(a).to_vec()).collect();
    let weights = block.iter().map(|&a| space.probability(a) / mass).collect();
    Ok((WeightedStates::new(states, weights)?, mass))
}

/// Optimal risk on an already reduced space.
pub(crate) fn reduced_risk(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    partition: &Partition,
) -> Result<ExtendedReal> {
    let mut total = ExtendedReal::ZERO;
    for block in partition.blocks() {
        let (states, mass) = block_states(space, x, block)?;
        let risk = bayes_act(loss, &states)?.risk;
        total = total.checked_add(risk.weighted(mass))?;
    }
    Ok(total)
}

/// `inf_{A∈σ} 𝔼[l(X, A)]` for the σ-algebra generated by `partition`.
pub fn optimal_risk(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    partition: &Partition,
) -> Result<ExtendedReal> {
    check_kind(x, loss)?;
    let reduced = Reduced::new(space, x)?;
    let p = reduced.partition(partition)?;
    reduced_risk(&reduced.space, &reduced.x, loss, &p)
}

fn report(
    quantity: Quantity,
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    from: Partition,
    to: Partition,
) -> Result<UncertaintyReport> {
    let risk_from = optimal_risk(space, x, loss, &from)?;
    let risk_to = optimal_risk(space, x, loss, &to)?;
    Ok(UncertaintyReport {
        quantity,
        value: risk_from.checked_sub(risk_to)?,
        risk_from,
        risk_to,
        loss_name: loss.name(),
        from,
        to,
    })
}

/// `𝒰_{σ1→σ2}(X) = R(σ1) − R(σ2)`; negative when `to` knows less.
pub fn uncertainty_reduction(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    from: &Partition,
    to: &Partition,
) -> Result<UncertaintyReport> {
    report(
        Quantity::UncertaintyReduction,
        space,
        x,
        loss,
        from.clone(),
        to.clone(),
    )
}

/// `H(X) = 𝒰_{{∅,Ω}→σ(X)}`.
pub fn entropy(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
) -> Result<UncertaintyReport> {
    report(
        Quantity::Entropy,
        space,
        x,
        loss,
        Partition::trivial(space.atom_count())?,
        partition_of_element(space, x)?,
    )
}

/// `H(X|σ) = 𝒰_{σ→σ(X)}`. For `H(X|Y)` pass `σ(Y)`.
pub fn conditional_entropy(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    knowledge: &Partition,
) -> Result<UncertaintyReport> {
    report(
        Quantity::ConditionalEntropy,
        space,
        x,
        loss,
        knowledge.clone(),
        partition_of_element(space, x)?,
    )
}

/// `I(X;σ) = 𝒰_{{∅,Ω}→σ}`.
pub fn information(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    knowledge: &Partition,
) -> Result<UncertaintyReport> {
    report(
        Quantity::Information,
        space,
        x,
        loss,
        Partition::trivial(space.atom_count())?,
        knowledge.clone(),
    )
}

/// `I(X;outer|inner) = 𝒰_{inner→inner∨outer}`, i.e. `I(X;Y|Z)` is
/// `I(X;σ(Y,Z)|σ(Z))` with `inner = σ(Z)`, `outer = σ(Y)`.
pub fn conditional_information(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    inner: &Partition,
    outer: &Partition,
) -> Result<UncertaintyReport> {
    let joined = inner.join(outer)?;
    report(
        Quantity::ConditionalInformation,
        space,
        x,
        loss,
        inner.clone(),
        joined,
    )
}
